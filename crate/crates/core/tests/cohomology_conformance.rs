//! Cohomology dimensions of the unit tangent group against the closed-form
//! counts: factoring reps have `h0 = r1`, `h1 = r(2G-2) + 2 r1`; irreducible
//! non-factoring reps are acyclic.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twzeta_core::cohomology::{build_complex, cohomology_dims, m_from_cohomology};
use twzeta_core::linalg::{self, CMat, RANK_TOL};
use twzeta_core::presentation::{surface_presentation, unit_tangent_presentation};
use twzeta_core::representation::{
    adjoint_rep, classify, sl2_lift_rep, trivial_rep, unitary_generic_rep, Representation,
};
use twzeta_core::{bolza_group, surface_group_regular_polygon, PresentationKind};

/// Diagonal unitary character with the first `trivial` coordinates trivial.
fn diagonal_character(genus: usize, r: usize, trivial: usize, rng: &mut ChaCha8Rng) -> Representation {
    let mut images = Vec::new();
    for _ in 0..2 * genus {
        let d = nalgebra::DVector::from_fn(r, |k, _| {
            if k < trivial {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, rng.gen_range(0.3..6.0))
            }
        });
        images.push(CMat::from_diagonal(&d));
    }
    images.push(linalg::identity(r));
    Representation::new(PresentationKind::UnitTangent(genus), images, 1e-10).unwrap()
}

fn check_factoring(rep: &Representation, r1: usize) {
    let g = rep.genus();
    let p = unit_tangent_presentation(g).unwrap();
    let d = cohomology_dims(&p, rep, RANK_TOL).unwrap();
    let r = rep.r;
    assert_eq!(d.h0, r1, "h0 for r={r} G={g} dims {:?}", d.as_vec());
    assert_eq!(d.h1, r * (2 * g - 2) + 2 * r1, "h1 for r={r} G={g} r1={r1}");
    assert_eq!(d.euler_characteristic(), 0);
    assert!(d.gap_report.iter().all(|x| x.rank.gap_ratio >= 1e3));
}

fn check_acyclic(rep: &Representation) {
    let p = unit_tangent_presentation(rep.genus()).unwrap();
    let d = cohomology_dims(&p, rep, RANK_TOL).unwrap();
    assert_eq!(d.as_vec(), vec![0, 0, 0, 0], "r={} G={}", rep.r, rep.genus());
    assert_eq!(m_from_cohomology(&d.as_vec(), 1).unwrap(), 0);
}

#[test]
fn factoring_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for genus in 2..=3 {
        for r in 1..=3 {
            let kind = PresentationKind::UnitTangent(genus);
            check_factoring(&trivial_rep(kind, r).unwrap(), r);
            for trivial in 0..r {
                check_factoring(&diagonal_character(genus, r, trivial, &mut rng), trivial);
            }
            let irr = unitary_generic_rep(genus, r, r * (2 * genus - 2)).unwrap();
            assert!(classify(&irr).unwrap().factoring);
            check_factoring(&irr, if r == 1 { 1 } else { 0 });
            if r >= 2 {
                let sum = irr.direct_sum(&trivial_rep(kind, 1).unwrap()).unwrap();
                check_factoring(&sum, 1);
            }
        }
    }
}

#[test]
fn adjoint_is_factoring_irreducible() {
    check_factoring(&adjoint_rep(&bolza_group()).unwrap(), 0);
    check_factoring(&adjoint_rep(&surface_group_regular_polygon(3).unwrap()).unwrap(), 0);
}

#[test]
fn non_factoring_irreducible_are_acyclic() {
    for genus in 2..=3 {
        for r in 1..=3 {
            for j in 1..r * (2 * genus - 2) {
                let rep = unitary_generic_rep(genus, r, j).unwrap();
                let cl = classify(&rep).unwrap();
                assert!(cl.irreducible && !cl.factoring);
                check_acyclic(&rep);
            }
        }
    }
    let tau = sl2_lift_rep(&bolza_group(), None).unwrap();
    let cl = classify(&tau).unwrap();
    assert!(cl.irreducible && !cl.factoring);
    check_acyclic(&tau);
    check_acyclic(&sl2_lift_rep(&surface_group_regular_polygon(3).unwrap(), None).unwrap());
}

#[test]
fn chain_condition_and_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let reps = vec![
        unitary_generic_rep(2, 3, 2).unwrap(),
        adjoint_rep(&bolza_group()).unwrap(),
        sl2_lift_rep(&bolza_group(), None).unwrap(),
        diagonal_character(2, 2, 1, &mut rng),
    ];
    for rep in &reps {
        let p = unit_tangent_presentation(rep.genus()).unwrap();
        let cx = build_complex(&p, rep).unwrap();
        let scale = linalg::max_abs(&cx.d1).max(1.0) * linalg::max_abs(&cx.d0).max(1.0);
        assert!(cx.chain_residual <= 1e-10 * scale);
        let d = cohomology_dims(&p, rep, RANK_TOL).unwrap();
        let dual = cohomology_dims(&p, &rep.dual().unwrap(), RANK_TOL).unwrap();
        assert_eq!((d.h2, d.h3), (dual.h1, dual.h0));
        assert_eq!(d.euler_characteristic(), 0);
    }
}

#[test]
fn surface_presentation_matches_unit_tangent_for_factoring() {
    // H^0 and H^1 of a factoring rep agree on Σ and on M up to the extra
    // fibre class: h1(M) = h1(Σ) + h0(Σ).
    let g = bolza_group();
    let ad = adjoint_rep(&g).unwrap();
    let surf = Representation::new(PresentationKind::Surface(2), ad.images[..4].to_vec(), 1e-10).unwrap();
    let ds = cohomology_dims(&surface_presentation(2).unwrap(), &surf, RANK_TOL).unwrap();
    assert_eq!((ds.h0, ds.h1, ds.h2), (0, 6, 0));
    let t = trivial_rep(PresentationKind::Surface(2), 1).unwrap();
    let dt = cohomology_dims(&surface_presentation(2).unwrap(), &t, RANK_TOL).unwrap();
    assert_eq!((dt.h0, dt.h1, dt.h2), (1, 4, 1));
}
