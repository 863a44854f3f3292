use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twzeta_core::fuchsian::GeodesicClass;
use twzeta_core::linalg::{self, CMat};
use twzeta_core::representation::{
    adjoint_rep, classify, clock_shift_pair, geodesic_lift_holonomy, is_regular, sl2_lift_rep, trivial_rep,
    unitary_generic_rep, RepClassification, Representation,
};
use twzeta_core::{bolza_group, enumerate_spectrum, EnumOptions, PresentationKind};

fn random_matrix(r: usize, rng: &mut ChaCha8Rng) -> CMat {
    CMat::from_fn(r, r, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn random_conjugator(r: usize, rng: &mut ChaCha8Rng) -> CMat {
    loop {
        let p = random_matrix(r, rng) + linalg::identity(r);
        if linalg::condition_number(&p) <= 1e3 {
            return p;
        }
    }
}

fn diagonal_character(genus: usize, r: usize, rng: &mut ChaCha8Rng) -> Representation {
    let mut images: Vec<CMat> = (0..2 * genus)
        .map(|_| {
            CMat::from_diagonal(&nalgebra::DVector::from_fn(r, |_, _| {
                Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
            }))
        })
        .collect();
    images.push(linalg::identity(r));
    Representation::new(PresentationKind::UnitTangent(genus), images, 1e-10).unwrap()
}

/// Null vector of `m - λ` from the smallest right singular vector.
fn eigenvector(m: &CMat, lambda: Complex64) -> nalgebra::DVector<Complex64> {
    let r = m.nrows();
    let shifted = m - linalg::scalar(r, lambda);
    let svd = shifted.svd(false, true);
    let vt = svd.v_t.unwrap();
    let (k, _) = svd.singular_values.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, &s)| {
        if s < acc.1 {
            (i, s)
        } else {
            acc
        }
    });
    vt.row(k).adjoint()
}

/// Reducibility by exhaustive search: every invariant subspace of the image
/// algebra is spanned by eigenvectors of a regular diagonalizable image.
fn brute_force_irreducible(rep: &Representation) -> bool {
    let r = rep.r;
    let pivot = rep
        .images
        .iter()
        .find(|m| {
            let ev = linalg::eigenvalues(m);
            (0..r).all(|i| (i + 1..r).all(|j| (ev[i] - ev[j]).norm() > 1e-4))
        })
        .expect("test reps have an image with distinct eigenvalues");
    let ev = linalg::eigenvalues(pivot);
    let vecs: Vec<_> = ev.iter().map(|&l| eigenvector(pivot, l)).collect();
    for mask in 1..(1u32 << r) - 1 {
        let cols: Vec<_> = (0..r).filter(|i| mask & (1 << i) != 0).map(|i| vecs[i].clone()).collect();
        let w = CMat::from_columns(&cols);
        let q = w.qr().q();
        let proj = &q * q.adjoint();
        let invariant = rep.images.iter().all(|g| {
            let gw = g * &q;
            linalg::max_abs(&(&gw - &proj * &gw)) < 1e-8
        });
        if invariant {
            return false;
        }
    }
    true
}

fn flags(c: &RepClassification) -> (bool, bool, bool, bool, usize, usize) {
    (c.factoring, c.c_scalar.is_some(), c.irreducible, c.generic_member, c.commutant_dim, c.invariant_dim)
}

fn sample_reps() -> Vec<Representation> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = bolza_group();
    vec![
        unitary_generic_rep(2, 2, 1).unwrap(),
        unitary_generic_rep(2, 3, 5).unwrap(),
        unitary_generic_rep(3, 3, 12).unwrap(),
        adjoint_rep(&g).unwrap(),
        sl2_lift_rep(&g, None).unwrap(),
        diagonal_character(2, 2, &mut rng),
        diagonal_character(2, 3, &mut rng),
        unitary_generic_rep(2, 2, 3).unwrap().direct_sum(&diagonal_character(2, 1, &mut rng)).unwrap(),
    ]
}

#[test]
fn burnside_agrees_with_invariant_subspace_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for rep in sample_reps() {
        let p = random_conjugator(rep.r, &mut rng);
        let hidden = rep.conjugate(&p).unwrap();
        for x in [&rep, &hidden] {
            let cl = classify(x).unwrap();
            assert_eq!(cl.irreducible, brute_force_irreducible(x), "r = {}", x.r);
        }
    }
}

#[test]
fn generic_membership_exhaustive() {
    for genus in 2..=3 {
        for r in 2..=3 {
            for j in 1..=r * (2 * genus - 2) {
                let cl = classify(&unitary_generic_rep(genus, r, j).unwrap()).unwrap();
                assert!(cl.generic_member, "G={genus} r={r} j={j}");
                assert_eq!(cl.witness_handles.first(), Some(&1));
            }
        }
    }
}

#[test]
fn named_classifications() {
    let g = bolza_group();
    let tau = classify(&sl2_lift_rep(&g, None).unwrap()).unwrap();
    assert!(!tau.factoring && tau.irreducible);
    assert_eq!(tau.c_scalar, Some(Complex64::new(-1.0, 0.0)));
    let t = classify(&trivial_rep(PresentationKind::UnitTangent(2), 1).unwrap()).unwrap();
    assert!(t.factoring && t.irreducible && t.generic_member && t.invariant_dim == 1);
    let (a, b) = clock_shift_pair(4).unwrap();
    assert!(is_regular(&a).unwrap() && is_regular(&b).unwrap());
}

#[test]
fn lift_holonomy_eigenvalues() {
    let g = bolza_group();
    let tau = sl2_lift_rep(&g, None).unwrap();
    let sp = enumerate_spectrum(&g, 4.5, &EnumOptions::default()).unwrap();
    assert!(!sp.classes.is_empty());
    for cls in &sp.classes {
        let h = geodesic_lift_holonomy(&tau, cls).unwrap();
        let tr = h.trace();
        assert!((tr.re - 2.0 * (cls.length / 2.0).cosh()).abs() <= 1e-10 * tr.re);
        assert!(tr.im.abs() <= 1e-12 * tr.re);
        assert!((h.determinant() - Complex64::new(1.0, 0.0)).norm() <= 1e-10);
        let mut ev: Vec<f64> = linalg::eigenvalues(&h).iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[1] - (cls.length / 2.0).exp()).abs() <= 1e-9 * ev[1]);
    }
    let elliptic = GeodesicClass { word: "".parse().unwrap(), ..sp.classes[0].clone() };
    assert!(geodesic_lift_holonomy(&tau, &elliptic).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn classification_is_conjugation_invariant(seed in any::<u64>(), which in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = &sample_reps()[which];
        let p = random_conjugator(rep.r, &mut rng);
        let a = classify(rep).unwrap();
        let b = classify(&rep.conjugate(&p).unwrap());
        prop_assert!(b.is_ok(), "{:?}", b);
        let b = b.unwrap();
        prop_assert_eq!(flags(&a), flags(&b));
    }

    #[test]
    fn dual_preserves_invariants_of_trivial(r in 1usize..4, genus in 2usize..4) {
        let t = trivial_rep(PresentationKind::UnitTangent(genus), r).unwrap();
        let d = t.dual().unwrap();
        prop_assert_eq!(classify(&t).unwrap().invariant_dim, classify(&d).unwrap().invariant_dim);
    }
}
