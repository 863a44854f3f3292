use serde::{Deserialize, Serialize};

use super::Representation;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, RANK_TOL};
use crate::presentation::Gen;
use crate::Complex64;

/// Eigenvalue gaps above `REGULAR_GAP · scale` count as distinct.
const REGULAR_GAP: f64 = 1e-8;
/// Gaps at or below `COINCIDENT_GAP · scale` count as a repeated eigenvalue.
const COINCIDENT_GAP: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepClassification {
    pub r: usize,
    /// `ρ(c) = Id`, i.e. `ρ` descends to the surface group.
    pub factoring: bool,
    /// `ρ(c) = ζ Id` for this scalar.
    pub c_scalar: Option<Complex64>,
    pub irreducible: bool,
    /// Dimension of the commutant of the image.
    pub commutant_dim: usize,
    /// Dimension of the invariant vectors.
    pub invariant_dim: usize,
    /// Some handle `(a_ℓ, b_ℓ)` has regular images with trivial joint
    /// centralizer, and `ρ` is irreducible.
    pub generic_member: bool,
    /// Handles witnessing membership (1-based).
    pub witness_handles: Vec<usize>,
    pub relator_residual: f64,
    pub max_condition: f64,
}

/// Regular means the centralizer has dimension exactly `r`. Distinct
/// eigenvalues decide this directly. With a repeated eigenvalue the
/// centralizer is computed; a gap in the band between the two thresholds is
/// refused.
pub fn is_regular(m: &CMat) -> Result<bool> {
    let r = m.nrows();
    if r <= 1 {
        return Ok(true);
    }
    let ev = linalg::eigenvalues(m);
    let scale = ev.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut gap = f64::INFINITY;
    for i in 0..r {
        for j in i + 1..r {
            gap = gap.min((ev[i] - ev[j]).norm());
        }
    }
    if gap > REGULAR_GAP * scale {
        Ok(true)
    } else if gap <= COINCIDENT_GAP * scale {
        Ok(centralizer_dimension(std::slice::from_ref(m))? == r)
    } else {
        Err(Error::IllConditioned(format!(
            "eigenvalue gap {gap:e} lies between {:e} and {:e} (relative to {scale:e})",
            COINCIDENT_GAP * scale,
            REGULAR_GAP * scale
        )))
    }
}

/// Dimension of `{X : X m = m X for all m}`, with ranks measured against
/// the size of the `m`.
pub fn centralizer_dimension(ms: &[CMat]) -> Result<usize> {
    let maps: Vec<CMat> = ms.iter().map(linalg::commutator_map).collect();
    if maps.is_empty() {
        return Err(Error::InvalidInput("centralizer of an empty set".into()));
    }
    let scale = ms.iter().map(linalg::max_abs).fold(0.0, f64::max);
    linalg::nullity_scaled(&linalg::vstack(&maps), RANK_TOL, scale)
}

/// Dimension of `{v : ρ(g) v = v for all generators g}`.
pub fn invariant_dim(rep: &Representation) -> Result<usize> {
    let id = linalg::identity(rep.r);
    let blocks: Vec<CMat> = rep.images.iter().map(|m| m - &id).collect();
    let scale = rep.images.iter().map(linalg::max_abs).fold(1.0, f64::max);
    linalg::nullity_scaled(&linalg::vstack(&blocks), RANK_TOL, scale)
}

/// Dimension of the algebra spanned by all words in the images, by span
/// closure under left multiplication with modified Gram-Schmidt.
pub fn burnside_span_dim(images: &[CMat]) -> usize {
    let r = images.first().map(|m| m.nrows()).unwrap_or(1);
    let full = r * r;
    let mut basis: Vec<nalgebra::DVector<Complex64>> = Vec::new();
    let mut mats: Vec<CMat> = Vec::new();
    let push = |m: CMat, basis: &mut Vec<nalgebra::DVector<Complex64>>, mats: &mut Vec<CMat>| {
        let mut v = nalgebra::DVector::from_column_slice(m.as_slice());
        let n0 = v.norm();
        if n0 == 0.0 {
            return;
        }
        for _ in 0..2 {
            for q in basis.iter() {
                let p = q.dotc(&v);
                v -= q * p;
            }
        }
        let n = v.norm();
        if n > 1e-8 * n0 {
            basis.push(v / Complex64::new(n, 0.0));
            mats.push(m / Complex64::new(n0, 0.0));
        }
    };
    push(linalg::identity(r), &mut basis, &mut mats);
    let mut i = 0;
    while i < mats.len() && basis.len() < full {
        let cur = mats[i].clone();
        for g in images {
            push(g * &cur, &mut basis, &mut mats);
        }
        i += 1;
    }
    basis.len()
}

pub fn classify(rep: &Representation) -> Result<RepClassification> {
    let r = rep.r;
    let cim = rep.c_image();
    let id = linalg::identity(r);
    let tol = rep.tol.max(1e-12) * 10.0;
    let factoring = linalg::max_abs_diff(&cim, &id) <= tol;
    let zeta = cim.trace() / Complex64::new(r as f64, 0.0);
    let c_scalar = (linalg::max_abs_diff(&cim, &linalg::scalar(r, zeta)) <= tol).then_some(zeta);

    let span = burnside_span_dim(&rep.images);
    let commutant_dim = centralizer_dimension(&rep.images)?;
    let irreducible = span == r * r;
    if irreducible != (commutant_dim == 1) {
        return Err(Error::IllConditioned(format!(
            "span closure gives dimension {span} of {} but the commutant has dimension {commutant_dim}",
            r * r
        )));
    }
    let invariant_dim = invariant_dim(rep)?;

    let g = rep.genus();
    let mut witness_handles = Vec::new();
    if irreducible {
        for l in 1..=g {
            let a = rep.image(Gen::A(l as u16));
            let b = rep.image(Gen::B(l as u16));
            if is_regular(a)? && is_regular(b)? && centralizer_dimension(&[a.clone(), b.clone()])? == 1 {
                witness_handles.push(l);
            }
        }
    }
    Ok(RepClassification {
        r,
        factoring,
        c_scalar,
        irreducible,
        commutant_dim,
        invariant_dim,
        generic_member: !witness_handles.is_empty(),
        witness_handles,
        relator_residual: rep.relator_residual(),
        max_condition: rep.max_condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::presentation::PresentationKind;
    use crate::representation::{adjoint_rep, clock_shift_pair, trivial_rep, unitary_generic_rep};

    #[test]
    fn regularity() {
        let (a, b) = clock_shift_pair(3).unwrap();
        assert!(is_regular(&a).unwrap() && is_regular(&b).unwrap());
        assert!(!is_regular(&linalg::identity(2)).unwrap());
        let jordan = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(is_regular(&jordan).unwrap());
        let near = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(1.0 + 1e-9, 0.0)]));
        assert!(matches!(is_regular(&near), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn unitary_reps_are_generic() {
        for r in 2..=3 {
            for j in 1..=2 * r {
                let cl = classify(&unitary_generic_rep(2, r, j).unwrap()).unwrap();
                assert!(cl.irreducible && cl.generic_member, "r={r} j={j}");
                assert_eq!(cl.factoring, j == 2 * r);
                assert!(cl.c_scalar.is_some());
                assert_eq!(cl.invariant_dim, 0);
            }
        }
    }

    #[test]
    fn trivial_and_sums() {
        let t = trivial_rep(PresentationKind::UnitTangent(2), 2).unwrap();
        let cl = classify(&t).unwrap();
        assert!(!cl.irreducible && !cl.generic_member && cl.factoring);
        assert_eq!((cl.commutant_dim, cl.invariant_dim), (4, 2));
        let u = unitary_generic_rep(2, 2, 1).unwrap();
        let s = u.direct_sum(&u).unwrap();
        let cl = classify(&s).unwrap();
        assert!(!cl.irreducible);
        assert_eq!(cl.commutant_dim, 4);
    }

    #[test]
    fn adjoint_is_irreducible_and_generic() {
        let ad = adjoint_rep(&crate::fuchsian::bolza_group()).unwrap();
        let cl = classify(&ad).unwrap();
        assert!(cl.irreducible && cl.factoring && cl.generic_member);
        assert_eq!(cl.invariant_dim, 0);
    }
}
