//! Complex dense linear algebra helpers: audited numerical rank, spectra,
//! commutants.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

/// Default relative singular-value threshold.
pub const RANK_TOL: f64 = 1e-8;
/// Minimal ratio between the last kept and first dropped singular value.
pub const MIN_GAP_RATIO: f64 = 1e3;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(r: usize) -> CMat {
    CMat::identity(r, r)
}

pub fn scalar(r: usize, z: Complex64) -> CMat {
    CMat::from_diagonal_element(r, r, z)
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub sigma_max: f64,
    pub threshold: f64,
    /// Smallest kept singular value (none when rank 0).
    pub kept_min: Option<f64>,
    /// Largest dropped singular value (none when full rank).
    pub dropped_max: Option<f64>,
    /// `kept_min / max(dropped_max, roundoff)`, or `threshold / σ_max` for
    /// rank 0. Roundoff is `σ_max·max(rows, cols)·ε`.
    pub gap_ratio: f64,
}

/// Rank by the threshold `tol·σ_max`, refusing to decide when the kept and
/// dropped singular values around it are not separated by `MIN_GAP_RATIO`.
pub fn numerical_rank(m: &CMat, tol: f64) -> Result<RankReport> {
    numerical_rank_scaled(m, tol, 0.0)
}

/// As `numerical_rank` with threshold `tol·max(σ_max, scale)`, so that a
/// matrix which is zero up to roundoff relative to `scale` gets rank 0.
pub fn numerical_rank_scaled(m: &CMat, tol: f64, scale: f64) -> Result<RankReport> {
    let s = singular_values(m);
    let sigma_max = s.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return Ok(RankReport {
            rank: 0,
            sigma_max,
            threshold: 0.0,
            kept_min: None,
            dropped_max: None,
            gap_ratio: f64::INFINITY,
        });
    }
    let threshold = tol * sigma_max.max(scale);
    let rank = s.iter().take_while(|&&x| x > threshold).count();
    let kept_min = s.get(rank.wrapping_sub(1)).copied().filter(|_| rank > 0);
    let dropped_max = s.get(rank).copied();
    let roundoff = sigma_max * m.nrows().max(m.ncols()) as f64 * f64::EPSILON;
    let below = dropped_max.unwrap_or(0.0).max(roundoff);
    let gap_ratio = match kept_min {
        Some(k) => k / below,
        None => threshold / sigma_max,
    };
    let report = RankReport { rank, sigma_max, threshold, kept_min, dropped_max, gap_ratio };
    if gap_ratio < MIN_GAP_RATIO {
        return Err(Error::IllConditioned(format!(
            "singular values {kept_min:?} (kept) and {dropped_max:?} (dropped) around threshold {threshold:e} have gap ratio {gap_ratio:.3e} < {MIN_GAP_RATIO:e}"
        )));
    }
    Ok(report)
}

pub fn nullity(m: &CMat, tol: f64) -> Result<usize> {
    Ok(m.ncols() - numerical_rank(m, tol)?.rank)
}

pub fn nullity_scaled(m: &CMat, tol: f64, scale: f64) -> Result<usize> {
    Ok(m.ncols() - numerical_rank_scaled(m, tol, scale)?.rank)
}

/// Vertical concatenation of matrices with equal column counts.
pub fn vstack(ms: &[CMat]) -> CMat {
    let cols = ms.first().map(|m| m.ncols()).unwrap_or(0);
    let rows: usize = ms.iter().map(|m| m.nrows()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut r0 = 0;
    for m in ms {
        out.view_mut((r0, 0), (m.nrows(), cols)).copy_from(m);
        r0 += m.nrows();
    }
    out
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Matrix of `X ↦ mX − Xm` on column-major `vec(X)`.
pub fn commutator_map(m: &CMat) -> CMat {
    let r = m.nrows();
    let id = identity(r);
    kron(&id, m) - kron(&m.transpose(), &id)
}

/// Eigenvalues via the complex Schur form. Unshifted-stagnation cases (e.g.
/// permutation matrices) are retried after a fixed unitary similarity.
pub fn eigenvalues(m: &CMat) -> Vec<Complex64> {
    let r = m.nrows();
    if r == 0 {
        return Vec::new();
    }
    let eps = f64::EPSILON;
    let mut a = m.clone();
    for attempt in 0..4 {
        if let Some(schur) = nalgebra::Schur::try_new(a.clone(), eps, 10_000) {
            let (_, t) = schur.unpack();
            return (0..r).map(|i| t[(i, i)]).collect();
        }
        let q = mixing_unitary(r, attempt + 1);
        a = q.adjoint() * &a * &q;
    }
    panic!("Schur iteration failed to converge on a {r}x{r} matrix");
}

/// Deterministic dense unitary (a phased discrete Fourier matrix).
fn mixing_unitary(r: usize, seed: usize) -> CMat {
    let n = r as f64;
    CMat::from_fn(r, r, |i, j| {
        let phase = 2.0 * std::f64::consts::PI * (i * j) as f64 / n + 0.37 * (seed * (i + 1)) as f64;
        Complex64::from_polar(1.0 / n.sqrt(), phase)
    })
}

pub fn spectral_radius(m: &CMat) -> f64 {
    eigenvalues(m).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

/// Operator 2-norm condition number (infinite when singular).
pub fn condition_number(m: &CMat) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidInput("matrix is not invertible".into()))
}

/// `M^n` by repeated squaring (n ≥ 0).
pub fn pow(m: &CMat, mut n: u32) -> CMat {
    let mut base = m.clone();
    let mut acc = identity(m.nrows());
    while n > 0 {
        if n & 1 == 1 {
            acc = &acc * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    acc
}

pub fn is_unitary(m: &CMat, tol: f64) -> bool {
    max_abs_diff(&(m.adjoint() * m), &identity(m.nrows())) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_of_simple_matrices() {
        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(numerical_rank(&m, RANK_TOL).unwrap().rank, 1);
        assert_eq!(numerical_rank(&identity(3), RANK_TOL).unwrap().rank, 3);
        assert_eq!(numerical_rank(&CMat::zeros(3, 2), RANK_TOL).unwrap().rank, 0);
        assert_eq!(nullity(&CMat::zeros(0, 4), RANK_TOL).unwrap(), 4);
        let tiny = scalar(2, c(0.0, 2e-16));
        assert_eq!(numerical_rank(&tiny, RANK_TOL).unwrap().rank, 2);
        assert_eq!(numerical_rank_scaled(&tiny, RANK_TOL, 1.0).unwrap().rank, 0);
    }

    #[test]
    fn ambiguous_rank_is_refused() {
        let m = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(1e-7, 0.0), c(1e-9, 0.0)]));
        assert!(matches!(numerical_rank(&m, RANK_TOL), Err(Error::IllConditioned(_))));
        let m = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(1e-7, 0.0)]));
        assert_eq!(numerical_rank(&m, RANK_TOL).unwrap().rank, 2);
    }

    #[test]
    fn eigenvalues_of_permutations() {
        for r in 2..=5 {
            let p = CMat::from_fn(r, r, |i, j| if j == (i + 1) % r { c(1.0, 0.0) } else { c(0.0, 0.0) });
            let ev = eigenvalues(&p);
            assert_eq!(ev.len(), r);
            for z in ev {
                assert!((z.powu(r as u32) - c(1.0, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn commutator_map_kernel_is_centralizer() {
        let m = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)]));
        assert_eq!(nullity(&commutator_map(&m), RANK_TOL).unwrap(), 2);
        assert_eq!(nullity(&commutator_map(&identity(3)), RANK_TOL).unwrap(), 9);
    }

    proptest! {
        #[test]
        fn commutator_map_matches_definition(v in prop::collection::vec(-3.0f64..3.0, 18)) {
            let m = CMat::from_fn(3, 3, |i, j| c(v[3 * i + j], 0.0));
            let x = CMat::from_fn(3, 3, |i, j| c(v[9 + 3 * i + j], 1.0));
            let direct = &m * &x - &x * &m;
            let via = commutator_map(&m) * nalgebra::DVector::from_column_slice(x.as_slice());
            let direct_vec = nalgebra::DVector::from_column_slice(direct.as_slice());
            prop_assert!((via - direct_vec).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-10);
        }

        #[test]
        fn eigenvalues_match_trace_and_det(v in prop::collection::vec(-3.0f64..3.0, 8)) {
            let m = CMat::from_fn(2, 2, |i, j| c(v[2 * i + j], v[4 + 2 * i + j]));
            let ev = eigenvalues(&m);
            let tr = m.trace();
            let det = m.determinant();
            prop_assert!((ev[0] + ev[1] - tr).norm() < 1e-9);
            prop_assert!((ev[0] * ev[1] - det).norm() < 1e-9 * (1.0 + det.norm()));
        }

        #[test]
        fn pow_matches_repeated_product(v in prop::collection::vec(-1.0f64..1.0, 4), n in 0u32..9) {
            let m = CMat::from_fn(2, 2, |i, j| c(v[2 * i + j], 0.0));
            let mut acc = identity(2);
            for _ in 0..n {
                acc = &acc * &m;
            }
            prop_assert!(max_abs_diff(&pow(&m, n), &acc) < 1e-12);
        }
    }
}
