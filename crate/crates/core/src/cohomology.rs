//! Twisted group cohomology `H^k(M, ρ)` from a presentation, via the Fox
//! calculus cochain complex
//!
//! ```text
//! C⁰ = ℂʳ  --d0-->  C¹ = (ℂʳ)ⁿ  --d1-->  C² = (ℂʳ)ᵐ
//! ```
//!
//! with `d0` the stacked blocks `ρ(g_i) − Id` and `d1[j][i] = ρ(∂r_j/∂g_i)`.
//! The presentation complex computes `H⁰` and `H¹` of the group; the top
//! degrees follow from Poincaré duality with the dual representation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, RankReport};
use crate::presentation::{fox_jacobian, Presentation, PresentationKind};
use crate::representation::Representation;
use crate::Complex64;

/// Chain-condition tolerance per unit of `r·n·scale`.
const CHAIN_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct TwistedCochainComplex {
    pub d0: CMat,
    pub d1: CMat,
    pub r: usize,
    pub n: usize,
    pub m: usize,
    /// `max |d1·d0|`.
    pub chain_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub label: String,
    #[serde(flatten)]
    pub rank: RankReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohomologyDims {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub h3: usize,
    /// Dimension of the closed manifold the group is the fundamental group of.
    pub manifold_dim: usize,
    /// How each degree was obtained.
    pub method: [String; 4],
    pub gap_report: Vec<GapReport>,
}

impl CohomologyDims {
    pub fn as_vec(&self) -> Vec<usize> {
        vec![self.h0, self.h1, self.h2, self.h3]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64 - self.h3 as i64
    }
}

fn check_target(p: &Presentation, rep: &Representation) -> Result<()> {
    if p.kind != rep.target {
        return Err(Error::InvalidInput(format!(
            "representation is defined on {} but the presentation is {}",
            rep.target, p.kind
        )));
    }
    Ok(())
}

pub fn build_complex(p: &Presentation, rep: &Representation) -> Result<TwistedCochainComplex> {
    check_target(p, rep)?;
    let r = rep.r;
    let n = p.generators.len();
    let m = p.relators.len();
    let id = linalg::identity(r);

    let mut d0 = CMat::zeros(r * n, r);
    for (i, &g) in p.generators.iter().enumerate() {
        d0.view_mut((i * r, 0), (r, r)).copy_from(&(rep.image(g) - &id));
    }

    let jac = fox_jacobian(p);
    let mut d1 = CMat::zeros(r * m, r * n);
    for (j, row) in jac.iter().enumerate() {
        for (i, entry) in row.iter().enumerate() {
            let block = entry.evaluate(CMat::zeros(r, r), |w, coef| {
                rep.evaluate(w) * Complex64::new(coef as f64, 0.0)
            });
            d1.view_mut((j * r, i * r), (r, r)).copy_from(&block);
        }
    }

    let chain_residual = linalg::max_abs(&(&d1 * &d0));
    let scale = linalg::max_abs(&d1).max(1.0) * linalg::max_abs(&d0).max(1.0);
    let bound = (r * n) as f64 * CHAIN_TOL * scale;
    if !(chain_residual <= bound) {
        return Err(Error::ChainConditionViolated { residual: chain_residual, bound });
    }
    Ok(TwistedCochainComplex { d0, d1, r, n, m, chain_residual })
}

/// `(h0, h1)` of the presentation complex with the rank reports behind them.
fn low_degrees(p: &Presentation, rep: &Representation, tol: f64, tag: &str) -> Result<(usize, usize, Vec<GapReport>)> {
    let cx = build_complex(p, rep)?;
    let scale = rep.images.iter().map(linalg::max_abs).fold(1.0, f64::max);
    let r0 = linalg::numerical_rank_scaled(&cx.d0, tol, scale)?;
    let r1 = linalg::numerical_rank_scaled(&cx.d1, tol, scale)?;
    let h0 = cx.r - r0.rank;
    let ker1 = cx.r * cx.n - r1.rank;
    let h1 = ker1 - r0.rank;
    let reports = vec![
        GapReport { label: format!("{tag}d0"), rank: r0 },
        GapReport { label: format!("{tag}d1"), rank: r1 },
    ];
    Ok((h0, h1, reports))
}

/// `dim H^k(M, ρ)` for `k = 0..3`, ranks decided at `tol·σ_max` (at least
/// `tol` times the largest image entry) with a mandatory singular-value gap.
///
/// For the unit tangent presentation `M` is a closed 3-manifold and
/// `h2 = h1(ρ*)`, `h3 = h0(ρ*)`. For the surface presentation `M = Σ`,
/// `h2 = h0(ρ*)` and `h3 = 0`.
pub fn cohomology_dims(p: &Presentation, rep: &Representation, tol: f64) -> Result<CohomologyDims> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("rank tolerance must be positive, got {tol}")));
    }
    let (h0, h1, mut gap_report) = low_degrees(p, rep, tol, "")?;
    let dual = rep.dual()?;
    let (d0, d1, dual_reports) = low_degrees(p, &dual, tol, "dual ")?;
    gap_report.extend(dual_reports);
    let direct = "direct".to_string();
    Ok(match p.kind {
        PresentationKind::UnitTangent(_) => CohomologyDims {
            h0,
            h1,
            h2: d1,
            h3: d0,
            manifold_dim: 3,
            method: [direct.clone(), direct, "duality: h1 of dual".into(), "duality: h0 of dual".into()],
            gap_report,
        },
        PresentationKind::Surface(_) => CohomologyDims {
            h0,
            h1,
            h2: d0,
            h3: 0,
            manifold_dim: 2,
            method: [direct.clone(), direct, "duality: h0 of dual".into(), "vanishes above dimension 2".into()],
            gap_report,
        },
    })
}

/// `m = Σ_{k=0}^{n} (−1)^{k+n} (n+1−k) h_k`; for `n = 1` this is `h1 − 2 h0`.
pub fn m_from_cohomology(h: &[usize], n: usize) -> Result<i64> {
    if n == 0 || h.len() < n + 1 {
        return Err(Error::InvalidInput(format!("need n >= 1 and h_0..h_n ({} values given for n = {n})", h.len())));
    }
    Ok((0..=n)
        .map(|k| {
            let sign = if (k + n).is_multiple_of(2) { 1 } else { -1 };
            sign * (n + 1 - k) as i64 * h[k] as i64
        })
        .sum())
}
