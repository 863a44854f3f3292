//! Product identities between the zeta functions, checked in the region of
//! absolute convergence. Both sides are evaluated on the same truncated
//! spectrum and the same `j_max`, so the class and power truncations cancel
//! exactly; the budget collects what does not cancel (Selberg shift tails,
//! omitted factors) plus a roundoff allowance.

use serde::{Deserialize, Serialize};

use super::{HolonomyAssignment, Neumaier, PreparedSpectrum, ZetaOptions, ZetaValue};
use crate::error::Result;
use crate::fuchsian::LengthSpectrum;
use crate::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// `ζ(s) Z(s+1) / Z(s) = 1`.
    RuelleSelbergQuotient,
    /// `ζ₀(s) = ∏_{k≥1} Z(s+k)`.
    Det0SelbergProduct,
    /// `Z(s, Ad) = Z(s−1) Z(s) Z(s+1)` with untwisted factors on the right.
    AdjointSelberg,
    /// `ζ = ζ₁ / (ζ₀ ζ₂)`.
    DetFactorization,
}

impl Identity {
    pub const ALL: [Identity; 4] = [
        Identity::RuelleSelbergQuotient,
        Identity::Det0SelbergProduct,
        Identity::AdjointSelberg,
        Identity::DetFactorization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::RuelleSelbergQuotient => "ruelle-selberg-quotient",
            Identity::Det0SelbergProduct => "det0-selberg-product",
            Identity::AdjointSelberg => "adjoint-selberg",
            Identity::DetFactorization => "det-factorization",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Identity::RuelleSelbergQuotient => "zeta(s) Z(s+1) / Z(s) = 1",
            Identity::Det0SelbergProduct => "zeta_0(s) = prod_{k>=1} Z(s+k)",
            Identity::AdjointSelberg => "Z(s, Ad) = Z(s-1) Z(s) Z(s+1)",
            Identity::DetFactorization => "zeta(s) = zeta_1(s) / (zeta_0(s) zeta_2(s))",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub k_tails: f64,
    pub omitted_factors: f64,
    pub roundoff: f64,
}

impl Budget {
    pub fn total(&self) -> f64 {
        self.k_tails + self.omitted_factors + self.roundoff
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub statement: String,
    pub s: Complex64,
    pub lhs_log: Option<Complex64>,
    pub rhs_log: Option<Complex64>,
    /// `|exp(lhs − rhs) − 1|`.
    pub rel_gap: Option<f64>,
    pub budget: Budget,
    /// Largest tail estimate among the evaluations involved (informational;
    /// these truncations cancel between the two sides).
    pub max_tail_estimate: f64,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub holonomy: String,
    pub abscissa: f64,
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

struct Side {
    budget: Budget,
    max_tail: f64,
}

fn roundoff(vals: &[&ZetaValue]) -> f64 {
    vals.iter().map(|v| v.roundoff()).sum()
}

fn max_tail(vals: &[&ZetaValue]) -> f64 {
    vals.iter().map(|v| v.tail_estimate).fold(0.0, f64::max)
}

fn check_one(
    p: &PreparedSpectrum,
    base: &PreparedSpectrum,
    id: Identity,
    s: Complex64,
    o: &ZetaOptions,
) -> Result<(Complex64, Complex64, Side)> {
    match id {
        Identity::RuelleSelbergQuotient => {
            let z = p.ruelle(s, o)?;
            let a = p.selberg(s, o)?;
            let b = p.selberg(s + 1.0, o)?;
            let budget = Budget {
                k_tails: a.tails.k_tail + b.tails.k_tail,
                omitted_factors: 0.0,
                roundoff: roundoff(&[&z, &a, &b]),
            };
            Ok((z.log_value + b.log_value, a.log_value, Side { budget, max_tail: max_tail(&[&z, &a, &b]) }))
        }
        Identity::Det0SelbergProduct => {
            let d0 = p.dynamical_determinant(0, s, o)?;
            let mut m = 1usize;
            while p.shift_sum_bound(s.re, m + 1) / (1.0 - (-p.systole.unwrap_or(1.0)).exp()) >= o.k_tail_target && m < 10_000 {
                m += 1;
            }
            let omitted = p.shift_sum_bound(s.re, m + 1) / (1.0 - (-p.systole.unwrap_or(1.0)).exp());
            let mut rhs = Neumaier::default();
            let mut vals = vec![d0.clone()];
            let mut k_tails = 0.0;
            for k in 1..=m {
                let z = p.selberg(s + k as f64, o)?;
                rhs.add(z.log_value);
                k_tails += z.tails.k_tail;
                vals.push(z);
            }
            let refs: Vec<&ZetaValue> = vals.iter().collect();
            let budget = Budget { k_tails, omitted_factors: if p.is_empty() { 0.0 } else { omitted }, roundoff: roundoff(&refs) };
            Ok((d0.log_value, rhs.value(), Side { budget, max_tail: max_tail(&refs) }))
        }
        Identity::AdjointSelberg => {
            let ad = p.selberg(s, o)?;
            let zs: Vec<ZetaValue> =
                [-1.0, 0.0, 1.0].iter().map(|d| base.selberg(s + d, o)).collect::<Result<_>>()?;
            let mut rhs = Neumaier::default();
            for z in &zs {
                rhs.add(z.log_value);
            }
            let refs = [&ad, &zs[0], &zs[1], &zs[2]];
            let budget = Budget {
                k_tails: ad.tails.k_tail + zs.iter().map(|z| z.tails.k_tail).sum::<f64>(),
                omitted_factors: 0.0,
                roundoff: roundoff(&refs),
            };
            Ok((ad.log_value, rhs.value(), Side { budget, max_tail: max_tail(&refs) }))
        }
        Identity::DetFactorization => {
            let z = p.ruelle(s, o)?;
            let d0 = p.dynamical_determinant(0, s, o)?;
            let d1 = p.dynamical_determinant(1, s, o)?;
            let d2 = p.dynamical_determinant(2, s, o)?;
            let refs = [&z, &d0, &d1, &d2];
            let budget = Budget { k_tails: 0.0, omitted_factors: 0.0, roundoff: roundoff(&refs) };
            Ok((
                z.log_value,
                d1.log_value - d0.log_value - d2.log_value,
                Side { budget, max_tail: max_tail(&refs) },
            ))
        }
    }
}

/// Checks `identities` at each point on an already prepared spectrum. The
/// adjoint identity needs the untwisted spectrum `base`. Points outside the
/// convergence region of some factor are reported as failures with the
/// reason; nothing is raised.
pub fn verify_prepared(
    p: &PreparedSpectrum,
    base: &PreparedSpectrum,
    holonomy: &str,
    points: &[Complex64],
    identities: &[Identity],
    opts: &ZetaOptions,
) -> IdentityReport {
    let mut checks = Vec::new();
    for &id in identities {
        for &s in points {
            let check = match check_one(p, base, id, s, opts) {
                Ok((lhs, rhs, side)) => {
                    let rel = ((lhs - rhs).exp() - 1.0).norm();
                    let total = side.budget.total();
                    IdentityCheck {
                        identity: id,
                        statement: id.statement().into(),
                        s,
                        lhs_log: Some(lhs),
                        rhs_log: Some(rhs),
                        rel_gap: Some(rel),
                        budget: side.budget,
                        max_tail_estimate: side.max_tail,
                        pass: rel <= total,
                        error: None,
                    }
                }
                Err(e) => IdentityCheck {
                    identity: id,
                    statement: id.statement().into(),
                    s,
                    lhs_log: None,
                    rhs_log: None,
                    rel_gap: None,
                    budget: Budget::default(),
                    max_tail_estimate: 0.0,
                    pass: false,
                    error: Some(e.to_string()),
                },
            };
            checks.push(check);
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    IdentityReport { holonomy: holonomy.into(), abscissa: p.abscissa, checks, pass }
}

pub fn verify_identities(
    sp: &LengthSpectrum,
    h: &HolonomyAssignment,
    points: &[Complex64],
    identities: &[Identity],
    opts: &ZetaOptions,
) -> Result<IdentityReport> {
    let p = PreparedSpectrum::new(sp, h)?;
    let base = PreparedSpectrum::trivial(sp);
    Ok(verify_prepared(&p, &base, h.label(), points, identities, opts))
}
