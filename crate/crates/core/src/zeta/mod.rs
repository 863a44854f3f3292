//! Truncated Euler products over the length spectrum: the twisted Ruelle
//! zeta function, the twisted Selberg zeta function and the dynamical
//! determinants of orders 0, 1, 2, all evaluated through
//!
//! ```text
//! log ζ = −Σ_γ Σ_{j ≤ j_max} (1/j) tr(h(γ)^j) w(jℓ) e^{−sjℓ}
//! ```
//!
//! with the weight `w` depending on the product. Everything here lives in
//! the half-plane of absolute convergence; nothing is continued.

mod identities;

pub use identities::{verify_identities, verify_prepared, Budget, Identity, IdentityCheck, IdentityReport};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{GeodesicClass, LengthSpectrum};
use crate::linalg::{self, CMat};
use crate::representation::{geodesic_lift_holonomy, Representation};
use crate::Complex64;

/// Rule assigning a holonomy matrix to each closed geodesic.
#[derive(Clone, Debug)]
pub enum HolonomyAssignment {
    /// `ρ̄(π_*[γ])` for a representation with `ρ(c) = Id`.
    Factoring(Representation),
    /// Positive-trace SL2 lift of the geodesic under `τ`, tensored with an
    /// optional factoring part.
    Sl2LiftTensor { tau: Representation, factoring: Option<Representation> },
}

fn check_factoring(rep: &Representation) -> Result<()> {
    let dev = linalg::max_abs_diff(&rep.c_image(), &linalg::identity(rep.r));
    if dev > rep.tol.max(1e-12) * 10.0 {
        return Err(Error::InvalidInput(format!(
            "representation does not factor through the surface group (|rho(c) - Id| = {dev:e}); \
             geodesic holonomy needs the fibre winding, which is only supported for the SL2 lift"
        )));
    }
    Ok(())
}

impl HolonomyAssignment {
    pub fn factoring(rep: Representation) -> Result<Self> {
        check_factoring(&rep)?;
        Ok(HolonomyAssignment::Factoring(rep))
    }

    pub fn sl2_lift(tau: Representation, factoring: Option<Representation>) -> Result<Self> {
        let minus = linalg::scalar(2, Complex64::new(-1.0, 0.0));
        if tau.r != 2 || linalg::max_abs_diff(&tau.c_image(), &minus) > 1e-10 {
            return Err(Error::InvalidInput("the SL2 lift must be 2-dimensional with c -> -Id".into()));
        }
        if let Some(f) = &factoring {
            check_factoring(f)?;
            if f.genus() != tau.genus() {
                return Err(Error::InvalidInput("factoring part and lift have different genus".into()));
            }
        }
        Ok(HolonomyAssignment::Sl2LiftTensor { tau, factoring })
    }

    pub fn dim(&self) -> usize {
        match self {
            HolonomyAssignment::Factoring(rep) => rep.r,
            HolonomyAssignment::Sl2LiftTensor { factoring, .. } => 2 * factoring.as_ref().map_or(1, |f| f.r),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            HolonomyAssignment::Factoring(_) => "factoring",
            HolonomyAssignment::Sl2LiftTensor { .. } => "sl2-lift",
        }
    }

    pub fn matrix(&self, cls: &GeodesicClass) -> Result<CMat> {
        match self {
            HolonomyAssignment::Factoring(rep) => Ok(rep.evaluate(&cls.word)),
            HolonomyAssignment::Sl2LiftTensor { tau, factoring } => {
                let lift = geodesic_lift_holonomy(tau, cls)?;
                Ok(match factoring {
                    Some(f) => lift.kronecker(&f.evaluate(&cls.word)),
                    None => lift,
                })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaOptions {
    pub j_max: usize,
    /// Selberg shift cutoff; chosen from `k_tail_target` when absent.
    pub k_max: Option<usize>,
    pub k_tail_target: f64,
    /// Minimal distance of `Re(s)` (plus the product's shift) to the
    /// abscissa estimate.
    pub required_margin: f64,
}

impl Default for ZetaOptions {
    fn default() -> Self {
        ZetaOptions { j_max: 64, k_max: None, k_tail_target: 1e-12, required_margin: 0.25 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZetaKind {
    Ruelle,
    Selberg,
    Det0,
    Det1,
    Det2,
}

impl ZetaKind {
    pub fn det(k: usize) -> Result<ZetaKind> {
        match k {
            0 => Ok(ZetaKind::Det0),
            1 => Ok(ZetaKind::Det1),
            2 => Ok(ZetaKind::Det2),
            _ => Err(Error::InvalidInput(format!("dynamical determinant order must be 0, 1 or 2, got {k}"))),
        }
    }

    /// Gain in convergence from the weight: `w(x) ~ e^{−a x}`.
    fn weight_decay(self) -> f64 {
        match self {
            ZetaKind::Det0 | ZetaKind::Det2 => 1.0,
            _ => 0.0,
        }
    }
}

impl std::str::FromStr for ZetaKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ruelle" => Ok(ZetaKind::Ruelle),
            "selberg" => Ok(ZetaKind::Selberg),
            "det0" => Ok(ZetaKind::Det0),
            "det1" => Ok(ZetaKind::Det1),
            "det2" => Ok(ZetaKind::Det2),
            _ => Err(Error::Parse(format!("unknown zeta kind '{s}' (ruelle, selberg, det0, det1, det2)"))),
        }
    }
}

/// `tr Λ^k P / |det(Id − P)|` for the hyperbolic Poincaré map of `γ^j`,
/// in terms of `x = e^{−jℓ}`: `|det| = (1−x)²/x`, `tr Λ¹ = 1/x + x`.
pub fn poincare_weight(k: usize, x: f64) -> f64 {
    let d = (1.0 - x) * (1.0 - x);
    match k {
        0 | 2 => x / d,
        _ => (1.0 + x * x) / d,
    }
}

/// `tr Λ^k` of the Poincaré map of a closed orbit of length `t`.
pub fn poincare_exterior_trace(k: usize, t: f64) -> f64 {
    match k {
        1 => t.exp() + (-t).exp(),
        _ => 1.0,
    }
}

/// `|det(Id − P)|` of the Poincaré map of a closed orbit of length `t`.
pub fn poincare_abs_det(t: f64) -> f64 {
    (t.exp() - 1.0) * (1.0 - (-t).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub cutoff: f64,
    pub j_max: usize,
    pub k_max: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Tails {
    /// Rigorous bound for `j > j_max` over the enumerated classes.
    pub j_tail: f64,
    /// Rigorous bound for Selberg shifts `k > k_max` over the enumerated classes.
    pub k_tail: f64,
    /// Estimate for classes beyond the cutoff from a fitted counting law
    /// `N(x) ≈ C eˣ/x`; not a bound.
    pub geodesic_tail: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaValue {
    pub kind: ZetaKind,
    pub s: Complex64,
    pub log_value: Complex64,
    pub value: Complex64,
    pub truncation: Truncation,
    pub tails: Tails,
    pub tail_estimate: f64,
    /// `Re(s)` plus the product's shift, minus the abscissa estimate.
    pub convergence_margin: f64,
    pub abscissa: f64,
    /// `Σ |terms|`, the scale of accumulated roundoff.
    pub abs_sum: f64,
    pub classes_used: usize,
    pub warnings: Vec<String>,
}

impl ZetaValue {
    /// Roundoff allowance `64 ε Σ|terms|`.
    pub fn roundoff(&self) -> f64 {
        64.0 * f64::EPSILON * self.abs_sum
    }
}

#[derive(Clone, Debug)]
struct ClassData {
    length: f64,
    eig: Vec<Complex64>,
    radius: f64,
}

/// Holonomy eigenvalues of the primitive classes, with the convergence data
/// derived from them. Build once, evaluate many products.
#[derive(Clone, Debug)]
pub struct PreparedSpectrum {
    classes: Vec<ClassData>,
    pub r: usize,
    pub cutoff: f64,
    pub systole: Option<f64>,
    /// `max_γ log ρ(h(γ)) / ℓ(γ)`.
    pub holonomy_growth: f64,
    /// `1 + holonomy_growth` (topological entropy one).
    pub abscissa: f64,
    /// `C` in `N(x) ≈ C eˣ/x`, fitted at the cutoff.
    pub counting_constant: f64,
}

impl PreparedSpectrum {
    pub fn new(sp: &LengthSpectrum, h: &HolonomyAssignment) -> Result<Self> {
        let prim: Vec<&GeodesicClass> = sp.primitive().collect();
        let classes = prim
            .par_iter()
            .map(|cls| {
                let m = h.matrix(cls)?;
                let eig = linalg::eigenvalues(&m);
                let radius = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
                Ok(ClassData { length: cls.length, eig, radius })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_data(classes, h.dim(), sp.cutoff))
    }

    /// Untwisted (trivial rank-one) holonomy on the same spectrum.
    pub fn trivial(sp: &LengthSpectrum) -> Self {
        let data = sp.primitive().map(|c| (c.length, vec![Complex64::new(1.0, 0.0)])).collect();
        Self::from_eigenvalues(data, 1, sp.cutoff)
    }

    /// Spectrum given directly as `(length, holonomy eigenvalues)` of
    /// primitive classes.
    pub fn from_eigenvalues(data: Vec<(f64, Vec<Complex64>)>, r: usize, cutoff: f64) -> Self {
        let classes = data
            .into_iter()
            .map(|(length, eig)| {
                let radius = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
                ClassData { length, eig, radius }
            })
            .collect();
        Self::from_data(classes, r, cutoff)
    }

    fn from_data(classes: Vec<ClassData>, r: usize, cutoff: f64) -> Self {
        let holonomy_growth = classes
            .iter()
            .map(|c| c.radius.ln() / c.length)
            .fold(f64::NEG_INFINITY, f64::max);
        let holonomy_growth = if holonomy_growth.is_finite() { holonomy_growth } else { 0.0 };
        let systole = classes.iter().map(|c| c.length).reduce(f64::min);
        let counting_constant = if classes.is_empty() || cutoff <= 0.0 {
            0.0
        } else {
            classes.len() as f64 * cutoff / cutoff.exp()
        };
        PreparedSpectrum {
            classes,
            r,
            cutoff,
            systole,
            holonomy_growth,
            abscissa: 1.0 + holonomy_growth,
            counting_constant,
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Traces `tr(h(γ)^j)`, `j = 1..=j_max`, of the `i`-th primitive class.
    pub fn power_traces(&self, i: usize, j_max: usize) -> Vec<Complex64> {
        let c = &self.classes[i];
        let mut pw = c.eig.clone();
        let mut out = Vec::with_capacity(j_max);
        for _ in 0..j_max {
            out.push(pw.iter().sum());
            for (p, e) in pw.iter_mut().zip(&c.eig) {
                *p *= e;
            }
        }
        out
    }

    pub fn lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.classes.iter().map(|c| c.length)
    }

    fn check_margin(&self, s: Complex64, shift: f64, opts: &ZetaOptions) -> Result<f64> {
        let margin = s.re + shift - self.abscissa;
        if !(margin >= opts.required_margin) {
            return Err(Error::OutsideConvergence {
                s_re: s.re,
                s_im: s.im,
                abscissa: self.abscissa,
                margin,
                required: opts.required_margin,
            });
        }
        Ok(margin)
    }

    /// `−Σ_γ Σ_j (1/j) tr(h^j) w_k(jℓ) e^{−s jℓ}` with per-class terms
    /// computed in parallel and summed in class order.
    fn log_sum(&self, s: Complex64, weight: Option<usize>, j_max: usize) -> (Complex64, f64) {
        let parts: Vec<(Complex64, f64)> = self
            .classes
            .par_iter()
            .map(|c| {
                let decay = (-s * c.length).exp();
                let z: Vec<Complex64> = c.eig.iter().map(|e| e * decay).collect();
                let mut pw = z.clone();
                let mut acc = Neumaier::default();
                let mut abs = 0.0;
                let x1 = (-c.length).exp();
                let mut x = x1;
                for j in 1..=j_max {
                    let tr: Complex64 = pw.iter().sum();
                    let w = weight.map_or(1.0, |k| poincare_weight(k, x));
                    let term = -tr * (w / j as f64);
                    abs += term.norm();
                    acc.add(term);
                    for (p, zi) in pw.iter_mut().zip(&z) {
                        *p *= zi;
                    }
                    x *= x1;
                }
                (acc.value(), abs)
            })
            .collect();
        let mut total = Neumaier::default();
        let mut abs = 0.0;
        for (v, a) in parts {
            total.add(v);
            abs += a;
        }
        (total.value(), abs)
    }

    /// Bound on `Σ_γ Σ_{j > j_max} (1/j) |tr h^j| W e^{−(σ+a)jℓ}` using
    /// `|tr h^j| ≤ r ρ^j` and `w(jℓ) ≤ W e^{−a jℓ}`.
    fn j_tail(&self, sigma: f64, kind: ZetaKind, j_max: usize) -> f64 {
        let a = kind.weight_decay();
        let jn = (j_max + 1) as f64;
        self.classes
            .iter()
            .map(|c| {
                let q = c.radius * (-(sigma + a) * c.length).exp();
                let w = weight_bound(kind, c.length);
                if q >= 1.0 {
                    f64::INFINITY
                } else {
                    self.r as f64 * w * q.powf(jn) / (jn * (1.0 - q))
                }
            })
            .sum()
    }

    /// Bound on `|log Z(σ')|`-type sums `Σ_γ Σ_j (1/j) r ρ^j e^{−σ' jℓ}` for
    /// every `σ' ≥ sigma`, summed over shifts `σ' = sigma + k`, `k ≥ k0`.
    pub(crate) fn shift_sum_bound(&self, sigma: f64, k0: usize) -> f64 {
        let Some(l1) = self.systole else { return 0.0 };
        let base: f64 = self
            .classes
            .iter()
            .map(|c| {
                let q = c.radius * (-(sigma + k0 as f64) * c.length).exp();
                if q >= 1.0 {
                    f64::INFINITY
                } else {
                    self.r as f64 * q / (1.0 - q)
                }
            })
            .sum();
        base / (1.0 - (-l1).exp())
    }

    /// Smallest `k_max` with `k`-tail below `target`.
    pub fn choose_k_max(&self, sigma: f64, target: f64) -> usize {
        for k in 0..10_000 {
            if self.shift_sum_bound(sigma, k + 1) < target {
                return k;
            }
        }
        10_000
    }

    /// Counting-law estimate for classes beyond the cutoff:
    /// `r C W ∫_L^∞ e^{−μx}/x dx ≤ r C W e^{−μL}/(μL)`, `μ = σ + a − abscissa`.
    fn geodesic_tail(&self, sigma: f64, kind: ZetaKind, shifts: bool) -> f64 {
        let l = self.cutoff;
        if l <= 0.0 || self.classes.is_empty() {
            return 0.0;
        }
        let mu = sigma + kind.weight_decay() - self.abscissa;
        if mu <= 0.0 {
            return f64::INFINITY;
        }
        let w = weight_bound(kind, self.systole.unwrap_or(l));
        let k_factor = if shifts { 1.0 / (1.0 - (-l).exp()) } else { 1.0 };
        self.r as f64 * self.counting_constant * w * k_factor * (-mu * l).exp() / (mu * l)
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        &self,
        kind: ZetaKind,
        s: Complex64,
        log_value: Complex64,
        abs_sum: f64,
        margin: f64,
        j_max: usize,
        k_max: Option<usize>,
        tails: Tails,
    ) -> ZetaValue {
        let mut warnings = Vec::new();
        if self.classes.is_empty() {
            warnings.push("empty spectrum: the product is empty and equals 1".to_string());
        }
        warnings.push("geodesic tail uses a fitted counting constant and is an estimate, not a bound".to_string());
        ZetaValue {
            kind,
            s,
            log_value,
            value: log_value.exp(),
            truncation: Truncation { cutoff: self.cutoff, j_max, k_max },
            tail_estimate: tails.j_tail + tails.k_tail + tails.geodesic_tail,
            tails,
            convergence_margin: margin,
            abscissa: self.abscissa,
            abs_sum,
            classes_used: self.classes.len(),
            warnings,
        }
    }

    pub fn ruelle(&self, s: Complex64, opts: &ZetaOptions) -> Result<ZetaValue> {
        let margin = self.check_margin(s, 0.0, opts)?;
        let (log_value, abs) = self.log_sum(s, None, opts.j_max);
        let tails = Tails {
            j_tail: self.j_tail(s.re, ZetaKind::Ruelle, opts.j_max),
            k_tail: 0.0,
            geodesic_tail: self.geodesic_tail(s.re, ZetaKind::Ruelle, false),
        };
        Ok(self.finish(ZetaKind::Ruelle, s, log_value, abs, margin, opts.j_max, None, tails))
    }

    pub fn selberg(&self, s: Complex64, opts: &ZetaOptions) -> Result<ZetaValue> {
        let margin = self.check_margin(s, 0.0, opts)?;
        let k_max = opts.k_max.unwrap_or_else(|| self.choose_k_max(s.re, opts.k_tail_target));
        let mut total = Neumaier::default();
        let mut abs = 0.0;
        let mut j_tail = 0.0;
        for k in 0..=k_max {
            let sk = s + k as f64;
            let (v, a) = self.log_sum(sk, None, opts.j_max);
            total.add(v);
            abs += a;
            j_tail += self.j_tail(sk.re, ZetaKind::Ruelle, opts.j_max);
        }
        let tails = Tails {
            j_tail,
            k_tail: self.shift_sum_bound(s.re, k_max + 1),
            geodesic_tail: self.geodesic_tail(s.re, ZetaKind::Ruelle, true),
        };
        Ok(self.finish(ZetaKind::Selberg, s, total.value(), abs, margin, opts.j_max, Some(k_max), tails))
    }

    pub fn dynamical_determinant(&self, k: usize, s: Complex64, opts: &ZetaOptions) -> Result<ZetaValue> {
        let kind = ZetaKind::det(k)?;
        let margin = self.check_margin(s, kind.weight_decay(), opts)?;
        let (log_value, abs) = self.log_sum(s, Some(k), opts.j_max);
        let tails = Tails {
            j_tail: self.j_tail(s.re, kind, opts.j_max),
            k_tail: 0.0,
            geodesic_tail: self.geodesic_tail(s.re, kind, false),
        };
        Ok(self.finish(kind, s, log_value, abs, margin, opts.j_max, None, tails))
    }

    pub fn evaluate(&self, kind: ZetaKind, s: Complex64, opts: &ZetaOptions) -> Result<ZetaValue> {
        match kind {
            ZetaKind::Ruelle => self.ruelle(s, opts),
            ZetaKind::Selberg => self.selberg(s, opts),
            ZetaKind::Det0 => self.dynamical_determinant(0, s, opts),
            ZetaKind::Det1 => self.dynamical_determinant(1, s, opts),
            ZetaKind::Det2 => self.dynamical_determinant(2, s, opts),
        }
    }
}

/// `W` with `w(jℓ) ≤ W e^{−a jℓ}` for all `j ≥ 1`.
fn weight_bound(kind: ZetaKind, length: f64) -> f64 {
    let x = (-length).exp();
    let d = (1.0 - x) * (1.0 - x);
    match kind {
        ZetaKind::Ruelle | ZetaKind::Selberg => 1.0,
        ZetaKind::Det0 | ZetaKind::Det2 => 1.0 / d,
        ZetaKind::Det1 => (1.0 + x * x) / d,
    }
}

/// Compensated (Neumaier) complex summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: Complex64,
    comp: Complex64,
}

impl Neumaier {
    pub fn add(&mut self, x: Complex64) {
        fn step(s: f64, c: &mut f64, x: f64) -> f64 {
            let t = s + x;
            if s.abs() >= x.abs() {
                *c += (s - t) + x;
            } else {
                *c += (x - t) + s;
            }
            t
        }
        self.sum.re = step(self.sum.re, &mut self.comp.re, x.re);
        self.sum.im = step(self.sum.im, &mut self.comp.im, x.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

pub fn ruelle_zeta(sp: &LengthSpectrum, h: &HolonomyAssignment, s: Complex64, opts: &ZetaOptions) -> Result<ZetaValue> {
    PreparedSpectrum::new(sp, h)?.ruelle(s, opts)
}

pub fn selberg_zeta(sp: &LengthSpectrum, h: &HolonomyAssignment, s: Complex64, opts: &ZetaOptions) -> Result<ZetaValue> {
    PreparedSpectrum::new(sp, h)?.selberg(s, opts)
}

pub fn dynamical_determinant(
    sp: &LengthSpectrum,
    h: &HolonomyAssignment,
    k: usize,
    s: Complex64,
    opts: &ZetaOptions,
) -> Result<ZetaValue> {
    PreparedSpectrum::new(sp, h)?.dynamical_determinant(k, s, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> PreparedSpectrum {
        PreparedSpectrum::from_eigenvalues(
            vec![(2.0, vec![Complex64::new(1.0, 0.0)]), (2.5, vec![Complex64::new(1.0, 0.0)])],
            1,
            3.0,
        )
    }

    #[test]
    fn poincare_relation() {
        for &t in &[0.3, 1.0, 3.06, 10.0] {
            let lhs = poincare_abs_det(t);
            let rhs = -poincare_exterior_trace(0, t) + poincare_exterior_trace(1, t) - poincare_exterior_trace(2, t);
            assert!((lhs - rhs).abs() <= 1e-14 * lhs.max(1.0));
            let x = (-t).exp();
            for k in 0..3 {
                let w = poincare_exterior_trace(k, t) / lhs;
                assert!((poincare_weight(k, x) - w).abs() <= 1e-13 * w);
            }
            // w1 − w0 − w2 = 1
            assert!((poincare_weight(1, x) - 2.0 * poincare_weight(0, x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ruelle_matches_closed_form() {
        let p = toy();
        let s = Complex64::new(2.0, 0.5);
        let z = p.ruelle(s, &ZetaOptions::default()).unwrap();
        let direct: Complex64 = [2.0f64, 2.5].iter().map(|&l| (1.0 - (-s * l).exp()).ln()).sum();
        assert!((z.log_value - direct).norm() < 1e-14);
        assert!(z.tails.j_tail < 1e-100);
    }

    #[test]
    fn selberg_over_shifted_is_ruelle() {
        let p = toy();
        let o = ZetaOptions::default();
        let s = Complex64::new(1.7, 0.0);
        let z0 = p.selberg(s, &o).unwrap();
        let z1 = p.selberg(s + 1.0, &o).unwrap();
        let r = p.ruelle(s, &o).unwrap();
        assert!((z0.log_value - z1.log_value - r.log_value).norm() < z0.tails.k_tail + z1.tails.k_tail + 1e-15);
    }

    #[test]
    fn margins_are_enforced() {
        let p = toy();
        let o = ZetaOptions::default();
        assert!(matches!(p.ruelle(Complex64::new(0.5, 0.0), &o), Err(Error::OutsideConvergence { .. })));
        assert!(matches!(p.ruelle(Complex64::new(1.2, 0.0), &o), Err(Error::OutsideConvergence { .. })));
        assert!(p.dynamical_determinant(0, Complex64::new(0.3, 0.0), &o).is_ok());
        assert!(p.dynamical_determinant(1, Complex64::new(0.3, 0.0), &o).is_err());
    }

    #[test]
    fn empty_product_is_one() {
        let p = PreparedSpectrum::from_eigenvalues(Vec::new(), 1, 0.0);
        let z = p.ruelle(Complex64::new(3.0, 0.0), &ZetaOptions::default()).unwrap();
        assert_eq!(z.value, Complex64::new(1.0, 0.0));
        assert!(z.warnings.iter().any(|w| w.contains("empty")));
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let mut n = Neumaier::default();
        for x in [1e16, 1.0, -1e16, 1.0] {
            n.add(Complex64::new(x, 0.0));
        }
        assert_eq!(n.value().re, 2.0);
    }
}
