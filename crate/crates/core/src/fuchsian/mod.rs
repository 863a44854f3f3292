//! Cocompact Fuchsian surface groups and their closed geodesics.

pub mod brute;
mod quat;
mod spectrum;
pub(crate) use spectrum::set_multiplicities;

pub use quat::{Quat, QuatRepr};
pub use spectrum::{
    canonical_class, enumerate_spectrum, enumerate_spectrum_indexed, ClassIndex, Completeness, EnumOptions, EnumStats,
    GeodesicClass, LengthSpectrum, TraceValue,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{check_genus, Gen, Word};
use crate::qsqrt2::QSqrt2;

/// Real 2×2 matrix `[a, b, c, d]` in row-major order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [f64; 4]);

impl Mat2 {
    pub fn identity() -> Mat2 {
        Mat2([1.0, 0.0, 0.0, 1.0])
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Mat2 {
        let [a, b, c, d] = self.0;
        Mat2([d, -b, -c, a])
    }

    pub fn det(&self) -> f64 {
        let [a, b, c, d] = self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[3]
    }

    pub fn neg(&self) -> Mat2 {
        Mat2(self.0.map(|x| -x))
    }

    /// Sign representative: trace > 0, or first nonzero entry positive.
    pub fn canonical(&self) -> Mat2 {
        let t = self.trace();
        if t > 0.0 {
            return *self;
        }
        if t < 0.0 {
            return self.neg();
        }
        for x in self.0 {
            if x != 0.0 {
                return if x > 0.0 { *self } else { self.neg() };
            }
        }
        *self
    }

    /// `cosh d(i, m·i)` in the upper half plane.
    pub fn cosh_disp(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>() / 2.0
    }

    /// `m·i` in the upper half plane.
    pub fn image_of_i(&self) -> (f64, f64) {
        let [a, b, c, d] = self.0;
        let n = c * c + d * d;
        ((a * c + b * d) / n, self.det() / n)
    }

    /// Max entrywise distance to `±o`.
    pub fn dist_psl(&self, o: &Mat2) -> f64 {
        let plus = (0..4).map(|k| (self.0[k] - o.0[k]).abs()).fold(0.0, f64::max);
        let minus = (0..4).map(|k| (self.0[k] + o.0[k]).abs()).fold(0.0, f64::max);
        plus.min(minus)
    }

    fn rot(phi: f64) -> Mat2 {
        let (s, c) = (phi / 2.0).sin_cos();
        Mat2([c, s, -s, c])
    }

    fn hyp(t: f64) -> Mat2 {
        Mat2([(t / 2.0).exp(), 0.0, 0.0, (-t / 2.0).exp()])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    Exact,
    Float,
}

impl fmt::Display for ArithmeticMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArithmeticMode::Exact => "exact",
            ArithmeticMode::Float => "float",
        })
    }
}

/// PSL2(R) element, kept in the canonical sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Isometry {
    Exact(Quat),
    Float(Mat2),
}

impl Isometry {
    pub fn identity(mode: ArithmeticMode) -> Isometry {
        match mode {
            ArithmeticMode::Exact => Isometry::Exact(Quat::identity()),
            ArithmeticMode::Float => Isometry::Float(Mat2::identity()),
        }
    }

    pub fn mode(&self) -> ArithmeticMode {
        match self {
            Isometry::Exact(_) => ArithmeticMode::Exact,
            Isometry::Float(_) => ArithmeticMode::Float,
        }
    }

    pub fn mul(&self, o: &Isometry) -> Isometry {
        match (self, o) {
            (Isometry::Exact(x), Isometry::Exact(y)) => Isometry::Exact((*x * *y).canonical()),
            (Isometry::Float(x), Isometry::Float(y)) => Isometry::Float(x.mul(y).canonical()),
            _ => panic!("mixed arithmetic modes"),
        }
    }

    pub fn inverse(&self) -> Isometry {
        match self {
            Isometry::Exact(x) => Isometry::Exact(x.inverse().canonical()),
            Isometry::Float(x) => Isometry::Float(x.inverse().canonical()),
        }
    }

    pub fn to_mat2(&self) -> Mat2 {
        match self {
            Isometry::Exact(x) => x.to_mat2().canonical(),
            Isometry::Float(x) => x.canonical(),
        }
    }

    pub fn abs_trace(&self) -> f64 {
        match self {
            Isometry::Exact(x) => x.abs_trace(),
            Isometry::Float(x) => x.trace().abs(),
        }
    }

    /// Exact trace (sign normalized, ≥ 0) when available.
    pub fn exact_trace(&self) -> Option<QSqrt2> {
        match self {
            Isometry::Exact(x) => Some(x.canonical().trace()),
            Isometry::Float(_) => None,
        }
    }

    pub fn det_residual(&self) -> f64 {
        match self {
            Isometry::Exact(x) => (x.norm() - QSqrt2::ONE).to_f64().abs(),
            Isometry::Float(x) => (x.det() - 1.0).abs(),
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        match self {
            Isometry::Exact(x) => {
                let x0 = x.0[0];
                (x0 * x0 - QSqrt2::ONE).signum() > 0
            }
            Isometry::Float(x) => x.trace().abs() > 2.0,
        }
    }

    /// Entrywise distance to the identity in PSL2 (0 exactly in exact mode
    /// when equal).
    pub fn dist_to_identity(&self) -> f64 {
        match self {
            Isometry::Exact(x) => {
                if x.is_identity_psl() {
                    0.0
                } else {
                    x.to_mat2().dist_psl(&Mat2::identity()).max(f64::MIN_POSITIVE)
                }
            }
            Isometry::Float(x) => x.dist_psl(&Mat2::identity()),
        }
    }
}

/// `2·arccosh(|tr|/2)`.
pub fn translation_length(m: &Isometry) -> Result<f64> {
    if !m.is_hyperbolic() {
        return Err(Error::NotHyperbolic { abs_trace: m.abs_trace() });
    }
    Ok(length_from_abs_trace(m.abs_trace()))
}

pub fn length_from_abs_trace(t: f64) -> f64 {
    2.0 * (t / 2.0).acosh()
}

/// Group identifier accepted by the CLI and cache: `bolza` or `polygon:G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Bolza,
    Polygon(usize),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Bolza => write!(f, "bolza"),
            GroupSpec::Polygon(g) => write!(f, "polygon:{g}"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "bolza" {
            return Ok(GroupSpec::Bolza);
        }
        if let Some(g) = s.strip_prefix("polygon:") {
            let g: usize = g.parse().map_err(|_| Error::Parse(format!("bad genus in group spec {s:?}")))?;
            check_genus(g)?;
            return Ok(GroupSpec::Polygon(g));
        }
        Err(Error::Parse(format!("unknown group {s:?}; expected bolza or polygon:G")))
    }
}

impl GroupSpec {
    pub fn build(self, mode: ArithmeticMode) -> Result<SurfaceGroup> {
        match (self, mode) {
            (GroupSpec::Bolza, ArithmeticMode::Exact) => Ok(bolza_group()),
            (GroupSpec::Bolza, ArithmeticMode::Float) => Ok(bolza_group().to_float()),
            (GroupSpec::Polygon(g), ArithmeticMode::Float) => surface_group_regular_polygon(g),
            (GroupSpec::Polygon(_), ArithmeticMode::Exact) => Err(Error::InvalidInput(
                "exact arithmetic is only available for the Bolza group".into(),
            )),
        }
    }
}

/// Genus-G surface group with generators `a1, b1, ..., aG, bG`.
///
/// Besides the generators it carries the side pairings of a fundamental
/// polygon centered at `o = i` (as words in the generators) and the
/// polygon's in- and circumradius; the enumerator walks the tiling with them.
#[derive(Clone, Debug)]
pub struct SurfaceGroup {
    pub spec: GroupSpec,
    pub genus: usize,
    pub generators: Vec<Isometry>,
    pub mode: ArithmeticMode,
    pub moves: Vec<(Word, Isometry)>,
    pub inradius: f64,
    pub circumradius: f64,
}

impl SurfaceGroup {
    pub fn id(&self) -> String {
        self.spec.to_string()
    }

    pub fn generator(&self, g: Gen) -> Result<&Isometry> {
        match g {
            Gen::C => Err(Error::InvalidInput("the surface group has no generator c".into())),
            _ => {
                let i = g.index(self.genus);
                self.generators
                    .get(i)
                    .ok_or_else(|| Error::InvalidInput(format!("generator {g} out of range for genus {}", self.genus)))
            }
        }
    }

    /// Evaluates a word over `a_i, b_i` (any `c` letters are rejected).
    pub fn evaluate(&self, w: &Word) -> Result<Isometry> {
        let mut acc = Isometry::identity(self.mode);
        for &(g, e) in w.runs() {
            let x = *self.generator(g)?;
            let x = if e < 0 { x.inverse() } else { x };
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul(&x);
            }
        }
        Ok(acc)
    }

    /// Float generators conjugated so that the basepoint minimizes
    /// `Σ cosh d(z, g z)`. Products of these lose far fewer digits than the
    /// raw quaternion embedding when a generator moves `i` a long way.
    pub fn balanced_generators(&self) -> Vec<Mat2> {
        let gens: Vec<Mat2> = self.generators.iter().map(|g| g.to_mat2()).collect();
        let conj = |x: f64, t: f64| {
            let (u, v) = ((t / 2.0).exp(), (-t / 2.0).exp());
            let h = Mat2([u, x * v, 0.0, v]);
            let hi = h.inverse();
            gens.iter().map(|g| hi.mul(g).mul(&h)).collect::<Vec<_>>()
        };
        let cost = |x: f64, t: f64| conj(x, t).iter().map(Mat2::cosh_disp).sum::<f64>();
        let (mut x, mut t) = (0.0, 0.0);
        let mut best = cost(x, t);
        let mut step = 1.0;
        while step > 1e-12 {
            let mut moved = false;
            for (dx, dt) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                let c = cost(x + dx, t + dt);
                if c < best {
                    (x, t, best) = (x + dx, t + dt, c);
                    moved = true;
                }
            }
            if !moved {
                step /= 2.0;
            }
        }
        conj(x, t)
    }

    /// `[a1,b1]...[aG,bG]`.
    pub fn relator_product(&self) -> Isometry {
        self.evaluate(&crate::presentation::surface_relator(self.genus)).expect("standard generators")
    }

    /// Entrywise residual of the relator against `±Id` (0 when exact).
    pub fn relator_residual(&self) -> f64 {
        self.relator_product().dist_to_identity()
    }

    pub fn to_float(&self) -> SurfaceGroup {
        let conv = |x: &Isometry| Isometry::Float(x.to_mat2());
        SurfaceGroup {
            spec: self.spec,
            genus: self.genus,
            generators: self.generators.iter().map(conv).collect(),
            mode: ArithmeticMode::Float,
            moves: self.moves.iter().map(|(w, x)| (w.clone(), conv(x))).collect(),
            inradius: self.inradius,
            circumradius: self.circumradius,
        }
    }

    fn with_moves(spec: GroupSpec, genus: usize, generators: Vec<Isometry>, pairings: Vec<Word>, n_sides: usize) -> Self {
        let mode = generators[0].mode();
        let mut g = SurfaceGroup {
            spec,
            genus,
            generators,
            mode,
            moves: Vec::new(),
            inradius: 0.0,
            circumradius: 0.0,
        };
        let mut moves = Vec::new();
        for w in pairings {
            let x = g.evaluate(&w).expect("pairing words use standard generators");
            moves.push((w.clone(), x));
            let wi = w.invert();
            let xi = g.evaluate(&wi).expect("pairing words use standard generators");
            moves.push((wi, xi));
        }
        let t = (std::f64::consts::PI / n_sides as f64).tan().recip();
        g.moves = moves;
        g.inradius = t.acosh();
        g.circumradius = (t * t).acosh();
        g
    }
}

/// Bolza group in exact arithmetic.
///
/// The octagon side pairings `x_k` (opposite sides, relation
/// `x0 x1⁻¹ x2 x3⁻¹ x0⁻¹ x1 x2⁻¹ x3 = 1`) are rewritten in a standard basis
/// `a1 = x0⁻¹, b1 = x1 x0⁻¹, a2 = x1 x0⁻¹ x2⁻¹, b2 = x3 x2⁻¹` so that
/// `[a1,b1][a2,b2] = 1`.
pub fn bolza_group() -> SurfaceGroup {
    let p = QSqrt2::new(1, 1, 0);
    let h = QSqrt2::new(0, 1, 1);
    let (z, one) = (QSqrt2::ZERO, QSqrt2::ONE);
    let cs = [(one, z), (h, h), (z, one), (-h, h)];
    let x: Vec<Quat> = cs.iter().map(|&(c, s)| Quat([p, z, c, s])).collect();
    let a1 = x[0].inverse();
    let b1 = x[1] * x[0].inverse();
    let a2 = x[1] * x[0].inverse() * x[2].inverse();
    let b2 = x[3] * x[2].inverse();
    let generators = [a1, b1, a2, b2].iter().map(|q| Isometry::Exact(q.canonical())).collect();
    let pairings = ["A1", "b1A1", "A2b1", "b2A2b1"].iter().map(|s| s.parse().unwrap()).collect();
    SurfaceGroup::with_moves(GroupSpec::Bolza, 2, generators, pairings, 8)
}

/// Regular 4G-gon with interior angles `π/(2G)`, centered at `o = i`, sides
/// paired in the commutator pattern `a_m: s_{4m+2} → s_{4m}`,
/// `b_m: s_{4m+1} → s_{4m+3}`, which yields `∏[a_m, b_m] = 1`.
pub fn surface_group_regular_polygon(genus: usize) -> Result<SurfaceGroup> {
    check_genus(genus)?;
    let n = 4 * genus;
    let pi = std::f64::consts::PI;
    let r_in = (pi / n as f64).tan().recip().acosh();
    let theta = |k: usize| 2.0 * pi * k as f64 / n as f64;
    let pair = |i: usize, j: usize| Mat2::rot(theta(j)).mul(&Mat2::hyp(2.0 * r_in)).mul(&Mat2::rot(pi - theta(i)));
    let mut generators = Vec::with_capacity(2 * genus);
    for m in 0..genus {
        generators.push(Isometry::Float(pair(4 * m + 2, 4 * m).canonical()));
        generators.push(Isometry::Float(pair(4 * m + 3, 4 * m + 1).inverse().canonical()));
    }
    let pairings = (0..2 * genus).map(|i| Word::gen(Gen::from_index(i, genus))).collect();
    Ok(SurfaceGroup::with_moves(GroupSpec::Polygon(genus), genus, generators, pairings, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bolza_relator_is_exact() {
        let g = bolza_group();
        assert_eq!(g.relator_residual(), 0.0);
        for x in &g.generators {
            if let Isometry::Exact(q) = x {
                assert_eq!(q.norm(), QSqrt2::ONE);
            }
            assert!(x.is_hyperbolic());
            assert!(x.exact_trace().is_some());
        }
    }

    #[test]
    fn bolza_moves_realize_the_octagon_relation() {
        let g = bolza_group();
        let x: Vec<Isometry> = g.moves.iter().step_by(2).map(|m| m.1).collect();
        let rel = x[0].mul(&x[1].inverse()).mul(&x[2]).mul(&x[3].inverse());
        let rel = rel.mul(&x[0].inverse()).mul(&x[1]).mul(&x[2].inverse()).mul(&x[3]);
        assert_eq!(rel.dist_to_identity(), 0.0);
        // Every side pairing moves o by twice the inradius.
        for (_, m) in &g.moves {
            if let Isometry::Exact(q) = m {
                assert_eq!(q.cosh_disp_exact(), QSqrt2::new(5, 4, 0));
            }
        }
    }

    #[test]
    fn polygon_relator_holds() {
        for genus in 2..=4 {
            let g = surface_group_regular_polygon(genus).unwrap();
            assert!(g.relator_residual() < 1e-10, "G={genus}: {}", g.relator_residual());
            for x in &g.generators {
                assert!(x.abs_trace() > 2.0);
                assert!(x.det_residual() < 1e-12);
            }
        }
        assert!(surface_group_regular_polygon(1).is_err());
    }

    #[test]
    fn translation_length_formula() {
        let parabolic = Isometry::Float(Mat2([1.0, 1.0, 0.0, 1.0]));
        assert!(matches!(translation_length(&parabolic), Err(Error::NotHyperbolic { .. })));
        let e = 0.5f64.exp();
        let h = Isometry::Float(Mat2([e, 0.0, 0.0, 1.0 / e]));
        assert!((translation_length(&h).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn float_bolza_agrees_with_exact() {
        let g = bolza_group();
        let f = g.to_float();
        assert!(f.relator_residual() < 1e-10);
        for (x, y) in g.generators.iter().zip(&f.generators) {
            assert!((x.abs_trace() - y.abs_trace()).abs() < 1e-12);
        }
    }
}
