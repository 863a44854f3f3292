//! Finite-dimensional complex representations of the surface group and of
//! the unit tangent group.

mod classify;
mod io;

pub use classify::{
    burnside_span_dim, centralizer_dimension, classify, invariant_dim, is_regular, RepClassification,
};
pub use io::{RepFile, REP_SCHEMA_VERSION};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fuchsian::{GeodesicClass, Mat2, SurfaceGroup};
use crate::linalg::{self, c, CMat};
use crate::presentation::{Gen, Presentation, PresentationKind, Word};
use crate::Complex64;

/// Default relator tolerance for constructed representations.
pub const REP_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct Representation {
    pub r: usize,
    pub target: PresentationKind,
    /// Images in presentation order `a1, b1, ..., aG, bG[, c]`.
    pub images: Vec<CMat>,
    inverses: Vec<CMat>,
    pub tol: f64,
    /// Largest condition number among the images, recorded at construction.
    pub max_condition: f64,
}

impl Representation {
    /// Validates invertibility and all relators within `tol`.
    pub fn new(target: PresentationKind, images: Vec<CMat>, tol: f64) -> Result<Self> {
        let rep = Self::new_unchecked(target, images, tol)?;
        let (res, scale) = rep.relator_check();
        if !(res <= tol * scale) {
            return Err(Error::RelatorViolated(format!(
                "relator residual {res:e} exceeds tolerance {tol:e} times roundoff scale {scale:e} on {target}"
            )));
        }
        Ok(rep)
    }

    /// Checks shapes and invertibility only.
    pub fn new_unchecked(target: PresentationKind, images: Vec<CMat>, tol: f64) -> Result<Self> {
        let g = target.genus();
        let n = match target {
            PresentationKind::Surface(_) => 2 * g,
            PresentationKind::UnitTangent(_) => 2 * g + 1,
        };
        if images.len() != n {
            return Err(Error::InvalidInput(format!("{target} needs {n} generator images, got {}", images.len())));
        }
        let r = images[0].nrows();
        if r == 0 {
            return Err(Error::InvalidInput("representation dimension must be at least 1".into()));
        }
        let mut inverses = Vec::with_capacity(n);
        let mut max_condition: f64 = 1.0;
        for (i, m) in images.iter().enumerate() {
            if m.nrows() != r || m.ncols() != r {
                return Err(Error::InvalidInput(format!(
                    "image of {} is {}x{}, expected {r}x{r}",
                    Gen::from_index(i, g),
                    m.nrows(),
                    m.ncols()
                )));
            }
            let inv = m.clone().try_inverse().ok_or_else(|| {
                Error::InvalidInput(format!("image of {} is not invertible", Gen::from_index(i, g)))
            })?;
            max_condition = max_condition.max(linalg::condition_number(m));
            inverses.push(inv);
        }
        Ok(Representation { r, target, images, inverses, tol, max_condition })
    }

    pub fn genus(&self) -> usize {
        self.target.genus()
    }

    pub fn presentation(&self) -> Presentation {
        Presentation::for_kind(self.target).expect("genus validated at construction")
    }

    pub fn image(&self, g: Gen) -> &CMat {
        &self.images[g.index(self.genus())]
    }

    /// `ρ(c)`; the identity for surface-group representations.
    pub fn c_image(&self) -> CMat {
        match self.target {
            PresentationKind::UnitTangent(_) => self.image(Gen::C).clone(),
            PresentationKind::Surface(_) => linalg::identity(self.r),
        }
    }

    /// Product of generator images along `w`.
    pub fn evaluate(&self, w: &Word) -> CMat {
        let g = self.genus();
        let mut acc = linalg::identity(self.r);
        for &(gen, e) in w.runs() {
            if gen == Gen::C && matches!(self.target, PresentationKind::Surface(_)) {
                continue;
            }
            let i = gen.index(g);
            let m = if e > 0 { &self.images[i] } else { &self.inverses[i] };
            for _ in 0..e.unsigned_abs() {
                acc = &acc * m;
            }
        }
        acc
    }

    /// Largest entrywise deviation of a relator image from the identity.
    pub fn relator_residual(&self) -> f64 {
        self.relator_check().0
    }

    /// Relator residual together with its roundoff scale: the largest
    /// `‖P‖·‖P⁻¹‖` (Frobenius) over prefixes `P` of the relators. Products
    /// of unitary images have scale `r`; hyperbolic images can grow it by
    /// many orders of magnitude.
    pub fn relator_check(&self) -> (f64, f64) {
        let id = linalg::identity(self.r);
        let g = self.genus();
        let mut res: f64 = 0.0;
        let mut scale: f64 = 1.0;
        for w in &self.presentation().relators {
            let mut p = id.clone();
            let mut pinv = id.clone();
            for l in w.letters() {
                if l.gen == Gen::C && matches!(self.target, PresentationKind::Surface(_)) {
                    continue;
                }
                let i = l.gen.index(g);
                let (m, mi) = if l.exp > 0 {
                    (&self.images[i], &self.inverses[i])
                } else {
                    (&self.inverses[i], &self.images[i])
                };
                p = &p * m;
                pinv = mi * &pinv;
                scale = scale.max(p.norm() * pinv.norm());
            }
            res = res.max(linalg::max_abs_diff(&p, &id));
        }
        (res, scale)
    }

    /// `g ↦ ρ(g)⁻ᵀ`.
    pub fn dual(&self) -> Result<Representation> {
        let images = self.inverses.iter().map(|m| m.transpose()).collect();
        Representation::new(self.target, images, self.tol)
    }

    /// `g ↦ P ρ(g) P⁻¹`.
    pub fn conjugate(&self, p: &CMat) -> Result<Representation> {
        let pinv = linalg::inverse(p)?;
        let images = self.images.iter().map(|m| p * m * &pinv).collect();
        let tol = self.tol * linalg::condition_number(p).max(1.0);
        Representation::new(self.target, images, tol)
    }

    pub fn direct_sum(&self, o: &Representation) -> Result<Representation> {
        if self.target != o.target {
            return Err(Error::InvalidInput("direct sum of representations of different groups".into()));
        }
        let (r1, r2) = (self.r, o.r);
        let images = self
            .images
            .iter()
            .zip(&o.images)
            .map(|(a, b)| {
                let mut m = CMat::zeros(r1 + r2, r1 + r2);
                m.view_mut((0, 0), (r1, r1)).copy_from(a);
                m.view_mut((r1, r1), (r2, r2)).copy_from(b);
                m
            })
            .collect();
        Representation::new(self.target, images, self.tol.max(o.tol))
    }

    pub fn tensor(&self, o: &Representation) -> Result<Representation> {
        if self.target != o.target {
            return Err(Error::InvalidInput("tensor product of representations of different groups".into()));
        }
        let images = self.images.iter().zip(&o.images).map(|(a, b)| a.kronecker(b)).collect();
        Representation::new(self.target, images, self.tol.max(o.tol) * 4.0)
    }

    /// Pulls a surface-group representation back to the unit tangent group
    /// with `c ↦ Id` (a factoring representation).
    pub fn pull_back_to_unit_tangent(&self) -> Result<Representation> {
        match self.target {
            PresentationKind::UnitTangent(_) => Ok(self.clone()),
            PresentationKind::Surface(g) => {
                let mut images = self.images.clone();
                images.push(linalg::identity(self.r));
                Representation::new(PresentationKind::UnitTangent(g), images, self.tol)
            }
        }
    }
}

/// Trivial representation of dimension `r`.
pub fn trivial_rep(target: PresentationKind, r: usize) -> Result<Representation> {
    let n = match target {
        PresentationKind::Surface(g) => 2 * g,
        PresentationKind::UnitTangent(g) => 2 * g + 1,
    };
    crate::presentation::check_genus(target.genus())?;
    Representation::new(target, vec![linalg::identity(r); n], REP_TOL)
}

/// Shift `A` and clock `B = diag(1, ω, ..., ω^(r-1))` with
/// `A B A⁻¹ B⁻¹ = ω Id`, `ω = e^(2πi/r)`.
pub fn clock_shift_pair(r: usize) -> Result<(CMat, CMat)> {
    if r == 0 {
        return Err(Error::InvalidInput("clock and shift matrices need r >= 1".into()));
    }
    let mut a = CMat::zeros(r, r);
    for i in 0..r {
        a[(i, (i + 1) % r)] = c(1.0, 0.0);
    }
    let b = CMat::from_diagonal(&nalgebra::DVector::from_fn(r, |k, _| {
        Complex64::from_polar(1.0, 2.0 * PI * k as f64 / r as f64)
    }));
    Ok((a, b))
}

/// Unitary representation of the unit tangent group with `ρ(c)` the scalar
/// `e^(2πij/((2G-2)r))`: `a1 ↦ A`, `b1 ↦ B` with `[A,B] = ω`, and
/// `a2 ↦ A`, `b2 ↦ B^m` with `[A, B^m] = ω^m = ω⁻¹ζ`, `ζ = e^(2πij/r)`.
pub fn unitary_generic_rep(genus: usize, r: usize, j: usize) -> Result<Representation> {
    crate::presentation::check_genus(genus)?;
    let jmax = r * (2 * genus - 2);
    if r == 0 || j == 0 || j > jmax {
        return Err(Error::InvalidInput(format!("need r >= 1 and 1 <= j <= r(2G-2) = {jmax}, got r = {r}, j = {j}")));
    }
    let (a, b) = clock_shift_pair(r)?;
    let m = ((j as i64 - 1).rem_euclid(r as i64)) as u32;
    let b2 = linalg::pow(&b, m);
    let mut images = vec![linalg::identity(r); 2 * genus + 1];
    images[0] = a.clone();
    images[1] = b;
    images[2] = a;
    images[3] = b2;
    let phase = 2.0 * PI * j as f64 / ((2 * genus - 2) * r) as f64;
    images[2 * genus] = linalg::scalar(r, Complex64::from_polar(1.0, phase));
    Representation::new(PresentationKind::UnitTangent(genus), images, REP_TOL).map_err(|e| match e {
        Error::RelatorViolated(s) => Error::ConstructionFailed(s),
        other => other,
    })
}

fn mat2_to_c(m: &Mat2) -> CMat {
    CMat::from_row_slice(2, 2, &m.0.map(|x| c(x, 0.0)))
}

/// `Ad(g)` on traceless 2×2 matrices in the basis
/// `H = diag(1,-1)`, `E = e12`, `F = e21`.
pub fn adjoint_matrix(g: &Mat2) -> CMat {
    let [a, b, cc, d] = g.0;
    let gi = [d, -b, -cc, a];
    let basis = [[1.0, 0.0, 0.0, -1.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]];
    let mul = |x: [f64; 4], y: [f64; 4]| {
        [x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]]
    };
    let mut out = CMat::zeros(3, 3);
    for (k, x) in basis.iter().enumerate() {
        let y = mul(mul(g.0, *x), gi);
        // y = p H + q E + r F
        out[(0, k)] = c(y[0], 0.0);
        out[(1, k)] = c(y[1], 0.0);
        out[(2, k)] = c(y[2], 0.0);
    }
    out
}

/// Adjoint representation of the surface group, pulled back to the unit
/// tangent group with `c ↦ Id`.
pub fn adjoint_rep(group: &SurfaceGroup) -> Result<Representation> {
    let mut images: Vec<CMat> = group.balanced_generators().iter().map(adjoint_matrix).collect();
    images.push(linalg::identity(3));
    Representation::new(PresentationKind::UnitTangent(group.genus), images, REP_TOL)
}

/// The SL2 lift `τ`: generators go to SL2 lifts of the group generators
/// (positive trace unless `flip[i]`), and `c ↦ -Id`.
pub fn sl2_lift_rep(group: &SurfaceGroup, flip: Option<&[bool]>) -> Result<Representation> {
    let g = group.genus;
    if let Some(f) = flip {
        if f.len() != 2 * g {
            return Err(Error::InvalidInput(format!("need {} sign choices, got {}", 2 * g, f.len())));
        }
    }
    let mut images: Vec<CMat> = group
        .balanced_generators()
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let m = if flip.is_some_and(|f| f[i]) { m.neg() } else { m };
            mat2_to_c(&m)
        })
        .collect();
    let mut prod = linalg::identity(2);
    for i in 0..g {
        let (a, b) = (&images[2 * i], &images[2 * i + 1]);
        let ai = linalg::inverse(a)?;
        let bi = linalg::inverse(b)?;
        prod = prod * a * b * ai * bi;
    }
    if linalg::max_abs_diff(&prod, &linalg::scalar(2, c(-1.0, 0.0))) < 1e-6 {
        return Err(Error::ConstructionFailed(
            "product of commutators of the lifts is -Id; the generators do not lift to SL2".into(),
        ));
    }
    images.push(linalg::scalar(2, c(-1.0, 0.0)));
    Representation::new(PresentationKind::UnitTangent(g), images, REP_TOL).map_err(|e| match e {
        Error::RelatorViolated(s) => Error::ConstructionFailed(s),
        other => other,
    })
}

/// Positive-trace SL2 lift of a geodesic class's holonomy under `τ`; its
/// eigenvalues are `e^(±ℓ/2)`.
pub fn geodesic_lift_holonomy(tau: &Representation, cls: &GeodesicClass) -> Result<CMat> {
    let m = tau.evaluate(&cls.word);
    let tr = m.trace();
    if tr.norm() <= 2.0 {
        return Err(Error::NotHyperbolic { abs_trace: tr.norm() });
    }
    Ok(if tr.re < 0.0 { -m } else { m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::bolza_group;

    #[test]
    fn clock_shift_commutator() {
        for r in 1..=5 {
            let (a, b) = clock_shift_pair(r).unwrap();
            let comm = &a * &b * linalg::inverse(&a).unwrap() * linalg::inverse(&b).unwrap();
            let omega = Complex64::from_polar(1.0, 2.0 * PI / r as f64);
            assert!(linalg::max_abs_diff(&comm, &linalg::scalar(r, omega)) <= 1e-14);
            assert!(linalg::is_unitary(&a, 1e-14) && linalg::is_unitary(&b, 1e-14));
        }
        let (a, b) = clock_shift_pair(2).unwrap();
        assert_eq!(a, CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]));
        assert!(linalg::max_abs_diff(&b, &CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]))) < 1e-15);
    }

    #[test]
    fn unitary_generic_rep_is_valid() {
        for genus in 2..=3 {
            for r in 1..=3 {
                for j in 1..=r * (2 * genus - 2) {
                    let rep = unitary_generic_rep(genus, r, j).unwrap();
                    assert!(rep.relator_residual() <= 1e-12);
                    for m in &rep.images {
                        assert!(linalg::is_unitary(m, 1e-14));
                    }
                }
            }
        }
        assert!(unitary_generic_rep(2, 2, 5).is_err());
        assert!(unitary_generic_rep(1, 2, 1).is_err());
    }

    #[test]
    fn adjoint_eigenvalues() {
        let g = bolza_group();
        let ad = adjoint_rep(&g).unwrap();
        for (i, x) in g.generators.iter().enumerate() {
            let m = &ad.images[i];
            assert!((m.determinant() - c(1.0, 0.0)).norm() < 1e-8);
            let l = crate::fuchsian::translation_length(x).unwrap();
            let mut ev: Vec<f64> = linalg::eigenvalues(m).iter().map(|z| z.re).collect();
            ev.sort_by(f64::total_cmp);
            let expected = [(-l).exp(), 1.0, l.exp()];
            for k in 0..3 {
                assert!((ev[k] - expected[k]).abs() < 1e-9 * expected[k].max(1.0));
            }
        }
        assert!(linalg::max_abs_diff(&adjoint_matrix(&Mat2::identity()), &linalg::identity(3)) < 1e-15);
    }

    #[test]
    fn sl2_lift_of_bolza() {
        let g = bolza_group();
        let tau = sl2_lift_rep(&g, None).unwrap();
        assert!(tau.relator_residual() <= 1e-10);
        assert!(linalg::max_abs_diff(tau.image(Gen::C), &linalg::scalar(2, c(-1.0, 0.0))) < 1e-15);
        let flips = [true, false, true, true];
        let tau2 = sl2_lift_rep(&g, Some(&flips)).unwrap();
        assert!(tau2.relator_residual() <= 1e-10);
    }

    #[test]
    fn dual_is_an_involution() {
        let rep = unitary_generic_rep(2, 3, 2).unwrap();
        let dd = rep.dual().unwrap().dual().unwrap();
        for (a, b) in rep.images.iter().zip(&dd.images) {
            assert!(linalg::max_abs_diff(a, b) <= 1e-12);
        }
        let d = rep.dual().unwrap();
        for (a, b) in rep.images.iter().zip(&d.images) {
            assert!(linalg::max_abs_diff(&a.map(|z| z.conj()), b) <= 1e-12);
        }
    }

    #[test]
    fn evaluate_group_law() {
        let rep = unitary_generic_rep(2, 3, 1).unwrap();
        let w: Word = "a1b2Ca2b1".parse().unwrap();
        let id = rep.evaluate(&w.multiply(&w.invert()));
        assert!(linalg::max_abs_diff(&id, &linalg::identity(3)) <= 3e-12);
        assert_eq!(rep.evaluate(&Word::identity()), linalg::identity(3));
    }
}
