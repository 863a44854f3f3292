//! Exact Bolza group elements as unit quaternions.
//!
//! The Bolza group sits inside the unit group of the quaternion algebra
//! `(-1, B)` over `Q(√2)` with `B = 2 + 2√2`. An element
//! `x0 + x1 I + x2 J + x3 IJ` (with `I² = -1`, `J² = B`) is realized in
//! `SL2(R)` by
//!
//! ```text
//! [ x0 + x2 β    x1 - x3 β ]
//! [ -x1 - x3 β   x0 - x2 β ]      β = √B
//! ```
//!
//! so all coordinates stay in `Q(√2)` even though matrix entries do not.
//! The realization fixes `o = i`, trace is `2 x0` and
//! `cosh d(o, γ o) = x0² + x1² + B (x2² + x3²)`.

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::Mat2;
use crate::qsqrt2::{QSqrt2, QSqrt2Repr};

pub(crate) fn b_const() -> QSqrt2 {
    QSqrt2::new(2, 2, 0)
}

pub(crate) fn beta() -> f64 {
    (2.0 + 2.0 * std::f64::consts::SQRT_2).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Quat(pub [QSqrt2; 4]);

impl Quat {
    pub fn identity() -> Quat {
        Quat([QSqrt2::ONE, QSqrt2::ZERO, QSqrt2::ZERO, QSqrt2::ZERO])
    }

    pub fn norm(&self) -> QSqrt2 {
        let [x0, x1, x2, x3] = self.0;
        let b = b_const();
        x0 * x0 + x1 * x1 - b * x2 * x2 - b * x3 * x3
    }

    /// Conjugate quaternion; the inverse of a unit element.
    pub fn inverse(&self) -> Quat {
        let [x0, x1, x2, x3] = self.0;
        Quat([x0, -x1, -x2, -x3])
    }

    pub fn neg(&self) -> Quat {
        let [x0, x1, x2, x3] = self.0;
        Quat([-x0, -x1, -x2, -x3])
    }

    /// Representative of `±q` with `x0 > 0` (or, if `x0 = 0`, first nonzero
    /// coordinate positive). Equal PSL2 elements get equal representatives.
    pub fn canonical(&self) -> Quat {
        for x in &self.0 {
            match x.signum() {
                0 => continue,
                s if s > 0 => return *self,
                _ => return self.neg(),
            }
        }
        *self
    }

    pub fn trace(&self) -> QSqrt2 {
        self.0[0] + self.0[0]
    }

    pub fn abs_trace(&self) -> f64 {
        self.trace().to_f64().abs()
    }

    /// `|trace| > 2`, decided exactly.
    pub fn hyperbolic_exact(&self) -> bool {
        let x0 = self.0[0];
        (x0 * x0 - QSqrt2::ONE).signum() > 0
    }

    pub fn cosh_disp_exact(&self) -> QSqrt2 {
        let [x0, x1, x2, x3] = self.0;
        x0 * x0 + x1 * x1 + b_const() * (x2 * x2 + x3 * x3)
    }

    pub fn cosh_disp(&self) -> f64 {
        self.cosh_disp_exact().to_f64()
    }

    pub fn to_mat2(&self) -> Mat2 {
        let [x0, x1, x2, x3] = self.0.map(|x| x.to_f64());
        let bt = beta();
        Mat2([x0 + x2 * bt, x1 - x3 * bt, -x1 - x3 * bt, x0 - x2 * bt])
    }

    pub fn is_identity_psl(&self) -> bool {
        let c = self.canonical();
        c == Quat::identity()
    }
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, o: Quat) -> Quat {
        let [x0, x1, x2, x3] = self.0;
        let [y0, y1, y2, y3] = o.0;
        let b = b_const();
        Quat([
            x0 * y0 - x1 * y1 + b * (x2 * y2 + x3 * y3),
            x0 * y1 + x1 * y0 + b * (x3 * y2 - x2 * y3),
            x0 * y2 + x2 * y0 - x1 * y3 + x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuatRepr(pub [QSqrt2Repr; 4]);

impl From<Quat> for QuatRepr {
    fn from(q: Quat) -> Self {
        QuatRepr(q.0.map(QSqrt2Repr::from))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_sqrt2() -> QSqrt2 {
        QSqrt2::new(0, 1, 1)
    }

    fn sample() -> Vec<Quat> {
        let p = QSqrt2::new(1, 1, 0);
        vec![
            Quat([p, QSqrt2::ZERO, QSqrt2::ONE, QSqrt2::ZERO]),
            Quat([p, QSqrt2::ZERO, half_sqrt2(), half_sqrt2()]),
            Quat([p, QSqrt2::ZERO, QSqrt2::ZERO, QSqrt2::ONE]),
        ]
    }

    #[test]
    fn generators_are_units_and_realization_is_homomorphic() {
        let xs = sample();
        for x in &xs {
            assert_eq!(x.norm(), QSqrt2::ONE);
            assert_eq!((*x * x.inverse()).canonical(), Quat::identity());
            assert!((x.to_mat2().det() - 1.0).abs() < 1e-12);
        }
        for x in &xs {
            for y in &xs {
                let exact = (*x * *y).to_mat2();
                let float = x.to_mat2().mul(&y.to_mat2());
                for k in 0..4 {
                    assert!((exact.0[k] - float.0[k]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn displacement_formula_matches_matrix() {
        for x in sample() {
            let m = x.to_mat2();
            assert!((x.cosh_disp() - m.cosh_disp()).abs() < 1e-12);
        }
    }
}
