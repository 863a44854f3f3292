//! Exact arithmetic in the dyadic subring `Z[1/2, √2]` of the quadratic
//! field `Q(√2)`.
//!
//! Every coordinate that occurs in the Bolza group (generators, products,
//! inverses) lives in this ring, so equality tests on group elements are
//! exact. Values are stored as `(a + b√2) / 2^k` with `k` minimal.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    a: i128,
    b: i128,
    k: u32,
}

#[inline]
fn ck_mul(x: i128, y: i128) -> i128 {
    x.checked_mul(y).expect("QSqrt2 coefficient overflow")
}

#[inline]
fn ck_add(x: i128, y: i128) -> i128 {
    x.checked_add(y).expect("QSqrt2 coefficient overflow")
}

#[inline]
fn ck_shl(x: i128, s: u32) -> i128 {
    
    x.checked_mul(1i128 << s).expect("QSqrt2 coefficient overflow")
}

impl QSqrt2 {
    pub const ZERO: QSqrt2 = QSqrt2 { a: 0, b: 0, k: 0 };
    pub const ONE: QSqrt2 = QSqrt2 { a: 1, b: 0, k: 0 };

    /// `(a + b√2) / 2^k`, normalized.
    pub fn new(a: i128, b: i128, k: u32) -> Self {
        QSqrt2 { a, b, k }.normalized()
    }

    pub fn from_int(n: i128) -> Self {
        QSqrt2 { a: n, b: 0, k: 0 }
    }

    pub fn sqrt2() -> Self {
        QSqrt2 { a: 0, b: 1, k: 0 }
    }

    /// Rational part numerator, √2 part numerator and the power of two in
    /// the common denominator.
    pub fn parts(&self) -> (i128, i128, u32) {
        (self.a, self.b, self.k)
    }

    fn normalized(mut self) -> Self {
        if self.a == 0 && self.b == 0 {
            return QSqrt2::ZERO;
        }
        while self.k > 0 && self.a % 2 == 0 && self.b % 2 == 0 {
            self.a /= 2;
            self.b /= 2;
            self.k -= 1;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Exact sign of `a + b√2`.
    pub fn signum(&self) -> i32 {
        let (a, b) = (self.a, self.b);
        let sa = a.signum() as i32;
        let sb = b.signum() as i32;
        if sa >= 0 && sb >= 0 {
            return if sa == 0 && sb == 0 { 0 } else { 1 };
        }
        if sa <= 0 && sb <= 0 {
            return -1;
        }
        // Opposite signs: compare a^2 with 2 b^2.
        let a2 = ck_mul(a, a);
        let b2 = ck_mul(2, ck_mul(b, b));
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -*self
        } else {
            *self
        }
    }

    pub fn to_f64(&self) -> f64 {
        let scale = (self.k as f64).exp2();
        (self.a as f64 + self.b as f64 * std::f64::consts::SQRT_2) / scale
    }

    /// Galois conjugate `a - b√2`.
    pub fn conjugate(&self) -> Self {
        QSqrt2 { a: self.a, b: -self.b, k: self.k }
    }

    pub fn scale_pow2(&self, e: i32) -> Self {
        if e >= 0 {
            QSqrt2::new(ck_shl(self.a, e as u32), ck_shl(self.b, e as u32), self.k)
        } else {
            QSqrt2::new(self.a, self.b, self.k + (-e) as u32)
        }
    }

    /// Rational coefficients as reduced `p/q` strings: `(rational, sqrt2)`.
    pub fn to_rational_strings(&self) -> (String, String) {
        fn frac(n: i128, k: u32) -> String {
            if n == 0 {
                return "0".to_string();
            }
            let mut n = n;
            let mut k = k;
            while k > 0 && n % 2 == 0 {
                n /= 2;
                k -= 1;
            }
            if k == 0 {
                n.to_string()
            } else {
                format!("{}/{}", n, 1i128 << k)
            }
        }
        (frac(self.a, self.k), frac(self.b, self.k))
    }

    /// Inverse of [`to_rational_strings`](Self::to_rational_strings); only
    /// dyadic denominators are accepted.
    pub fn from_rational_strings(rational: &str, sqrt2: &str) -> Option<Self> {
        fn parse(s: &str) -> Option<(i128, u32)> {
            let s = s.trim();
            match s.split_once('/') {
                None => Some((s.parse().ok()?, 0)),
                Some((n, d)) => {
                    let n: i128 = n.trim().parse().ok()?;
                    let d: i128 = d.trim().parse().ok()?;
                    if d <= 0 || d.count_ones() != 1 {
                        return None;
                    }
                    Some((n, d.trailing_zeros()))
                }
            }
        }
        let (a, ka) = parse(rational)?;
        let (b, kb) = parse(sqrt2)?;
        let k = ka.max(kb);
        Some(QSqrt2::new(ck_shl(a, k - ka), ck_shl(b, k - kb), k))
    }
}

impl Add for QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: QSqrt2) -> QSqrt2 {
        let k = self.k.max(o.k);
        let (s1, s2) = (k - self.k, k - o.k);
        QSqrt2::new(
            ck_add(ck_shl(self.a, s1), ck_shl(o.a, s2)),
            ck_add(ck_shl(self.b, s1), ck_shl(o.b, s2)),
            k,
        )
    }
}

impl Sub for QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: QSqrt2) -> QSqrt2 {
        self + (-o)
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { a: -self.a, b: -self.b, k: self.k }
    }
}

impl Mul for QSqrt2 {
    type Output = QSqrt2;
    // Denominators are `2^k`, so the exponents add.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: QSqrt2) -> QSqrt2 {
        let a = ck_add(ck_mul(self.a, o.a), ck_mul(2, ck_mul(self.b, o.b)));
        let b = ck_add(ck_mul(self.a, o.b), ck_mul(self.b, o.a));
        QSqrt2::new(a, b, self.k + o.k)
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, s) = self.to_rational_strings();
        match (self.a == 0, self.b == 0) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{r}"),
            (true, false) => write!(f, "{s}*sqrt2"),
            (false, false) => write!(f, "{r} + {s}*sqrt2"),
        }
    }
}

/// Serialized form: reduced rational coefficients of `1` and `√2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSqrt2Repr {
    pub rational: String,
    pub sqrt2: String,
}

impl From<QSqrt2> for QSqrt2Repr {
    fn from(x: QSqrt2) -> Self {
        let (rational, sqrt2) = x.to_rational_strings();
        QSqrt2Repr { rational, sqrt2 }
    }
}

impl TryFrom<QSqrt2Repr> for QSqrt2 {
    type Error = String;
    fn try_from(r: QSqrt2Repr) -> Result<Self, String> {
        QSqrt2::from_rational_strings(&r.rational, &r.sqrt2)
            .ok_or_else(|| format!("not a dyadic element of Q(sqrt2): {} + {}*sqrt2", r.rational, r.sqrt2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb() -> impl Strategy<Value = QSqrt2> {
        (-1000i128..1000, -1000i128..1000, 0u32..6).prop_map(|(a, b, k)| QSqrt2::new(a, b, k))
    }

    #[test]
    fn sqrt2_squares_to_two() {
        assert_eq!(QSqrt2::sqrt2() * QSqrt2::sqrt2(), QSqrt2::from_int(2));
        let half_sqrt2 = QSqrt2::new(0, 1, 1);
        assert_eq!(half_sqrt2 * half_sqrt2, QSqrt2::new(1, 0, 1));
    }

    #[test]
    fn exact_sign_near_cancellation() {
        // 99 - 70√2 ≈ 0.00505 > 0, 70√2 - 99 < 0, 577 - 408√2 > 0
        assert_eq!(QSqrt2::new(99, -70, 0).signum(), 1);
        assert_eq!(QSqrt2::new(-99, 70, 0).signum(), -1);
        assert_eq!(QSqrt2::new(577, -408, 3).signum(), 1);
        assert_eq!(QSqrt2::ZERO.signum(), 0);
    }

    #[test]
    fn normalization_makes_equality_structural() {
        assert_eq!(QSqrt2::new(4, 2, 2), QSqrt2::new(2, 1, 1));
        assert_eq!(QSqrt2::new(0, 0, 5), QSqrt2::ZERO);
    }

    #[test]
    fn rational_strings_round_trip() {
        let x = QSqrt2::new(3, -5, 3);
        let (r, s) = x.to_rational_strings();
        assert_eq!((r.as_str(), s.as_str()), ("3/8", "-5/8"));
        assert_eq!(QSqrt2::from_rational_strings(&r, &s), Some(x));
        assert_eq!(QSqrt2::from_rational_strings("1/3", "0"), None);
    }

    proptest! {
        #[test]
        fn ring_axioms(x in arb(), y in arb(), z in arb()) {
            prop_assert_eq!((x + y) * z, x * z + y * z);
            prop_assert_eq!((x * y) * z, x * (y * z));
            prop_assert_eq!(x * y, y * x);
            prop_assert_eq!(x - x, QSqrt2::ZERO);
        }

        #[test]
        fn signum_matches_float(x in arb()) {
            let f = x.to_f64();
            if f.abs() > 1e-9 {
                prop_assert_eq!(x.signum(), f.signum() as i32);
            }
        }
    }
}
