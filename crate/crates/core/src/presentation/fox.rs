//! Left Fox derivatives in the integral group ring of the free group.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg};

use num_complex::Complex64;

use super::{Gen, Presentation, Word};

/// Coefficient ring for [`GroupRingElement`].
pub trait Coefficient: Copy + PartialEq + Add<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl Coefficient for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
}

/// Finite formal sum `Σ c_w w` over reduced words. Zero coefficients are
/// never stored, so structural equality is ring equality.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRingElement<T = i64> {
    terms: BTreeMap<Word, T>,
}

impl<T: Coefficient> Default for GroupRingElement<T> {
    fn default() -> Self {
        GroupRingElement { terms: BTreeMap::new() }
    }
}

impl<T: Coefficient> GroupRingElement<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Word::identity(), T::one())
    }

    pub fn monomial(w: Word, c: T) -> Self {
        let mut x = Self::zero();
        x.add_term(w, c);
        x
    }

    pub fn add_term(&mut self, w: Word, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &T)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self · w`, right multiplication by a group element.
    pub fn mul_word_right(&self, w: &Word) -> Self {
        let mut out = Self::zero();
        for (u, &c) in &self.terms {
            out.add_term(u.multiply(w), c);
        }
        out
    }

    /// `w · self`.
    pub fn mul_word_left(&self, w: &Word) -> Self {
        let mut out = Self::zero();
        for (u, &c) in &self.terms {
            out.add_term(w.multiply(u), c);
        }
        out
    }

    /// Applies a multiplicative map on words and sums the images linearly.
    pub fn evaluate<M, F>(&self, zero: M, mut f: F) -> M
    where
        M: Add<Output = M>,
        F: FnMut(&Word, T) -> M,
    {
        let mut acc = zero;
        for (w, &c) in &self.terms {
            acc = acc + f(w, c);
        }
        acc
    }
}

impl<T: Coefficient> Add for &GroupRingElement<T> {
    type Output = GroupRingElement<T>;
    fn add(self, o: &GroupRingElement<T>) -> GroupRingElement<T> {
        let mut out = self.clone();
        for (w, &c) in &o.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl<T: Coefficient> Neg for &GroupRingElement<T> {
    type Output = GroupRingElement<T>;
    fn neg(self) -> GroupRingElement<T> {
        GroupRingElement { terms: self.terms.iter().map(|(w, &c)| (w.clone(), -c)).collect() }
    }
}

impl<T: Coefficient> Mul for &GroupRingElement<T> {
    type Output = GroupRingElement<T>;
    fn mul(self, o: &GroupRingElement<T>) -> GroupRingElement<T> {
        let mut out = GroupRingElement::zero();
        for (u, &a) in &self.terms {
            for (v, &b) in &o.terms {
                out.add_term(u.multiply(v), a * b);
            }
        }
        out
    }
}

/// `∂w/∂g` with `∂(uv) = ∂u + u ∂v`. Runs `g^n` expand by the geometric
/// sums `1 + g + ... + g^(n-1)` and `-(g^-1 + ... + g^-n)`.
pub fn fox_derivative(w: &Word, g: Gen) -> GroupRingElement<i64> {
    let mut out = GroupRingElement::zero();
    let mut prefix = Word::identity();
    for &(h, n) in w.runs() {
        if h == g {
            if n > 0 {
                for k in 0..n {
                    out.add_term(prefix.multiply(&Word::power(g, k)), 1);
                }
            } else {
                for k in 1..=(-n) {
                    out.add_term(prefix.multiply(&Word::power(g, -k)), -1);
                }
            }
        }
        prefix = prefix.multiply(&Word::power(h, n));
    }
    out
}

/// `J[j][i] = ∂r_j/∂g_i` in presentation order.
pub fn fox_jacobian(p: &Presentation) -> Vec<Vec<GroupRingElement<i64>>> {
    p.relators.iter().map(|r| p.generators.iter().map(|&g| fox_derivative(r, g)).collect()).collect()
}

/// `Σ_g ∂w/∂g (g − 1) − (w − 1)`, zero for every word in the free group.
pub fn fundamental_residual(w: &Word, gens: &[Gen]) -> GroupRingElement<i64> {
    let mut lhs = GroupRingElement::zero();
    for &g in gens {
        let d = fox_derivative(w, g);
        let gm1 = &GroupRingElement::monomial(Word::gen(g), 1) + &GroupRingElement::monomial(Word::identity(), -1);
        lhs = &lhs + &(&d * &gm1);
    }
    let wm1 = &GroupRingElement::monomial(w.clone(), 1) + &GroupRingElement::monomial(Word::identity(), -1);
    &lhs + &(-&wm1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{surface_presentation, unit_tangent_presentation, Letter};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn base_rules() {
        assert_eq!(fox_derivative(&w("a1"), Gen::A(1)), GroupRingElement::one());
        assert_eq!(fox_derivative(&w("A1"), Gen::A(1)), GroupRingElement::monomial(w("A1"), -1));
        assert!(fox_derivative(&w("b1"), Gen::A(1)).is_zero());
    }

    #[test]
    fn commutator_derivative() {
        let d = fox_derivative(&w("a1b1A1B1"), Gen::A(1));
        let expected = &GroupRingElement::one() + &GroupRingElement::monomial(w("a1b1A1"), -1);
        assert_eq!(d, expected);
    }

    #[test]
    fn geometric_sum_for_fiber_power() {
        let d = fox_derivative(&Word::power(Gen::C, -4), Gen::C);
        assert_eq!(d.len(), 4);
        for k in 1..=4 {
            assert_eq!(d.terms().find(|(x, _)| **x == Word::power(Gen::C, -k)).map(|t| *t.1), Some(-1));
        }
    }

    #[test]
    fn fundamental_identity_all_relators() {
        for g in 2..=4 {
            for p in [surface_presentation(g).unwrap(), unit_tangent_presentation(g).unwrap()] {
                for r in &p.relators {
                    assert!(fundamental_residual(r, &p.generators).is_zero(), "{} relator {r}", p.kind);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(
            xs in prop::collection::vec((0usize..5, -2i64..3, 0usize..5), 0..5),
            ys in prop::collection::vec((0usize..5, -2i64..3, 0usize..5), 0..5),
            zs in prop::collection::vec((0usize..5, -2i64..3, 0usize..5), 0..5),
        ) {
            let build = |v: &Vec<(usize, i64, usize)>| {
                let mut e = GroupRingElement::<i64>::zero();
                for &(g, c, h) in v {
                    let word = Word::from_letters([Letter::new(Gen::from_index(g, 2), 1), Letter::new(Gen::from_index(h, 2), -1)]);
                    e.add_term(word, c);
                }
                e
            };
            let (x, y, z) = (build(&xs), build(&ys), build(&zs));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert!((&x + &(-&x)).is_zero());
            for (_, c) in (&x * &y).terms() {
                prop_assert!(*c != 0);
            }
        }

        #[test]
        fn fundamental_identity_random_words(
            ls in prop::collection::vec((0usize..5, prop::bool::ANY), 0..30)
        ) {
            let word = Word::from_letters(ls.into_iter().map(|(i, inv)| Letter::new(Gen::from_index(i, 2), if inv { -1 } else { 1 })));
            let gens: Vec<Gen> = (0..5).map(|i| Gen::from_index(i, 2)).collect();
            prop_assert!(fundamental_residual(&word, &gens).is_zero());
        }
    }
}
