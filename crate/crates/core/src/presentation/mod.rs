//! Words, presentations of the surface group and of the unit tangent bundle
//! group, and the group ring used by the Fox calculus.

mod fox;

pub use fox::{fox_derivative, fox_jacobian, fundamental_residual, GroupRingElement};

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Generator symbol. `A(i)` and `B(i)` are 1-based (`a1`, `b1`, ...);
/// `C` is the fiber generator of the unit tangent group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    A(u16),
    B(u16),
    C,
}

impl Gen {
    /// Column index in the ordering `a1, b1, ..., aG, bG, c`.
    pub fn index(self, genus: usize) -> usize {
        match self {
            Gen::A(i) => 2 * (i as usize - 1),
            Gen::B(i) => 2 * (i as usize - 1) + 1,
            Gen::C => 2 * genus,
        }
    }

    pub fn from_index(idx: usize, genus: usize) -> Gen {
        if idx == 2 * genus {
            Gen::C
        } else if idx.is_multiple_of(2) {
            Gen::A((idx / 2 + 1) as u16)
        } else {
            Gen::B((idx / 2 + 1) as u16)
        }
    }

    fn sort_key(self) -> (u16, u8) {
        match self {
            Gen::A(i) => (i, 0),
            Gen::B(i) => (i, 1),
            Gen::C => (u16::MAX, 2),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::A(i) => write!(f, "a{i}"),
            Gen::B(i) => write!(f, "b{i}"),
            Gen::C => write!(f, "c"),
        }
    }
}

/// One letter `g^e` with `e = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: Gen,
    pub exp: i8,
}

impl Letter {
    pub fn new(gen: Gen, exp: i8) -> Self {
        debug_assert!(exp == 1 || exp == -1);
        Letter { gen, exp }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, exp: -self.exp }
    }
}

impl Ord for Letter {
    // a1 < A1 < b1 < B1 < a2 < ... < c < C
    fn cmp(&self, other: &Self) -> Ordering {
        (self.gen.sort_key(), -self.exp).cmp(&(other.gen.sort_key(), -other.exp))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Freely reduced word, stored as runs `(generator, nonzero exponent)` with
/// no two adjacent runs on the same generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    runs: Vec<(Gen, i32)>,
}

impl Word {
    pub fn identity() -> Self {
        Word { runs: Vec::new() }
    }

    pub fn gen(g: Gen) -> Self {
        Word { runs: vec![(g, 1)] }
    }

    pub fn power(g: Gen, n: i32) -> Self {
        if n == 0 {
            Word::identity()
        } else {
            Word { runs: vec![(g, n)] }
        }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::identity();
        for l in letters {
            w.push_run(l.gen, l.exp as i32);
        }
        w
    }

    /// Builds a word from arbitrary runs, reducing as it goes.
    pub fn from_runs<I: IntoIterator<Item = (Gen, i32)>>(runs: I) -> Self {
        let mut w = Word::identity();
        for (g, e) in runs {
            w.push_run(g, e);
        }
        w
    }

    fn push_run(&mut self, g: Gen, e: i32) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.runs.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.runs.pop();
                }
                return;
            }
        }
        self.runs.push((g, e));
    }

    pub fn runs(&self) -> &[(Gen, i32)] {
        &self.runs
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.runs.iter().flat_map(|&(g, e)| {
            let l = Letter::new(g, e.signum() as i8);
            std::iter::repeat_n(l, e.unsigned_abs() as usize)
        })
    }

    pub fn len(&self) -> usize {
        self.runs.iter().map(|r| r.1.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.runs {
            w.push_run(g, e);
        }
        w
    }

    pub fn invert(&self) -> Word {
        Word { runs: self.runs.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    /// Words are kept reduced; this exists for API symmetry and
    /// re-normalizes a word built from raw letters.
    pub fn free_reduce(&self) -> Word {
        Word::from_runs(self.runs.iter().copied())
    }

    /// Conjugates away matching first/last letters.
    pub fn cyclic_reduce(&self) -> Word {
        let mut runs = self.runs.clone();
        loop {
            if runs.len() < 2 {
                break;
            }
            let (g0, e0) = runs[0];
            let (g1, e1) = runs[runs.len() - 1];
            if g0 != g1 {
                break;
            }
            if e0.signum() == e1.signum() {
                // Same generator, same direction: merge into a single run.
                let last = runs.pop().unwrap();
                runs[0].1 += last.1;
                break;
            }
            let k = e0.abs().min(e1.abs());
            runs[0].1 -= e0.signum() * k;
            let n = runs.len();
            runs[n - 1].1 -= e1.signum() * k;
            runs.retain(|r| r.1 != 0);
            // Interior runs may now be adjacent on the same generator only at
            // the wrap point, which the loop handles.
        }
        Word::from_runs(runs)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.runs.first(), self.runs.last()) {
            (Some(f), Some(l)) => self.runs.len() == 1 || f.0 != l.0 || f.1.signum() == l.1.signum(),
            _ => true,
        }
    }

    /// Lexicographically least cyclic rotation (letters compared with the
    /// `Letter` order). The input should be cyclically reduced.
    pub fn min_rotation(&self) -> Word {
        let letters: Vec<Letter> = self.letters().collect();
        let n = letters.len();
        if n == 0 {
            return Word::identity();
        }
        let mut best = 0usize;
        for start in 1..n {
            for k in 0..n {
                let x = letters[(start + k) % n];
                let y = letters[(best + k) % n];
                match x.cmp(&y) {
                    Ordering::Less => {
                        best = start;
                        break;
                    }
                    Ordering::Greater => break,
                    Ordering::Equal => {}
                }
            }
        }
        Word::from_letters((0..n).map(|k| letters[(best + k) % n]))
    }

    /// Deletes all `c` letters.
    pub fn project_to_sigma(&self) -> Word {
        Word::from_runs(self.runs.iter().copied().filter(|r| r.0 != Gen::C))
    }

    /// Total exponent of `g`.
    pub fn exponent_sum(&self, g: Gen) -> i32 {
        self.runs.iter().filter(|r| r.0 == g).map(|r| r.1).sum()
    }

    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.multiply(y).multiply(&x.invert()).multiply(&y.invert())
    }

    /// Highest generator index used (genus needed to interpret the word).
    pub fn max_genus(&self) -> usize {
        self.runs
            .iter()
            .map(|r| match r.0 {
                Gen::A(i) | Gen::B(i) => i as usize,
                Gen::C => 0,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Shortlex comparison on letters: shorter first, then lexicographic.
pub fn shortlex_cmp(x: &Word, y: &Word) -> Ordering {
    x.len().cmp(&y.len()).then_with(|| x.letters().cmp(y.letters()))
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex_cmp(self, other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            let s = l.gen.to_string();
            if l.exp < 0 {
                write!(f, "{}", s.to_uppercase())?;
            } else {
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `a1B2c...`; the empty string (or `1`) is the identity.
    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::identity());
        }
        let bytes = s.as_bytes();
        let mut i = 0;
        let mut letters = Vec::new();
        while i < bytes.len() {
            let ch = bytes[i] as char;
            let exp = if ch.is_ascii_uppercase() { -1 } else { 1 };
            i += 1;
            let gen = match ch.to_ascii_lowercase() {
                'c' => Gen::C,
                k @ ('a' | 'b') => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let idx: u16 = s[start..i]
                        .parse()
                        .map_err(|_| Error::Parse(format!("missing generator index in word {s:?}")))?;
                    if idx == 0 {
                        return Err(Error::Parse(format!("generator indices start at 1 in {s:?}")));
                    }
                    if k == 'a' {
                        Gen::A(idx)
                    } else {
                        Gen::B(idx)
                    }
                }
                _ => return Err(Error::Parse(format!("unexpected symbol {ch:?} in word {s:?}"))),
            };
            letters.push(Letter::new(gen, exp));
        }
        Ok(Word::from_letters(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "genus", rename_all = "kebab-case")]
pub enum PresentationKind {
    Surface(usize),
    UnitTangent(usize),
}

impl PresentationKind {
    pub fn genus(self) -> usize {
        match self {
            PresentationKind::Surface(g) | PresentationKind::UnitTangent(g) => g,
        }
    }
}

impl fmt::Display for PresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationKind::Surface(g) => write!(f, "surface:{g}"),
            PresentationKind::UnitTangent(g) => write!(f, "unit-tangent:{g}"),
        }
    }
}

impl FromStr for PresentationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, g) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("presentation id {s:?} is not of the form kind:G")))?;
        let g: usize = g.parse().map_err(|_| Error::Parse(format!("bad genus in {s:?}")))?;
        check_genus(g)?;
        match kind {
            "surface" => Ok(PresentationKind::Surface(g)),
            "unit-tangent" => Ok(PresentationKind::UnitTangent(g)),
            _ => Err(Error::Parse(format!("unknown presentation kind {kind:?}"))),
        }
    }
}

pub(crate) fn check_genus(g: usize) -> Result<()> {
    if g < 2 {
        return Err(Error::InvalidInput(format!("genus must satisfy G >= 2, got G = {g}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub kind: PresentationKind,
    pub generators: Vec<Gen>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn genus(&self) -> usize {
        self.kind.genus()
    }

    pub fn for_kind(kind: PresentationKind) -> Result<Presentation> {
        match kind {
            PresentationKind::Surface(g) => surface_presentation(g),
            PresentationKind::UnitTangent(g) => unit_tangent_presentation(g),
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        let rels: Vec<String> = self.relators.iter().map(|r| r.to_string()).collect();
        write!(f, "⟨{} | {}⟩", gens.join(", "), rels.join(", "))
    }
}

/// `[a1,b1]...[aG,bG]`.
pub fn surface_relator(g: usize) -> Word {
    let mut w = Word::identity();
    for i in 1..=g as u16 {
        w = w.multiply(&Word::commutator(&Word::gen(Gen::A(i)), &Word::gen(Gen::B(i))));
    }
    w
}

pub fn surface_presentation(g: usize) -> Result<Presentation> {
    check_genus(g)?;
    let generators = (0..2 * g).map(|i| Gen::from_index(i, g)).collect();
    Ok(Presentation { kind: PresentationKind::Surface(g), generators, relators: vec![surface_relator(g)] })
}

/// Relators `[ai,c]`, `[bi,c]` followed by `∏[ai,bi]·c^-(2G-2)`.
pub fn unit_tangent_presentation(g: usize) -> Result<Presentation> {
    check_genus(g)?;
    let generators: Vec<Gen> = (0..=2 * g).map(|i| Gen::from_index(i, g)).collect();
    let c = Word::gen(Gen::C);
    let mut relators = Vec::with_capacity(2 * g + 1);
    for i in 1..=g as u16 {
        relators.push(Word::commutator(&Word::gen(Gen::A(i)), &c));
        relators.push(Word::commutator(&Word::gen(Gen::B(i)), &c));
    }
    relators.push(surface_relator(g).multiply(&Word::power(Gen::C, -(2 * g as i32 - 2))));
    Ok(Presentation { kind: PresentationKind::UnitTangent(g), generators, relators })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn presentation_shapes() {
        let p = unit_tangent_presentation(2).unwrap();
        assert_eq!(p.generators.len(), 5);
        assert_eq!(p.relators.len(), 5);
        assert_eq!(surface_relator(2).len(), 8);
        assert_eq!(surface_relator(4).len(), 16);
        let p3 = unit_tangent_presentation(3).unwrap();
        assert_eq!(p3.relators.last().unwrap().exponent_sum(Gen::C), -4);
        assert!(surface_presentation(1).is_err());
    }

    #[test]
    fn basic_word_ops() {
        assert!(w("a1").multiply(&w("A1")).is_empty());
        assert_eq!(w("a1b1").invert(), w("B1A1"));
        assert_eq!(w("a1b1A1").cyclic_reduce(), w("b1"));
        assert_eq!(w("a1cb1C").project_to_sigma(), w("a1b1"));
        assert_eq!(w("c").project_to_sigma(), Word::identity());
        assert_eq!(w("a1a1A1"), w("a1"));
        assert_eq!(w("a2B1c").to_string(), "a2B1c");
    }

    #[test]
    fn long_relator_projects_to_surface_relator() {
        for g in 2..=4 {
            let p = unit_tangent_presentation(g).unwrap();
            assert_eq!(p.relators.last().unwrap().project_to_sigma(), surface_relator(g));
        }
    }

    #[test]
    fn cyclic_reduce_merges_wrapped_runs() {
        assert_eq!(w("a1b1a1").cyclic_reduce().len(), 3);
        assert_eq!(w("a1b1a1").cyclic_reduce().runs().len(), 2);
        assert_eq!(w("a1a1b1A1").cyclic_reduce(), w("a1b1"));
    }

    #[test]
    fn min_rotation_is_least() {
        let x = w("b1a1B1A1");
        assert_eq!(x.min_rotation(), w("a1B1A1b1"));
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((0usize..5, prop::bool::ANY), 0..max_len).prop_map(|v| {
            v.into_iter()
                .map(|(i, inv)| Letter::new(Gen::from_index(i, 2), if inv { -1 } else { 1 }))
                .collect()
        })
    }

    /// Stack-based reference reduction on raw letters.
    fn naive_reduce(ls: &[Letter]) -> Vec<Letter> {
        let mut out: Vec<Letter> = Vec::new();
        for &l in ls {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }

    proptest! {
        #[test]
        fn reduction_matches_stack_reference(ls in arb_word(40)) {
            let word = Word::from_letters(ls.clone());
            let letters: Vec<Letter> = word.letters().collect();
            prop_assert_eq!(letters, naive_reduce(&ls));
            prop_assert_eq!(word.free_reduce(), word.clone());
        }

        #[test]
        fn multiply_is_associative_and_inverse_cancels(
            x in arb_word(12), y in arb_word(12), z in arb_word(12)
        ) {
            let (x, y, z) = (Word::from_letters(x), Word::from_letters(y), Word::from_letters(z));
            prop_assert_eq!(x.multiply(&y).multiply(&z), x.multiply(&y.multiply(&z)));
            prop_assert!(x.multiply(&x.invert()).is_empty());
            prop_assert_eq!(x.multiply(&y).invert(), y.invert().multiply(&x.invert()));
        }

        #[test]
        fn projection_is_a_homomorphism(x in arb_word(15), y in arb_word(15)) {
            let (x, y) = (Word::from_letters(x), Word::from_letters(y));
            prop_assert_eq!(
                x.multiply(&y).project_to_sigma(),
                x.project_to_sigma().multiply(&y.project_to_sigma())
            );
        }

        #[test]
        fn cyclic_reduce_gives_cyclically_reduced_conjugate(x in arb_word(20)) {
            let x = Word::from_letters(x);
            let r = x.cyclic_reduce();
            prop_assert!(r.is_cyclically_reduced());
            prop_assert!(r.len() <= x.len());
            prop_assert_eq!(r.len() % 2, x.len() % 2);
        }

        #[test]
        fn display_parse_round_trip(x in arb_word(20)) {
            let x = Word::from_letters(x);
            prop_assert_eq!(x.to_string().parse::<Word>().unwrap(), x);
        }
    }
}
