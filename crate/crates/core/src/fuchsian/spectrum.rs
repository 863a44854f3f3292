//! Enumeration of closed geodesics (conjugacy classes of hyperbolic
//! elements) up to a length cutoff.
//!
//! The search walks the polygon tiling from the base tile: a node is a group
//! element `w`, its neighbors are `w·m` for the side pairings `m`. A class of
//! length `ℓ` has a representative whose axis meets the base tile, hence with
//! `d(o, γo) ≤ ℓ + 2D` (`D` the circumradius); reaching such an element
//! along a tile path never leaves the ball of radius `d(o, γo) + D`. So the
//! walk prunes at `L + 3D` and keeps candidates with `d ≤ L + 2D`.
//!
//! Classes are the connected components of the candidates under conjugation
//! by short elements. Conjugating by a single side pairing already connects
//! each class: descending toward the axis stays inside the candidate set and
//! the tiles meeting the axis form an adjacency-connected chain.

use std::collections::HashMap;
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{length_from_abs_trace, ArithmeticMode, Isometry, Mat2, Quat, SurfaceGroup};
use crate::error::{Error, Result};
use crate::presentation::{shortlex_cmp, Word};
use crate::qsqrt2::{QSqrt2, QSqrt2Repr};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumOptions {
    /// Maximal number of tiling steps (side pairings) from the base tile.
    pub max_depth: usize,
    /// Conjugators of tiling depth `≤ conj_radius` are used for class merging.
    pub conj_radius: usize,
    /// Upper bound on the number of visited group elements.
    pub node_budget: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { max_depth: 64, conj_radius: 4, node_budget: 20_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Completeness {
    /// The prune certified that nothing beyond the explored depth matters.
    Exhaustive,
    /// The depth limit cut off a nonempty frontier.
    Heuristic,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumStats {
    pub nodes: usize,
    pub depth_reached: usize,
    pub candidates: usize,
    pub conjugators: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TraceValue {
    Exact(QSqrt2Repr),
    Float(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicClass {
    /// Least cyclic rotation (shortlex) among the members' reduced words.
    pub word: Word,
    pub matrix: Isometry,
    pub trace: TraceValue,
    pub length: f64,
    pub primitive: bool,
    pub power_index: u32,
    /// Number of oriented classes in the spectrum with this length.
    pub multiplicity: u32,
}

#[derive(Clone, Debug)]
pub struct LengthSpectrum {
    pub group_id: String,
    pub genus: usize,
    pub mode: ArithmeticMode,
    pub cutoff: f64,
    pub classes: Vec<GeodesicClass>,
    pub options: EnumOptions,
    pub completeness: Completeness,
    pub stats: EnumStats,
}

impl LengthSpectrum {
    pub fn primitive(&self) -> impl Iterator<Item = &GeodesicClass> {
        self.classes.iter().filter(|c| c.primitive)
    }

    pub fn systole(&self) -> Option<f64> {
        self.classes.first().map(|c| c.length)
    }

    /// Empty spectrum shell (for tests and for loading).
    pub fn empty(group: &SurfaceGroup, cutoff: f64, options: EnumOptions) -> Self {
        LengthSpectrum {
            group_id: group.id(),
            genus: group.genus,
            mode: group.mode,
            cutoff,
            classes: Vec::new(),
            options,
            completeness: Completeness::Exhaustive,
            stats: EnumStats::default(),
        }
    }
}

/// Group element arithmetic used by the enumerator.
pub(crate) trait Elem: Copy + Send + Sync {
    type Key: Eq + Hash + Copy + Send + Sync;
    fn one() -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;
    fn cosh_disp(&self) -> f64;
    fn abs_trace(&self) -> f64;
    fn hyperbolic(&self) -> bool;
    /// Strictly smaller displacement than `o`.
    fn disp_lt(&self, o: &Self) -> bool;
    fn key(&self) -> Self::Key;
    fn probes(&self, out: &mut Vec<Self::Key>);
    fn same(&self, o: &Self) -> bool;
    fn to_iso(&self) -> Isometry;
    fn trace_value(&self) -> TraceValue;
}

impl Elem for Quat {
    type Key = Quat;
    fn one() -> Self {
        Quat::identity()
    }
    fn mul(&self, o: &Self) -> Self {
        (*self * *o).canonical()
    }
    fn inv(&self) -> Self {
        self.inverse().canonical()
    }
    fn cosh_disp(&self) -> f64 {
        Quat::cosh_disp(self)
    }
    fn abs_trace(&self) -> f64 {
        Quat::abs_trace(self)
    }
    fn hyperbolic(&self) -> bool {
        let x0 = self.0[0];
        (x0 * x0 - QSqrt2::ONE).signum() > 0
    }
    fn disp_lt(&self, o: &Self) -> bool {
        self.cosh_disp_exact() < o.cosh_disp_exact()
    }
    fn key(&self) -> Quat {
        *self
    }
    fn probes(&self, out: &mut Vec<Quat>) {
        out.push(*self);
    }
    fn same(&self, o: &Self) -> bool {
        self == o
    }
    fn to_iso(&self) -> Isometry {
        Isometry::Exact(*self)
    }
    fn trace_value(&self) -> TraceValue {
        TraceValue::Exact(self.trace().into())
    }
}

/// Cell size (hyperbolic units) of the float lookup grid.
const CELL: f64 = 0.05;
/// Orbit points of distinct elements are at least the systole apart; anything
/// closer than this is the same element up to roundoff.
const SAME_POINT_COSH: f64 = 1e-6;

fn cell_of(x: f64, row: i64) -> (i64, i64) {
    let yc = (row as f64 * CELL).exp();
    (row, (x / (yc * CELL)).floor() as i64)
}

impl Elem for Mat2 {
    type Key = (i64, i64);
    fn one() -> Self {
        Mat2::identity()
    }
    fn mul(&self, o: &Self) -> Self {
        Mat2::mul(self, o).canonical()
    }
    fn inv(&self) -> Self {
        self.inverse().canonical()
    }
    fn cosh_disp(&self) -> f64 {
        Mat2::cosh_disp(self)
    }
    fn abs_trace(&self) -> f64 {
        self.trace().abs()
    }
    fn hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0 + 1e-9
    }
    fn disp_lt(&self, o: &Self) -> bool {
        Mat2::cosh_disp(self) < Mat2::cosh_disp(o) * (1.0 - 1e-9)
    }
    fn key(&self) -> (i64, i64) {
        let (x, y) = self.image_of_i();
        cell_of(x, (y.ln() / CELL).floor() as i64)
    }
    fn probes(&self, out: &mut Vec<(i64, i64)>) {
        let (x, y) = self.image_of_i();
        let row = (y.ln() / CELL).floor() as i64;
        for r in row - 1..=row + 1 {
            let (_, col) = cell_of(x, r);
            for c in col - 1..=col + 1 {
                out.push((r, c));
            }
        }
    }
    fn same(&self, o: &Self) -> bool {
        let (x1, y1) = self.image_of_i();
        let (x2, y2) = o.image_of_i();
        ((x1 - x2).powi(2) + (y1 - y2).powi(2)) / (2.0 * y1 * y2) < SAME_POINT_COSH
    }
    fn to_iso(&self) -> Isometry {
        Isometry::Float(*self)
    }
    fn trace_value(&self) -> TraceValue {
        TraceValue::Float(self.trace().abs())
    }
}

/// Hash table of group elements with tolerance-aware lookup.
pub(crate) struct ElemTable<E: Elem> {
    map: HashMap<E::Key, Vec<usize>>,
    elems: Vec<E>,
}

impl<E: Elem> ElemTable<E> {
    pub(crate) fn new() -> Self {
        ElemTable { map: HashMap::new(), elems: Vec::new() }
    }

    pub(crate) fn find(&self, e: &E) -> Option<usize> {
        let mut probes = Vec::with_capacity(9);
        e.probes(&mut probes);
        for k in probes {
            if let Some(ids) = self.map.get(&k) {
                for &i in ids {
                    if self.elems[i].same(e) {
                        return Some(i);
                    }
                }
            }
        }
        None
    }

    /// Inserts unless present; returns the index and whether it was new.
    pub(crate) fn insert(&mut self, e: E) -> (usize, bool) {
        if let Some(i) = self.find(&e) {
            return (i, false);
        }
        let i = self.elems.len();
        self.elems.push(e);
        self.map.entry(e.key()).or_default().push(i);
        (i, true)
    }

    pub(crate) fn len(&self) -> usize {
        self.elems.len()
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller index wins so roots are schedule independent.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Class lookup built alongside a spectrum: maps any element whose class
/// has length `≤ L` to the index of that class.
pub struct ClassIndex {
    inner: IndexInner,
}

enum IndexInner {
    Exact(Index<Quat>),
    Float(Index<Mat2>),
}

struct Index<E: Elem> {
    moves: Vec<E>,
    candidates: ElemTable<E>,
    class_of: Vec<usize>,
}

impl<E: Elem> Index<E> {
    /// Greedy descent `γ ↦ m⁻¹ γ m` while the displacement drops. It stops
    /// once the axis meets the base tile, i.e. inside the candidate set.
    fn descend(&self, mut g: E) -> E {
        loop {
            let mut best: Option<E> = None;
            for m in &self.moves {
                let c = m.inv().mul(&g).mul(m);
                let cur = best.as_ref().unwrap_or(&g);
                if c.disp_lt(cur) {
                    best = Some(c);
                }
            }
            match best {
                Some(b) => g = b,
                None => return g,
            }
        }
    }

    fn classify(&self, g: E) -> Option<usize> {
        let d = self.descend(g);
        self.candidates.find(&d).map(|i| self.class_of[i])
    }
}

impl ClassIndex {
    /// Index of the class of `g` in the spectrum it was built with, or
    /// `None` when `g` is not conjugate to an enumerated class.
    pub fn classify(&self, g: &Isometry) -> Option<usize> {
        match (&self.inner, g) {
            (IndexInner::Exact(ix), Isometry::Exact(q)) => ix.classify(q.canonical()),
            (IndexInner::Float(ix), Isometry::Float(m)) => ix.classify(m.canonical()),
            (IndexInner::Float(ix), Isometry::Exact(q)) => ix.classify(q.to_mat2().canonical()),
            (IndexInner::Exact(_), Isometry::Float(_)) => None,
        }
    }
}

/// Same as [`enumerate_spectrum`] but also returns the class lookup.
pub fn enumerate_spectrum_indexed(
    group: &SurfaceGroup,
    cutoff: f64,
    opts: &EnumOptions,
) -> Result<(LengthSpectrum, ClassIndex)> {
    if !(cutoff > 0.0) || !cutoff.is_finite() {
        return Err(Error::InvalidInput(format!("length cutoff must be positive and finite, got {cutoff}")));
    }
    match group.mode {
        ArithmeticMode::Exact => {
            let conv = |x: &Isometry| match x {
                Isometry::Exact(q) => *q,
                Isometry::Float(_) => unreachable!("exact group with float generator"),
            };
            let (sp, ix) = run::<Quat>(group, cutoff, opts, conv)?;
            Ok((sp, ClassIndex { inner: IndexInner::Exact(ix) }))
        }
        ArithmeticMode::Float => {
            let conv = |x: &Isometry| x.to_mat2();
            let (sp, ix) = run::<Mat2>(group, cutoff, opts, conv)?;
            Ok((sp, ClassIndex { inner: IndexInner::Float(ix) }))
        }
    }
}

/// All conjugacy classes of hyperbolic elements with length `≤ cutoff`
/// (oriented: `γ` and `γ⁻¹` are distinct classes), sorted by length then
/// canonical word.
pub fn enumerate_spectrum(group: &SurfaceGroup, cutoff: f64, opts: &EnumOptions) -> Result<LengthSpectrum> {
    enumerate_spectrum_indexed(group, cutoff, opts).map(|r| r.0)
}

/// Class index of `g` in a spectrum enumerated with `index`.
pub fn canonical_class(index: &ClassIndex, g: &Isometry) -> Option<usize> {
    index.classify(g)
}

fn eval_word<E: Elem>(gens: &[E], w: &Word, genus: usize) -> E {
    let mut acc = E::one();
    for &(g, e) in w.runs() {
        let x = gens[g.index(genus)];
        let x = if e < 0 { x.inv() } else { x };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&x);
        }
    }
    acc
}

fn run<E: Elem>(
    group: &SurfaceGroup,
    cutoff: f64,
    opts: &EnumOptions,
    conv: impl Fn(&Isometry) -> E,
) -> Result<(LengthSpectrum, Index<E>)> {
    let gens: Vec<E> = group.generators.iter().map(&conv).collect();
    let moves: Vec<(Word, E)> = group.moves.iter().map(|(w, x)| (w.clone(), conv(x))).collect();
    let d = group.circumradius;
    let prune_cosh = (cutoff + 3.0 * d).cosh() * (1.0 + 1e-9);
    let cand_cosh = (cutoff + 2.0 * d).cosh() * (1.0 + 1e-9);
    let max_trace = 2.0 * (cutoff / 2.0).cosh();

    let mut stats = EnumStats::default();
    let mut prev: ElemTable<E> = ElemTable::new();
    let mut cur: ElemTable<E> = ElemTable::new();
    cur.insert(E::one());
    let mut frontier: Vec<(E, Word)> = vec![(E::one(), Word::identity())];
    let mut conjugators: Vec<E> = Vec::new();
    let mut candidates: Vec<(E, Word)> = Vec::new();
    let mut depth = 0usize;
    stats.nodes = 1;

    while !frontier.is_empty() && depth < opts.max_depth {
        let expanded: Vec<(E, Word)> = frontier
            .par_iter()
            .flat_map_iter(|(e, w)| {
                let (prev, cur) = (&prev, &cur);
                moves.iter().filter_map(move |(mw, m)| {
                    let x = e.mul(m);
                    if x.cosh_disp() > prune_cosh || prev.find(&x).is_some() || cur.find(&x).is_some() {
                        None
                    } else {
                        Some((x, w.multiply(mw)))
                    }
                })
            })
            .collect();
        let mut next_table = ElemTable::new();
        let mut next = Vec::new();
        for (x, w) in expanded {
            if next_table.insert(x).1 {
                next.push((x, w));
            }
        }
        depth += 1;
        stats.nodes += next.len();
        if stats.nodes > opts.node_budget {
            return Err(Error::BudgetExceeded { nodes: stats.nodes, budget: opts.node_budget });
        }
        for (x, w) in &next {
            if depth <= opts.conj_radius {
                conjugators.push(*x);
            }
            if x.cosh_disp() <= cand_cosh && x.hyperbolic() && x.abs_trace() <= max_trace * (1.0 + 1e-12) {
                let len = length_from_abs_trace(x.abs_trace());
                if len <= cutoff {
                    candidates.push((*x, w.clone()));
                }
            }
        }
        prev = std::mem::replace(&mut cur, next_table);
        frontier = next;
    }
    stats.depth_reached = depth;
    let completeness = if frontier.is_empty() { Completeness::Exhaustive } else { Completeness::Heuristic };
    // The base tile's own side pairings always take part in merging.
    if opts.conj_radius == 0 {
        conjugators.extend(moves.iter().map(|m| m.1));
    }
    stats.conjugators = conjugators.len();
    stats.candidates = candidates.len();

    let mut cand_table: ElemTable<E> = ElemTable::new();
    for (x, _) in &candidates {
        cand_table.insert(*x);
    }
    debug_assert_eq!(cand_table.len(), candidates.len());

    let pairs: Vec<(usize, usize)> = (0..candidates.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let g = candidates[i].0;
            let (ct, conj) = (&cand_table, &conjugators);
            conj.iter().filter_map(move |h| {
                let c = h.inv().mul(&g).mul(h);
                ct.find(&c).filter(|&j| j != i).map(|j| (i, j))
            })
        })
        .collect();
    let mut dsu = Dsu::new(candidates.len());
    for (i, j) in pairs {
        dsu.union(i, j);
    }

    let mut root_to_class: HashMap<usize, usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for i in 0..candidates.len() {
        let r = dsu.find(i);
        let c = *root_to_class.entry(r).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        members[c].push(i);
    }

    struct Raw<E> {
        word: Word,
        elem: E,
        length: f64,
        members: Vec<usize>,
    }
    let raws: Vec<Raw<E>> = members
        .into_par_iter()
        .map(|ms| {
            let word = ms
                .iter()
                .map(|&i| candidates[i].1.cyclic_reduce().min_rotation())
                .min_by(shortlex_cmp)
                .expect("nonempty class");
            let elem = eval_word(&gens, &word, group.genus);
            let length = length_from_abs_trace(elem.abs_trace());
            Raw { word, elem, length, members: ms }
        })
        .collect();
    let mut order: Vec<usize> = (0..raws.len()).collect();
    let quant = |l: f64| (l * 1e9).round() as i64;
    order.sort_by(|&a, &b| {
        quant(raws[a].length).cmp(&quant(raws[b].length)).then_with(|| shortlex_cmp(&raws[a].word, &raws[b].word))
    });
    let mut class_of = vec![0usize; candidates.len()];
    for (new_idx, &old) in order.iter().enumerate() {
        for &m in &raws[old].members {
            class_of[m] = new_idx;
        }
    }
    let index = Index { moves: moves.iter().map(|m| m.1).collect(), candidates: cand_table, class_of };

    let mut power_index = vec![1u32; order.len()];
    for &old in &order {
        let r = &raws[old];
        let mut p = r.elem;
        let mut k = 1u32;
        loop {
            k += 1;
            if (k as f64) * r.length > cutoff * (1.0 + 1e-12) {
                break;
            }
            p = p.mul(&r.elem);
            if let Some(c) = index.classify(p) {
                power_index[c] = power_index[c].max(k);
            }
        }
    }

    let mut classes: Vec<GeodesicClass> = order
        .iter()
        .enumerate()
        .map(|(i, &old)| {
            let r = &raws[old];
            GeodesicClass {
                word: r.word.clone(),
                matrix: r.elem.to_iso(),
                trace: r.elem.trace_value(),
                length: r.length,
                primitive: power_index[i] == 1,
                power_index: power_index[i],
                multiplicity: 1,
            }
        })
        .collect();
    set_multiplicities(&mut classes);

    let spectrum = LengthSpectrum {
        group_id: group.id(),
        genus: group.genus,
        mode: group.mode,
        cutoff,
        classes,
        options: *opts,
        completeness,
        stats,
    };
    Ok((spectrum, index))
}

pub(crate) fn set_multiplicities(classes: &mut [GeodesicClass]) {
    let mut i = 0;
    while i < classes.len() {
        let mut j = i + 1;
        while j < classes.len() && (classes[j].length - classes[i].length).abs() <= 1e-9 * classes[i].length {
            j += 1;
        }
        for c in &mut classes[i..j] {
            c.multiplicity = (j - i) as u32;
        }
        i = j;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{bolza_group, surface_group_regular_polygon};

    fn systole() -> f64 {
        2.0 * (1.0 + std::f64::consts::SQRT_2).acosh()
    }

    #[test]
    fn below_systole_is_empty() {
        let sp = enumerate_spectrum(&bolza_group(), 2.0, &EnumOptions::default()).unwrap();
        assert!(sp.classes.is_empty());
        assert_eq!(sp.completeness, Completeness::Exhaustive);
    }

    #[test]
    fn bolza_systoles() {
        let sp = enumerate_spectrum(&bolza_group(), 3.1, &EnumOptions::default()).unwrap();
        assert!(!sp.classes.is_empty());
        for c in &sp.classes {
            assert!((c.length - systole()).abs() < 1e-12);
            assert!(c.primitive);
            assert!(c.word.is_cyclically_reduced());
        }
        assert_eq!(sp.classes[0].multiplicity as usize, sp.classes.len());
    }

    #[test]
    fn budget_is_enforced() {
        let opts = EnumOptions { node_budget: 100, ..EnumOptions::default() };
        assert!(matches!(
            enumerate_spectrum(&bolza_group(), 4.0, &opts),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn depth_limit_marks_heuristic() {
        let opts = EnumOptions { max_depth: 2, ..EnumOptions::default() };
        let sp = enumerate_spectrum(&bolza_group(), 4.0, &opts).unwrap();
        assert_eq!(sp.completeness, Completeness::Heuristic);
    }

    #[test]
    fn polygon_genus_two_runs() {
        let g = surface_group_regular_polygon(2).unwrap();
        let sp = enumerate_spectrum(&g, 4.0, &EnumOptions::default()).unwrap();
        assert!(!sp.classes.is_empty());
        for c in &sp.classes {
            assert!(c.length <= 4.0);
        }
    }
}
