//! Reference enumerator: every freely reduced word up to a fixed length,
//! exact deduplication, classes by conjugation with short words.
//!
//! It shares nothing with the tiling walk except the quaternion arithmetic,
//! which is what makes it usable as an oracle for it.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{length_from_abs_trace, Isometry, Quat, SurfaceGroup};
use crate::error::{Error, Result};
use crate::presentation::{shortlex_cmp, Gen, Letter, Word};

#[derive(Clone, Debug)]
pub struct NaiveClass {
    /// Members found among words of bounded length, shortlex-least word first.
    pub members: Vec<(Isometry, Word)>,
    pub length: f64,
}

struct Dfs<'a> {
    letters: &'a [(Letter, Quat)],
    max_len: usize,
    max_trace: f64,
    cutoff: f64,
    found: HashMap<Quat, Word>,
}

impl Dfs<'_> {
    fn visit(&mut self, q: Quat, word: &mut Vec<Letter>) {
        if q.hyperbolic_exact() {
            let t = q.abs_trace();
            if t <= self.max_trace * (1.0 + 1e-12) && length_from_abs_trace(t) <= self.cutoff {
                let w = Word::from_letters(word.iter().copied());
                let key = q.canonical();
                match self.found.get(&key) {
                    Some(old) if shortlex_cmp(old, &w).is_le() => {}
                    _ => {
                        self.found.insert(key, w);
                    }
                }
            }
        }
        if word.len() == self.max_len {
            return;
        }
        for &(l, x) in self.letters {
            if word.last() == Some(&l.inverse()) {
                continue;
            }
            word.push(l);
            self.visit(q * x, word);
            word.pop();
        }
    }
}

fn exact_generators(group: &SurfaceGroup) -> Result<Vec<(Letter, Quat)>> {
    let mut out = Vec::new();
    for i in 0..2 * group.genus {
        let g = Gen::from_index(i, group.genus);
        let q = match group.generator(g)? {
            Isometry::Exact(q) => *q,
            Isometry::Float(_) => {
                return Err(Error::InvalidInput("the reference enumerator needs exact arithmetic".into()))
            }
        };
        out.push((Letter::new(g, 1), q));
        out.push((Letter::new(g, -1), q.inverse()));
    }
    Ok(out)
}

/// Classes of hyperbolic elements of length `≤ cutoff` among the elements
/// spelled by reduced words of length `≤ max_len`, merged by conjugation with
/// words of length `≤ conj_len`. Sorted by length, then shortlex word.
pub fn naive_classes(group: &SurfaceGroup, cutoff: f64, max_len: usize, conj_len: usize) -> Result<Vec<NaiveClass>> {
    let letters = exact_generators(group)?;
    let max_trace = 2.0 * (cutoff / 2.0).cosh();

    // One subtree per first letter; results are merged in letter order.
    let parts: Vec<HashMap<Quat, Word>> = letters
        .par_iter()
        .map(|&(l, x)| {
            let mut dfs = Dfs { letters: &letters, max_len, max_trace, cutoff, found: HashMap::new() };
            if max_len > 0 {
                dfs.visit(x, &mut vec![l]);
            }
            dfs.found
        })
        .collect();
    let mut found: HashMap<Quat, Word> = HashMap::new();
    for part in parts {
        for (q, w) in part {
            match found.get(&q) {
                Some(old) if shortlex_cmp(old, &w).is_le() => {}
                _ => {
                    found.insert(q, w);
                }
            }
        }
    }
    let mut elems: Vec<(Quat, Word)> = found.into_iter().collect();
    elems.sort_by(|a, b| shortlex_cmp(&a.1, &b.1));
    let index: HashMap<Quat, usize> = elems.iter().enumerate().map(|(i, e)| (e.0, i)).collect();

    // Conjugators: all reduced words of length ≤ conj_len.
    let mut conj: Vec<Quat> = vec![Quat::identity()];
    let mut layer: Vec<(Quat, Letter)> = letters.iter().map(|&(l, x)| (x, l)).collect();
    for _ in 0..conj_len {
        conj.extend(layer.iter().map(|e| e.0));
        let mut next = Vec::new();
        for &(q, last) in &layer {
            for &(l, x) in &letters {
                if l != last.inverse() {
                    next.push((q * x, l));
                }
            }
        }
        layer = next;
    }

    let mut parent: Vec<usize> = (0..elems.len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, (q, _)) in elems.iter().enumerate() {
        for u in &conj {
            let c = (*u * *q * u.inverse()).canonical();
            if let Some(&j) = index.get(&c) {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..elems.len() {
        let r = root(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut classes: Vec<NaiveClass> = groups
        .into_values()
        .map(|mut ms| {
            ms.sort_unstable();
            let length = length_from_abs_trace(elems[ms[0]].0.abs_trace());
            NaiveClass { members: ms.iter().map(|&i| (Isometry::Exact(elems[i].0), elems[i].1.clone())).collect(), length }
        })
        .collect();
    classes.sort_by(|a, b| {
        a.length.total_cmp(&b.length).then_with(|| shortlex_cmp(&a.members[0].1, &b.members[0].1))
    });
    Ok(classes)
}

/// Shortest translation length over reduced words of length `≤ max_len`.
pub fn minimal_translation_length(group: &SurfaceGroup, max_len: usize) -> Result<f64> {
    let letters = exact_generators(group)?;
    fn walk(letters: &[(Letter, Quat)], q: Quat, last: Option<Letter>, left: usize, best: &mut f64) {
        if last.is_some() && q.hyperbolic_exact() {
            *best = best.min(length_from_abs_trace(q.abs_trace()));
        }
        if left == 0 {
            return;
        }
        for &(l, x) in letters {
            if last == Some(l.inverse()) {
                continue;
            }
            walk(letters, q * x, Some(l), left - 1, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(&letters, Quat::identity(), None, max_len, &mut best);
    Ok(best)
}
