use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use super::{CertFactor, Certificate};
use crate::budget::Budget;
use crate::word::{Letter, Symbol, Word};

struct Rotation<S> {
    rho: Word<S>,
    /// `rho = x^-1 r^exp x`
    x: Word<S>,
    /// `rho = y r^exp y^-1`
    y: Word<S>,
    exp: i64,
}

struct Node<S> {
    parent: Option<usize>,
    factor: Option<CertFactor<S>>,
}

/// Best-first search over insertions of cyclic rotations of `r^{±1}`.
///
/// Each move inserts a rotation at some position where it cancels against a
/// neighbour, then normalizes. A run stops at the first word accepted by
/// `goal`; the returned certificate satisfies `start = product * final`
/// (freely, or in whatever group `normalize` preserves).
pub(crate) struct InsertionSearch<'a, S> {
    rotations: Vec<Rotation<S>>,
    by_first: HashMap<Letter<S>, Vec<usize>>,
    by_last: HashMap<Letter<S>, Vec<usize>>,
    relator_len: usize,
    normalize: &'a (dyn Fn(&Word<S>) -> Word<S> + Sync),
}

impl<'a, S: Symbol> InsertionSearch<'a, S> {
    pub fn new(relator: &Word<S>, normalize: &'a (dyn Fn(&Word<S>) -> Word<S> + Sync)) -> Self {
        let mut rotations = Vec::new();
        let mut seen = HashSet::new();
        for exp in [1, -1] {
            let rr = relator.pow(exp);
            for off in 0..rr.len() {
                let rho = rr.rotate(off);
                if !seen.insert(rho.clone()) {
                    continue;
                }
                let x = Word::from_letters(rr.letters()[..off].to_vec());
                let y = Word::from_letters(rr.letters()[off..].to_vec());
                rotations.push(Rotation { rho, x, y, exp });
            }
        }
        let mut by_first: HashMap<Letter<S>, Vec<usize>> = HashMap::new();
        let mut by_last: HashMap<Letter<S>, Vec<usize>> = HashMap::new();
        for (i, r) in rotations.iter().enumerate() {
            let ls = r.rho.letters();
            by_first.entry(ls[0].clone()).or_default().push(i);
            by_last.entry(ls[ls.len() - 1].clone()).or_default().push(i);
        }
        InsertionSearch { rotations, by_first, by_last, relator_len: relator.len(), normalize }
    }

    pub fn run<T>(
        &self,
        start: &Word<S>,
        budget: &Budget,
        mut goal: impl FnMut(&Word<S>) -> Option<T>,
    ) -> Option<(T, Certificate<S>)> {
        let root = (self.normalize)(&start.reduced());
        let max_len = start.len().max(root.len()) + self.relator_len;
        let mut nodes = vec![Node { parent: None, factor: None }];
        let mut seen: HashSet<Word<S>> = HashSet::from([root.clone()]);
        let mut heap = BinaryHeap::from([Reverse((root.len(), 0usize, root, 0usize))]);
        let mut expanded = 0;
        while let Some(Reverse((_, depth, word, id))) = heap.pop() {
            if let Some(hit) = goal(&word) {
                return Some((hit, self.certificate(&nodes, id)));
            }
            if expanded >= budget.max_states {
                break;
            }
            if depth >= budget.max_conjugates {
                continue;
            }
            expanded += 1;
            let ls = word.letters();
            for pos in 0..=ls.len() {
                let mut cands: Vec<usize> = Vec::new();
                if pos > 0 {
                    if let Some(v) = self.by_first.get(&ls[pos - 1].inverse()) {
                        cands.extend(v);
                    }
                }
                if pos < ls.len() {
                    if let Some(v) = self.by_last.get(&ls[pos].inverse()) {
                        cands.extend(v);
                    }
                }
                cands.sort_unstable();
                cands.dedup();
                if cands.is_empty() {
                    continue;
                }
                let prefix = Word::from_letters(ls[..pos].to_vec());
                let suffix = Word::from_letters(ls[pos..].to_vec());
                for ri in cands {
                    let rot = &self.rotations[ri];
                    let g1 = &prefix * &rot.x.inverse();
                    let g2 = &prefix * &rot.y;
                    let g = if g2.len() < g1.len() { g2 } else { g1 };
                    if g.len() > budget.max_conjugator_len {
                        continue;
                    }
                    let next = (self.normalize)(&(&(&prefix * &rot.rho) * &suffix));
                    if next.len() > max_len || seen.contains(&next) {
                        continue;
                    }
                    seen.insert(next.clone());
                    nodes.push(Node {
                        parent: Some(id),
                        factor: Some(CertFactor { conjugator: g, exp: -rot.exp }),
                    });
                    heap.push(Reverse((next.len(), depth + 1, next, nodes.len() - 1)));
                }
            }
        }
        None
    }

    fn certificate(&self, nodes: &[Node<S>], mut id: usize) -> Certificate<S> {
        let mut factors = Vec::new();
        while let Some(p) = nodes[id].parent {
            factors.push(nodes[id].factor.clone().expect("non-root node has a factor"));
            id = p;
        }
        factors.reverse();
        Certificate { factors }
    }
}
