use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use super::search::InsertionSearch;
use super::{exponent_multiple, normal_closure_member, Certificate};
use crate::budget::Budget;
use crate::pipeline::OneRelatorInstance;
use crate::stallings::SubgroupGraph;
use crate::surface::{AmalgamForm, CompatiblePair, Side, SurfacePresentation};
use crate::word::{Generator, Letter, Symbol, Word};

/// `prefix_word = suffix_word` in the instance group, neither in `M0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalWitness {
    /// Over `M0 ∪ B2`.
    pub prefix_word: Word<usize>,
    /// Over `M0 ∪ B1`.
    pub suffix_word: Word<usize>,
    /// Product equals `prefix_word * suffix_word^-1` freely.
    pub certificate: Certificate<usize>,
}

fn exponent_vec(w: &Word<usize>, n: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    for l in w.letters() {
        v[l.sym] += l.sign();
    }
    v
}

/// Reduced words over `alphabet` of length `1..=max_len`, depth first, with
/// a lower bound on the letters still needed to reach an accepted vector.
fn enumerate<S: Symbol>(
    alphabet: &[S],
    max_len: usize,
    cap: usize,
    needed: &dyn Fn(&Word<S>) -> usize,
    accept: &mut dyn FnMut(&Word<S>),
) {
    let letters: Vec<Letter<S>> =
        alphabet.iter().flat_map(|s| [Letter::pos(s.clone()), Letter::neg(s.clone())]).collect();
    let mut count = 0;
    let mut stack: Vec<Word<S>> = vec![Word::identity()];
    while let Some(w) = stack.pop() {
        if !w.is_empty() {
            accept(&w);
            count += 1;
            if count >= cap {
                return;
            }
        }
        if w.len() == max_len {
            continue;
        }
        for l in letters.iter().rev() {
            if w.letters().last().is_some_and(|x| x.is_inverse_of(l)) {
                continue;
            }
            let next = w.concat(&Word::from_letters(vec![l.clone()]));
            if next.len() + needed(&next) <= max_len {
                stack.push(next);
            }
        }
    }
}

/// Bounded search for `w1 = w2` in the instance group with `w1` over
/// `M0 ∪ B2`, `w2` over `M0 ∪ B1` and neither in `M0`.
///
/// Candidate pairs are ordered by total length, then shortlex; only pairs
/// whose quotient has exponent vector a multiple of the relator's are tried.
pub fn exceptional_search(inst: &OneRelatorInstance, budget: &Budget) -> Option<ExceptionalWitness> {
    if budget.is_zero() {
        return None;
    }
    let n = inst.generators.len();
    let rel = &inst.relator;
    let v = exponent_vec(rel, n);
    let m0 = inst.m0();
    let m0_graph = SubgroupGraph::fold(&m0.iter().map(|&i| Word::single(i)).collect::<Vec<_>>());
    let outside_m0 = |w: &Word<usize>| m0_graph.contains(w).is_none();
    let max_total = budget.max_candidate_len;
    let v_norm: i64 = v.iter().map(|x| x.abs()).sum();
    let n_range: Vec<i64> = if v_norm == 0 {
        vec![0]
    } else {
        let lim = max_total as i64 / v_norm;
        (-lim..=lim).filter(|&k| k != 0).collect()
    };
    let cap = budget.max_states.saturating_mul(budget.max_candidates).max(1);

    // letters still needed on one side: its non-M0 coordinates must reach sign * k * v
    let side_words = |alphabet: Vec<usize>, sign: i64| -> Vec<Word<usize>> {
        let own: Vec<usize> = alphabet.iter().copied().filter(|i| !m0.contains(i)).collect();
        let needed = |w: &Word<usize>| -> usize {
            let cur = exponent_vec(w, n);
            n_range
                .iter()
                .map(|&k| own.iter().map(|&b| (sign * k * v[b] - cur[b]).unsigned_abs() as usize).sum::<usize>())
                .min()
                .unwrap_or(0)
        };
        let mut out = Vec::new();
        let mut accept = |w: &Word<usize>| {
            if needed(w) == 0 && outside_m0(w) {
                out.push(w.clone());
            }
        };
        enumerate(&alphabet, max_total.saturating_sub(1), cap, &needed, &mut accept);
        out
    };
    let prefix_side = side_words(inst.magnus_z(), 1);
    let suffix_side = side_words(inst.magnus_y(), -1);

    let mut by_vec: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (idx, w) in prefix_side.iter().enumerate() {
        by_vec.entry(exponent_vec(w, n)).or_default().push(idx);
    }
    let mut pairs: Vec<(usize, &Word<usize>, &Word<usize>)> = Vec::new();
    let mut seen: HashSet<(Word<usize>, Word<usize>)> = HashSet::new();
    for w2 in &suffix_side {
        let v2 = exponent_vec(w2, n);
        for &k in &n_range {
            let want: Vec<i64> = (0..n).map(|i| v2[i] + k * v[i]).collect();
            for &idx in by_vec.get(&want).map(Vec::as_slice).unwrap_or(&[]) {
                let w1 = &prefix_side[idx];
                if w1.len() + w2.len() > max_total {
                    continue;
                }
                // keep one of (w1, w2) and (w1^-1, w2^-1)
                let key = if w1.inverse().shortlex_cmp(w1).is_lt() {
                    (w1.inverse(), w2.inverse())
                } else {
                    (w1.clone(), w2.clone())
                };
                if seen.insert(key) {
                    pairs.push((w1.len() + w2.len(), w1, w2));
                }
            }
        }
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.shortlex_cmp(b.1)).then(a.2.shortlex_cmp(b.2)));
    pairs.truncate(budget.max_candidates);
    let canonical = |w1: &Word<usize>, w2: &Word<usize>| {
        if w1.inverse().shortlex_cmp(w1).is_lt() {
            (w1.inverse(), w2.inverse())
        } else {
            (w1.clone(), w2.clone())
        }
    };
    pairs.par_iter().find_map_first(|(_, w1, w2)| {
        let (w1, w2) = canonical(w1, w2);
        let target = &w1 * &w2.inverse();
        debug_assert!(exponent_multiple(rel, &target).is_some());
        let certificate = normal_closure_member(rel, &target, budget)?;
        Some(ExceptionalWitness { prefix_word: w1, suffix_word: w2, certificate })
    })
}

/// Target subgroup for [`intersection_sample`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `<a1, b1, ..., aj, bj>`, tested through the amalgam normal form.
    Prefix(u32),
    /// The subgroup generated by the listed letters (sound, not complete).
    Letters(Vec<Generator>),
}

impl Membership {
    /// A word for `w` inside the subgroup, if the test recognizes it.
    pub fn member(&self, genus: u32, w: &Word) -> Option<Word> {
        match self {
            Membership::Prefix(j) => AmalgamForm::new(genus, *j, w).word_on(Side::Left),
            Membership::Letters(gs) => w.symbols().all(|g| gs.contains(g)).then(|| w.clone()),
        }
    }
}

/// `target = g w g^-1` with `w` from the source subgroup equals `u` in `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionPair {
    pub w: Word,
    pub target: Word,
    pub u: Word,
    /// Product equals `target * u^-1` in the surface group.
    pub certificate: Certificate,
}

fn shortlex_words(gens: &[Generator], max_len: usize, cap: usize) -> Vec<Word> {
    let mut letters: Vec<Letter<Generator>> = gens.iter().flat_map(|g| [Letter::pos(*g), Letter::neg(*g)]).collect();
    letters.sort();
    let mut out = Vec::new();
    let mut layer = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &letters {
                if w.letters().last().is_some_and(|x| x.is_inverse_of(l)) {
                    continue;
                }
                next.push(w.concat(&Word::from_letters(vec![*l])));
                if out.len() + next.len() >= cap {
                    out.extend(next);
                    return out;
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Candidates for the source side: generator powers first, then short words
/// in shortlex order.
fn sample_candidates(source: &[Generator], budget: &Budget) -> Vec<Word> {
    let half = (budget.max_candidate_len / 2).max(1);
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for e in 1..=half as i64 {
        for g in source {
            for s in [e, -e] {
                let w = Word::power_of(*g, s);
                if seen.insert(w.clone()) {
                    out.push(w);
                }
            }
        }
    }
    let cap = budget.max_candidates.saturating_mul(100);
    for w in shortlex_words(source, half, cap) {
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

/// Certified elements `u` of the target subgroup with `u = g w g^-1` in `G`
/// for `w` in the subgroup generated by `source`.
///
/// The first `max_candidates` candidates get the full relator search; the
/// rest are only checked in the surface group.
pub fn intersection_sample(
    pres: &SurfacePresentation,
    source: &[Generator],
    into: &Membership,
    g: &Word,
    budget: &Budget,
) -> Vec<IntersectionPair> {
    if budget.is_zero() {
        return Vec::new();
    }
    let genus = pres.genus();
    let dehn = pres.dehn();
    let norm = |w: &Word| dehn.reduce(w);
    let search = InsertionSearch::new(pres.relator(), &norm);
    let root_only = Budget { max_states: 0, ..*budget };
    let candidates = sample_candidates(source, budget);
    candidates
        .par_iter()
        .enumerate()
        .filter_map(|(idx, w)| {
            let b = if idx < budget.max_candidates { budget } else { &root_only };
            let target = w.conjugate_by(g);
            let (u, certificate) = search.run(&target, b, |c| into.member(genus, c))?;
            let u = u.reduced();
            certificate
                .verify_in_surface(pres, &(&target * &u.inverse()))
                .then(|| IntersectionPair { w: w.clone(), target, u, certificate })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DoubleCoset {
    /// `g = m1 * m2 * certificate^-1`-style witness: the certificate's product
    /// equals `g * (m1 m2)^-1` in the surface group.
    Witness { m1: Word, m2: Word, certificate: Certificate },
    Inconclusive,
}

/// Bounded test of `g ∈ M1 M2`, after normalizing the `a1` and `ak`
/// exponent sums to zero.
pub fn in_double_coset(
    pres: &SurfacePresentation,
    pair: &CompatiblePair,
    g: &Word,
    budget: &Budget,
) -> DoubleCoset {
    let genus = pres.genus();
    let (a1, ak) = (Generator::a(1), Generator::a(genus));
    let m = -g.exponent_sum(&a1);
    let n = -g.exponent_sum(&ak);
    let left = Word::power_of(a1, m);
    let right = Word::power_of(ak, n);
    let g_norm = &(&left * g) * &right;
    let j = pair.prefix;
    let split = |c: &Word| -> Option<(Word, Word)> {
        let f = AmalgamForm::new(genus, j, c);
        match f.syllables() {
            [] => Some((Word::identity(), Word::identity())),
            [s] if s.side == Side::Left => Some((s.word.clone(), Word::identity())),
            [s] => Some((Word::identity(), s.word.clone())),
            [l, r] if l.side == Side::Left => Some((l.word.clone(), r.word.clone())),
            _ => None,
        }
    };
    let dehn = pres.dehn();
    let norm = |w: &Word| dehn.reduce(w);
    let search = InsertionSearch::new(pres.relator(), &norm);
    let b = if budget.is_zero() { Budget { max_states: 0, ..*budget } } else { *budget };
    let Some(((l, r), cert)) = search.run(&g_norm, &b, split) else {
        return DoubleCoset::Inconclusive;
    };
    let m1 = &left.inverse() * &l;
    let m2 = &r * &right.inverse();
    let certificate = cert.conjugated(&left.inverse());
    if certificate.verify_in_surface(pres, &(g * &(&m1 * &m2).inverse())) {
        DoubleCoset::Witness { m1, m2, certificate }
    } else {
        DoubleCoset::Inconclusive
    }
}
