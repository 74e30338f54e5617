use std::fmt;

use crate::error::{Error, Result};
use crate::word::{Generator, Letter, Symbol, Word};

/// `t^level * base * t^-level` for the grading generator `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeveledSymbol<B> {
    pub base: B,
    pub level: i64,
}

impl<B> LeveledSymbol<B> {
    pub fn new(base: B, level: i64) -> Self {
        LeveledSymbol { base, level }
    }
}

impl<B: fmt::Display> fmt::Display for LeveledSymbol<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.base, self.level)
    }
}

pub type LeveledWord<B = Generator> = Word<LeveledSymbol<B>>;

/// Rewrites `w` over the kernel of the exponent sum in `grading`, starting at `start`.
pub fn level_rewrite<S: Symbol>(w: &Word<S>, grading: &S, start: i64) -> Result<LeveledWord<S>> {
    let total = w.exponent_sum(grading);
    if total != 0 {
        return Err(Error::NonzeroExponent(total));
    }
    let mut level = start;
    let mut out = Vec::with_capacity(w.len());
    for l in w.letters() {
        if &l.sym == grading {
            level += l.sign();
        } else {
            out.push(Letter { sym: LeveledSymbol::new(l.sym.clone(), level), inv: l.inv });
        }
    }
    Ok(Word::from_letters(out).reduced())
}

/// Inverse of [`level_rewrite`]: `x_n -> t^n x t^-n`.
pub fn expand_levels<S: Symbol>(w: &LeveledWord<S>, grading: &S) -> Word<S> {
    w.substitute(|s| {
        let t = Word::power_of(grading.clone(), s.level);
        Word::single(s.base.clone()).conjugate_by(&t)
    })
}

/// Shifts every level by `by`.
pub fn shift_levels<S: Symbol>(w: &LeveledWord<S>, by: i64) -> LeveledWord<S> {
    w.map_symbols(|s| LeveledSymbol::new(s.base.clone(), s.level + by))
}

/// Copy of a plain word at one level.
pub fn at_level<S: Symbol>(w: &Word<S>, level: i64) -> LeveledWord<S> {
    w.map_symbols(|s| LeveledSymbol::new(s.clone(), level))
}

/// Smallest and largest level among the symbols selected by `keep`.
pub fn level_support<S: Symbol>(
    w: &LeveledWord<S>,
    mut keep: impl FnMut(&S) -> bool,
) -> Option<(i64, i64)> {
    w.symbols()
        .filter(|s| keep(&s.base))
        .fold(None, |acc, s| match acc {
            None => Some((s.level, s.level)),
            Some((lo, hi)) => Some((lo.min(s.level), hi.max(s.level))),
        })
}

/// `base:level^sign` tokens, one per letter.
pub fn dump_tokens<B: Symbol + fmt::Display>(w: &LeveledWord<B>) -> String {
    if w.is_empty() {
        return "e".to_string();
    }
    w.letters()
        .iter()
        .map(|l| format!("{}^{}", l.sym, l.sign()))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Replaces each `(b_k)_n` by `(b_k)_anchor` times the boundary chains between
/// the two levels, using `(b_k)_n = (b_k)_{n-1} c_n^-1` with
/// `c_n = ([a1,b1]...[a_{k-1},b_{k-1}])_n`.
pub fn eliminate_chain(w: &LeveledWord, genus: u32, anchor: i64) -> LeveledWord {
    let bk = Generator::b(genus);
    let c = Word::commutator_chain(1, genus - 1);
    w.substitute(|s| {
        if s.base != bk || s.level == anchor {
            return Word::single(*s);
        }
        let mut out = Word::single(LeveledSymbol::new(bk, anchor));
        if s.level > anchor {
            for n in anchor + 1..=s.level {
                out = out.concat(&at_level(&c, n).inverse());
            }
        } else {
            for n in (s.level + 1..=anchor).rev() {
                out = out.concat(&at_level(&c, n));
            }
        }
        out
    })
}
