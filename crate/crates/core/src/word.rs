//! Free-group words over an arbitrary ordered alphabet.
//!
//! The surface alphabet `a1 < b1 < a2 < ... < bk` is the default symbol type,
//! but the same [`Word`] type also carries leveled Schreier symbols and the
//! generator indices used by subgroup graphs.

use std::fmt;
use std::hash::Hash;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Anything usable as a letter of a free group alphabet.
pub trait Symbol: Clone + Eq + Ord + Hash + fmt::Debug {}
impl<T: Clone + Eq + Ord + Hash + fmt::Debug> Symbol for T {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    A,
    B,
}

/// A standard surface generator `a_i` or `b_i`.
///
/// The derived order is `a1 < b1 < a2 < b2 < ...`, which every enumeration
/// in the crate uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub handle: u32,
    pub kind: Kind,
}

impl Generator {
    pub const fn a(handle: u32) -> Self {
        Generator { handle, kind: Kind::A }
    }

    pub const fn b(handle: u32) -> Self {
        Generator { handle, kind: Kind::B }
    }

    /// Position in the total order, starting at 0 for `a1`.
    pub fn index(self) -> usize {
        2 * (self.handle as usize - 1) + usize::from(self.kind == Kind::B)
    }

    pub fn from_index(i: usize) -> Self {
        let handle = (i / 2) as u32 + 1;
        if i.is_multiple_of(2) {
            Generator::a(handle)
        } else {
            Generator::b(handle)
        }
    }

    /// All `2k` generators of a genus-`k` surface, in order.
    pub fn all(genus: u32) -> Vec<Generator> {
        (0..2 * genus as usize).map(Generator::from_index).collect()
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            Kind::A => 'a',
            Kind::B => 'b',
        };
        write!(f, "{}{}", c, self.handle)
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidToken(s.to_string());
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('a') => Kind::A,
            Some('b') => Kind::B,
            _ => return Err(bad()),
        };
        let handle: u32 = chars.as_str().parse().map_err(|_| bad())?;
        if handle == 0 {
            return Err(bad());
        }
        Ok(Generator { handle, kind })
    }
}

/// A signed occurrence of a symbol.
///
/// Ordered by symbol, then positive before inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter<S> {
    pub sym: S,
    pub inv: bool,
}

impl<S: Symbol> Letter<S> {
    pub fn pos(sym: S) -> Self {
        Letter { sym, inv: false }
    }

    pub fn neg(sym: S) -> Self {
        Letter { sym, inv: true }
    }

    pub fn inverse(&self) -> Self {
        Letter { sym: self.sym.clone(), inv: !self.inv }
    }

    pub fn sign(&self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }

    pub fn is_inverse_of(&self, other: &Self) -> bool {
        self.sym == other.sym && self.inv != other.inv
    }
}

/// An element of a free group, stored as a sequence of letters.
///
/// Construction does not reduce; use [`Word::reduced`] or the `*` operator
/// (which reduces) to get canonical forms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word<S = Generator> {
    letters: Vec<Letter<S>>,
}

impl<S> Default for Word<S> {
    fn default() -> Self {
        Word { letters: Vec::new() }
    }
}

impl<S: Symbol> Word<S> {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter<S>>) -> Self {
        Word { letters }
    }

    pub fn single(sym: S) -> Self {
        Word { letters: vec![Letter::pos(sym)] }
    }

    /// `sym^exp` as a reduced word.
    pub fn power_of(sym: S, exp: i64) -> Self {
        let l = Letter { sym, inv: exp < 0 };
        Word { letters: vec![l; exp.unsigned_abs() as usize] }
    }

    pub fn letters(&self) -> &[Letter<S>] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter<S>> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|p| !p[0].is_inverse_of(&p[1]))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(f), Some(l)) if self.letters.len() > 1 => !f.is_inverse_of(l),
                _ => true,
            }
    }

    /// The unique freely reduced word equal to `self`.
    pub fn reduced(&self) -> Self {
        let mut out: Vec<Letter<S>> = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            push_reducing(&mut out, l.clone());
        }
        Word { letters: out }
    }

    pub fn inverse(&self) -> Self {
        Word { letters: self.letters.iter().rev().map(Letter::inverse).collect() }
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }

    /// Reduced `self^n`; negative `n` inverts.
    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.reduced() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// Reduced `c * self * c^-1`.
    pub fn conjugate_by(&self, c: &Self) -> Self {
        &(c * self) * &c.inverse()
    }

    /// Splits a word into `(core, conjugator)` with
    /// `self == conjugator * core * conjugator^-1` and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Self, Self) {
        let w = self.reduced();
        let n = w.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && w.letters[k].is_inverse_of(&w.letters[n - 1 - k]) {
            k += 1;
        }
        let core = Word { letters: w.letters[k..n - k].to_vec() };
        let conj = Word { letters: w.letters[..k].to_vec() };
        (core, conj)
    }

    /// Signed number of occurrences of `sym`.
    pub fn exponent_sum(&self, sym: &S) -> i64 {
        self.letters.iter().filter(|l| &l.sym == sym).map(Letter::sign).sum()
    }

    /// Image under the endomorphism defined by `f` on symbols, reduced.
    pub fn substitute<T: Symbol>(&self, mut f: impl FnMut(&S) -> Word<T>) -> Word<T> {
        let mut out: Vec<Letter<T>> = Vec::new();
        for l in &self.letters {
            let img = f(&l.sym);
            let img = if l.inv { img.inverse() } else { img };
            for x in img.letters {
                push_reducing(&mut out, x);
            }
        }
        Word { letters: out }
    }

    /// Renames symbols letter by letter (no reduction is needed for an injective map).
    pub fn map_symbols<T: Symbol>(&self, mut f: impl FnMut(&S) -> T) -> Word<T> {
        Word {
            letters: self.letters.iter().map(|l| Letter { sym: f(&l.sym), inv: l.inv }).collect(),
        }
    }

    pub fn rotate(&self, k: usize) -> Self {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// All cyclic rotations of `self` and of its inverse, deduplicated and sorted.
    pub fn rotations_with_inverse(&self) -> Vec<Self> {
        let mut out = Vec::with_capacity(2 * self.len());
        for w in [self.clone(), self.inverse()] {
            for k in 0..w.len() {
                out.push(w.rotate(k));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn symbols(&self) -> impl Iterator<Item = &S> {
        self.letters.iter().map(|l| &l.sym)
    }

    /// Shortlex comparison key: shorter first, then lexicographic.
    pub fn shortlex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

fn push_reducing<S: Symbol>(out: &mut Vec<Letter<S>>, l: Letter<S>) {
    if out.last().is_some_and(|t| t.is_inverse_of(&l)) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl<S: Symbol> Mul for &Word<S> {
    type Output = Word<S>;

    fn mul(self, rhs: &Word<S>) -> Word<S> {
        let mut out = self.reduced().letters;
        for l in &rhs.letters {
            push_reducing(&mut out, l.clone());
        }
        // rhs may itself be unreduced
        Word { letters: out }.reduced()
    }
}

impl<S: Symbol> FromIterator<Letter<S>> for Word<S> {
    fn from_iter<I: IntoIterator<Item = Letter<S>>>(iter: I) -> Self {
        Word { letters: iter.into_iter().collect() }
    }
}

impl Word<Generator> {
    /// `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        let mut w = x.inverse();
        w = w.concat(&y.inverse());
        w = w.concat(x);
        w.concat(y).reduced()
    }

    /// `[a_i, b_i]` for a single handle.
    pub fn handle_commutator(handle: u32) -> Word {
        Word::commutator(&Word::single(Generator::a(handle)), &Word::single(Generator::b(handle)))
    }

    /// `[a_from, b_from] ... [a_to, b_to]`; empty when `from > to`.
    pub fn commutator_chain(from: u32, to: u32) -> Word {
        (from..=to).fold(Word::identity(), |acc, h| acc.concat(&Word::handle_commutator(h)))
    }

    /// Largest handle index that occurs, or 0 for the empty word.
    pub fn max_handle(&self) -> u32 {
        self.symbols().map(|g| g.handle).max().unwrap_or(0)
    }

    /// Exponent vector over the generators of a genus-`k` surface.
    pub fn exponent_vector(&self, genus: u32) -> Vec<i64> {
        let mut v = vec![0; 2 * genus as usize];
        for l in &self.letters {
            if let Some(slot) = v.get_mut(l.sym.index()) {
                *slot += l.sign();
            }
        }
        v
    }
}

/// Writes maximal runs of equal letters as `sym^n`.
fn fmt_runs<S: Symbol + fmt::Display>(w: &Word<S>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if w.is_empty() {
        return write!(f, "e");
    }
    let mut first = true;
    let mut i = 0;
    let ls = w.letters();
    while i < ls.len() {
        let mut j = i + 1;
        while j < ls.len() && ls[j] == ls[i] {
            j += 1;
        }
        let n = (j - i) as i64 * ls[i].sign();
        if !first {
            write!(f, " ")?;
        }
        first = false;
        if n == 1 {
            write!(f, "{}", ls[i].sym)?;
        } else {
            write!(f, "{}^{}", ls[i].sym, n)?;
        }
        i = j;
    }
    Ok(())
}

impl<S: Symbol + fmt::Display> fmt::Display for Word<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_runs(self, f)
    }
}

/// Parses whitespace-separated tokens `a<i>` / `b<i>` with optional `^<n>`.
/// The empty word is spelled `e`. The result is not reduced.
impl FromStr for Word<Generator> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut letters = Vec::new();
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens == ["e"] {
            return Ok(Word::identity());
        }
        for tok in tokens {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => {
                    let n: i64 = e.parse().map_err(|_| Error::InvalidToken(tok.to_string()))?;
                    (b, n)
                }
                None => (tok, 1),
            };
            if exp == 0 {
                return Err(Error::ZeroExponent(tok.to_string()));
            }
            let g: Generator = base.parse().map_err(|_| Error::InvalidToken(tok.to_string()))?;
            letters.extend(Word::power_of(g, exp).letters);
        }
        Ok(Word { letters })
    }
}

impl Serialize for Word<Generator> {
    fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word<Generator> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and bundled instances; panics on malformed input.
pub fn w(s: &str) -> Word {
    s.parse().expect("malformed word literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXCEPTIONAL: &str = "a1^-2 b1^4 a1^2 a2^-2 b2^-3 a2^2 a1^-2 b1^2 a1^2 a2^-2 b2^-3 a2^2";
    const NON_CYCLONORMAL: &str = "b1^4 a2^-1 b1^3 a2 b1^2 a2^-1 b1^3 a2";

    #[test]
    fn free_reduce_examples() {
        assert_eq!(w("a1 a1^-1").reduced(), Word::identity());
        assert_eq!(w("a1 b1 b1^-1 a1").reduced(), w("a1^2"));
        let r = w(EXCEPTIONAL);
        assert!(r.is_reduced());
        assert_eq!(r.reduced(), r);
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(w("a1 b2 a1^-1").cyclic_reduce(), (w("b2"), w("a1")));
        assert_eq!(Word::<Generator>::identity().cyclic_reduce(), (Word::identity(), Word::identity()));
        let r = w(EXCEPTIONAL);
        let conj = w("b1^-1").concat(&r).concat(&w("b1"));
        assert_eq!(conj.cyclic_reduce(), (r, w("b1^-1")));
    }

    #[test]
    fn exponent_sum_examples() {
        assert_eq!(w(NON_CYCLONORMAL).exponent_sum(&Generator::a(2)), 0);
        assert_eq!(w("a1 b1 a1^-1").exponent_sum(&Generator::a(1)), 0);
        assert_eq!(w(EXCEPTIONAL).exponent_sum(&Generator::a(1)), 0);
        assert_eq!(w(EXCEPTIONAL).exponent_sum(&Generator::b(1)), 6);
    }

    #[test]
    fn substitute_examples() {
        let x = w("a1 b1^-1 a2");
        assert_eq!(x.substitute(|g| Word::single(*g)), x.reduced());
        let tv = |g: &Generator| if *g == Generator::a(1) { w("b1 a1") } else { Word::single(*g) };
        assert_eq!(w("a1").substitute(tv), w("b1 a1"));
        let c = Word::handle_commutator(1);
        assert_eq!(c, w("a1^-1 b1^-1 a1 b1"));
        assert_eq!(c.substitute(tv), c);
    }

    #[test]
    fn token_syntax() {
        assert_eq!(w("e"), Word::identity());
        assert_eq!(w("a1^-2 b3").to_string(), "a1^-2 b3");
        assert!(matches!("a1^0".parse::<Word>(), Err(Error::ZeroExponent(_))));
        assert!("c1".parse::<Word>().is_err());
        assert!("a0".parse::<Word>().is_err());
        assert_eq!(Word::<Generator>::identity().to_string(), "e");
    }

    #[test]
    fn generator_order() {
        let gs = Generator::all(2);
        assert_eq!(gs, vec![Generator::a(1), Generator::b(1), Generator::a(2), Generator::b(2)]);
        assert!(gs.windows(2).all(|p| p[0] < p[1]));
        for (i, g) in gs.iter().enumerate() {
            assert_eq!(g.index(), i);
        }
    }
}
