use std::collections::HashMap;

use crate::word::{Generator, Letter, Word};

/// One replacement performed by Dehn's algorithm: the input equals
/// `conjugator * relator^exp * conjugator^-1 * output` freely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DehnStep {
    pub conjugator: Word,
    pub exp: i64,
}

/// Dehn's algorithm for the closed orientable surface group of genus `k >= 2`.
///
/// Pieces of the surface relator have length 1, so any letter pair occurs at
/// one place in the cyclic words `r` and `r^-1`; the pair index makes each
/// match lookup constant time.
type LetterPair = (Letter<Generator>, Letter<Generator>);

#[derive(Clone, Debug)]
pub struct DehnReducer {
    relator: Word,
    // cyclic words: 0 = r, 1 = r^-1
    cycles: [Vec<Letter<Generator>>; 2],
    pairs: HashMap<LetterPair, Vec<(usize, usize)>>,
}

impl DehnReducer {
    pub fn new(genus: u32) -> Self {
        let relator = super::surface_relator(genus);
        let cycles = [relator.letters().to_vec(), relator.inverse().letters().to_vec()];
        let mut pairs: HashMap<_, Vec<_>> = HashMap::new();
        for (c, cyc) in cycles.iter().enumerate() {
            let n = cyc.len();
            for off in 0..n {
                pairs.entry((cyc[off], cyc[(off + 1) % n])).or_default().push((c, off));
            }
        }
        DehnReducer { relator, cycles, pairs }
    }

    pub fn relator(&self) -> &Word {
        &self.relator
    }

    /// Longest relator match starting at `i`: `(cycle, offset, length)`.
    fn best_match(&self, w: &[Letter<Generator>], i: usize) -> Option<(usize, usize, usize)> {
        if i + 1 >= w.len() {
            return None;
        }
        let cands = self.pairs.get(&(w[i], w[i + 1]))?;
        let mut best: Option<(usize, usize, usize)> = None;
        for &(c, off) in cands {
            let cyc = &self.cycles[c];
            let n = cyc.len();
            let mut len = 2;
            while len < n && i + len < w.len() && w[i + len] == cyc[(off + len) % n] {
                len += 1;
            }
            if best.is_none_or(|b| len > b.2) {
                best = Some((c, off, len));
            }
        }
        best
    }

    pub fn reduce(&self, w: &Word) -> Word {
        self.reduce_traced(w).0
    }

    /// Reduces `w` and records each replacement so that
    /// `w = product(conjugator * r^exp * conjugator^-1) * output` freely.
    pub fn reduce_traced(&self, w: &Word) -> (Word, Vec<DehnStep>) {
        let n = self.relator.len();
        let mut cur = w.reduced();
        let mut steps = Vec::new();
        let mut start = 0;
        'outer: loop {
            let letters = cur.letters().to_vec();
            let mut i = start;
            while i < letters.len() {
                if let Some((c, off, len)) = self.best_match(&letters, i) {
                    if 2 * len > n {
                        let cyc = &self.cycles[c];
                        // rho = u v is a rotation of r^{+-1}; replace u by v^-1
                        let rho: Word = (0..n).map(|t| cyc[(off + t) % n]).collect();
                        let v = Word::from_letters(rho.letters()[len..].to_vec());
                        let prefix = Word::from_letters(letters[..i].to_vec());
                        let suffix = Word::from_letters(letters[i + len..].to_vec());
                        // rho = s^-1 r^e s with s the first `off` letters of the cycle
                        let s = Word::from_letters(cyc[..off].to_vec());
                        let exp = if c == 0 { 1 } else { -1 };
                        steps.push(DehnStep { conjugator: &prefix * &s.inverse(), exp });
                        cur = prefix.concat(&v.inverse()).concat(&suffix).reduced();
                        start = i.saturating_sub(n);
                        continue 'outer;
                    }
                }
                i += 1;
            }
            break;
        }
        (cur, steps)
    }
}
