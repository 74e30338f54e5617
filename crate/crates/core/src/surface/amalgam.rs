use serde::Serialize;

use crate::word::Word;

/// Which factor of the splitting `<a1..b_s> *_<c> <a_{s+1}..b_k>` a syllable lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Syllable {
    pub side: Side,
    pub word: Word,
}

/// Reduced alternating factorization of a surface-group element over the
/// splitting along `c_s = [a1,b1]...[a_s,b_s]`.
///
/// No syllable is a power of the amalgamated element unless it is the only one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmalgamForm {
    genus: u32,
    split: u32,
    syllables: Vec<Syllable>,
}

impl AmalgamForm {
    pub fn new(genus: u32, split: u32, w: &Word) -> Self {
        assert!(split >= 1 && split < genus, "split must separate the handles");
        let mut syllables: Vec<Syllable> = Vec::new();
        for l in w.reduced().letters() {
            let side = if l.sym.handle <= split { Side::Left } else { Side::Right };
            match syllables.last_mut() {
                Some(s) if s.side == side => s.word = s.word.concat(&Word::from_letters(vec![*l])),
                _ => syllables.push(Syllable { side, word: Word::from_letters(vec![*l]) }),
            }
        }
        let mut f = AmalgamForm { genus, split, syllables };
        f.normalize();
        f
    }

    /// The amalgamated generator as a word on `side`.
    pub fn edge_word(&self, side: Side) -> Word {
        match side {
            Side::Left => Word::commutator_chain(1, self.split),
            Side::Right => Word::commutator_chain(self.split + 1, self.genus).inverse(),
        }
    }

    /// `Some(n)` when `word = c^n` on `side`.
    pub fn edge_power(&self, side: Side, word: &Word) -> Option<i64> {
        let c = self.edge_word(side);
        let n = c.len();
        if word.is_empty() {
            return Some(0);
        }
        if word.len() % n != 0 {
            return None;
        }
        let k = (word.len() / n) as i64;
        [k, -k].into_iter().find(|&e| c.pow(e) == *word)
    }

    fn normalize(&mut self) {
        loop {
            self.syllables.retain(|s| !s.word.is_empty());
            // merge equal-side neighbours
            let mut merged: Vec<Syllable> = Vec::with_capacity(self.syllables.len());
            for s in self.syllables.drain(..) {
                match merged.last_mut() {
                    Some(m) if m.side == s.side => m.word = &m.word * &s.word,
                    _ => merged.push(s),
                }
            }
            merged.retain(|s| !s.word.is_empty());
            self.syllables = merged;
            if self.syllables.len() < 2 {
                return;
            }
            let hit = self
                .syllables
                .iter()
                .enumerate()
                .find_map(|(t, s)| self.edge_power(s.side, &s.word).map(|p| (t, p)));
            match hit {
                Some((t, p)) => {
                    let side = self.syllables[t].side.other();
                    self.syllables[t] = Syllable { side, word: self.edge_word(side).pow(p) };
                }
                None => return,
            }
        }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Amalgam length.
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// `Some(n)` when the element is `c^n`, i.e. lies in the amalgamated subgroup.
    pub fn amalgamated_power(&self) -> Option<i64> {
        match self.syllables.as_slice() {
            [] => Some(0),
            [s] => self.edge_power(s.side, &s.word),
            _ => None,
        }
    }

    /// Side of a single-syllable element that is not a power of `c`.
    pub fn single_side(&self) -> Option<Side> {
        match self.syllables.as_slice() {
            [s] => Some(s.side),
            _ => None,
        }
    }

    /// Word representing the element on `side`, if it lies in that factor.
    pub fn word_on(&self, side: Side) -> Option<Word> {
        if let Some(p) = self.amalgamated_power() {
            return Some(self.edge_word(side).pow(p));
        }
        match self.syllables.as_slice() {
            [s] if s.side == side => Some(s.word.clone()),
            _ => None,
        }
    }

    /// Cyclically reduced form of some conjugate.
    pub fn cyclic(&self) -> Self {
        let mut f = self.clone();
        while f.syllables.len() >= 2 && f.syllables[0].side == f.syllables[f.syllables.len() - 1].side {
            let last = f.syllables.pop().expect("nonempty");
            f.syllables[0].word = &last.word * &f.syllables[0].word;
            f.normalize();
        }
        f
    }

    /// Whether some conjugate of the element lies in the factor on `side`.
    /// Call on a [`cyclic`](Self::cyclic) form.
    pub fn conjugate_into(&self, side: Side) -> bool {
        match self.syllables.as_slice() {
            [] => true,
            [s] if s.side == side => true,
            [s] => {
                // other side: conjugate into ours only through a power of c
                let (core, _) = s.word.cyclic_reduce();
                let c = self.edge_word(s.side);
                let n = c.len();
                if core.len() % n != 0 {
                    return false;
                }
                let k = (core.len() / n) as i64;
                [k, -k].into_iter().any(|e| {
                    let p = c.pow(e);
                    (0..p.len()).any(|r| p.rotate(r) == core)
                })
            }
            _ => false,
        }
    }

    /// Product of the syllables.
    pub fn to_word(&self) -> Word {
        self.syllables.iter().fold(Word::identity(), |acc, s| &acc * &s.word)
    }
}
