//! Surface presentations and Magnus subgroups.

mod amalgam;
mod dehn;
mod file;
mod normalize;

pub use amalgam::{AmalgamForm, Side, Syllable};
pub use dehn::{DehnReducer, DehnStep};
pub use file::PresentationFile;
pub use normalize::{Automorphism, Normalization, Transvection};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Factor, Result};
use crate::word::{Generator, Word};

/// `<a1, b1, ..., ak, bk : [a1,b1]...[ak,bk] = R = 1>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfacePresentation {
    genus: u32,
    relator: Word,
}

impl SurfacePresentation {
    pub fn new(genus: u32, relator: Word) -> Result<Self> {
        if genus < 2 {
            return Err(Error::GenusTooSmall(genus));
        }
        if relator.is_empty() {
            return Err(Error::EmptyRelator);
        }
        if !relator.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced);
        }
        let handle = relator.max_handle();
        if handle > genus {
            return Err(Error::HandleOutOfRange { handle, genus });
        }
        Ok(SurfacePresentation { genus, relator })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn relator(&self) -> &Word {
        &self.relator
    }

    /// `[a1,b1]...[ak,bk]` with `[a,b] = a^-1 b^-1 a b`.
    pub fn surface_relator(&self) -> Word {
        surface_relator(self.genus)
    }

    pub fn generators(&self) -> Vec<Generator> {
        Generator::all(self.genus)
    }

    pub fn dehn(&self) -> DehnReducer {
        DehnReducer::new(self.genus)
    }

    /// Exact word problem in the surface group: the Dehn-reduced form,
    /// which is empty iff `w = 1`.
    pub fn dehn_reduce(&self, w: &Word) -> Word {
        self.dehn().reduce(w)
    }

    pub fn is_trivial_in_surface(&self, w: &Word) -> bool {
        self.dehn_reduce(w).is_empty()
    }

    pub fn amalgam_normal_form(&self, split: u32, w: &Word) -> AmalgamForm {
        AmalgamForm::new(self.genus, split, w)
    }

    /// Checks that the relator is not conjugate into either Magnus subgroup.
    pub fn validate(&self, pair: &CompatiblePair) -> Result<()> {
        pair.check_genus(self.genus)?;
        let left = AmalgamForm::new(self.genus, pair.prefix, &self.relator).cyclic();
        if left.conjugate_into(Side::Left) {
            return Err(Error::RConjugateIntoFactor(Factor::M1));
        }
        let right = AmalgamForm::new(self.genus, pair.suffix - 1, &self.relator).cyclic();
        if right.conjugate_into(Side::Right) {
            return Err(Error::RConjugateIntoFactor(Factor::M2));
        }
        Ok(())
    }

    pub fn normalize_basis(&self, handle: u32) -> Normalization {
        Normalization::for_handle(self, handle)
    }

    pub fn with_relator(&self, relator: Word) -> Result<Self> {
        SurfacePresentation::new(self.genus, relator)
    }
}

pub fn surface_relator(genus: u32) -> Word {
    Word::commutator_chain(1, genus)
}

/// A Magnus subgroup in standard position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MagnusSpec {
    /// `<a1, b1, ..., aj, bj>`
    Prefix(u32),
    /// `<ai, bi, ..., ak, bk>`
    Suffix(u32),
}

impl MagnusSpec {
    pub fn handles(&self, genus: u32) -> std::ops::RangeInclusive<u32> {
        match *self {
            MagnusSpec::Prefix(j) => 1..=j,
            MagnusSpec::Suffix(i) => i..=genus,
        }
    }

    pub fn generators(&self, genus: u32) -> Vec<Generator> {
        self.handles(genus).flat_map(|h| [Generator::a(h), Generator::b(h)]).collect()
    }

    pub fn contains_letters(&self, genus: u32, w: &Word) -> bool {
        let hs = self.handles(genus);
        w.symbols().all(|g| hs.contains(&g.handle))
    }
}

impl fmt::Display for MagnusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MagnusSpec::Prefix(j) => write!(f, "prefix {j}"),
            MagnusSpec::Suffix(i) => write!(f, "suffix {i}"),
        }
    }
}

/// `M1 = Prefix(j)`, `M2 = Suffix(i)` with `i <= j + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatiblePair {
    pub prefix: u32,
    pub suffix: u32,
}

impl CompatiblePair {
    pub fn new(genus: u32, prefix: u32, suffix: u32) -> Result<Self> {
        let p = CompatiblePair { prefix, suffix };
        p.check_genus(genus)?;
        Ok(p)
    }

    pub fn check_genus(&self, genus: u32) -> Result<()> {
        let (j, i) = (self.prefix, self.suffix);
        if j < 1 || j + 1 > genus {
            return Err(Error::InvalidPair(format!("prefix {j} needs 1 <= j <= {}", genus - 1)));
        }
        if i < 2 || i > genus {
            return Err(Error::InvalidPair(format!("suffix {i} needs 2 <= i <= {genus}")));
        }
        if i > j + 1 {
            return Err(Error::InvalidPair(format!("suffix {i} and prefix {j} leave a gap (need i <= j + 1)")));
        }
        Ok(())
    }

    pub fn m1(&self) -> MagnusSpec {
        MagnusSpec::Prefix(self.prefix)
    }

    pub fn m2(&self) -> MagnusSpec {
        MagnusSpec::Suffix(self.suffix)
    }

    /// Handles shared by both subgroups (empty when `i = j + 1`).
    pub fn overlap(&self) -> std::ops::RangeInclusive<u32> {
        self.suffix..=self.prefix
    }

    /// `[a1,b1]...[a_{i-1},b_{i-1}]`, the boundary of the suffix side.
    pub fn delta(&self) -> Word {
        Word::commutator_chain(1, self.suffix - 1)
    }

    /// Free basis of `M1 ∩ M2` in the surface group: the overlap handles and `delta`.
    pub fn m0_generators(&self) -> Vec<Word> {
        let mut out: Vec<Word> = self
            .overlap()
            .flat_map(|h| [Word::single(Generator::a(h)), Word::single(Generator::b(h))])
            .collect();
        out.push(self.delta());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    pub(crate) const EXCEPTIONAL: &str = "a1^-2 b1^4 a1^2 a2^-2 b2^-3 a2^2 a1^-2 b1^2 a1^2 a2^-2 b2^-3 a2^2";

    #[test]
    fn presentation_invariants() {
        assert_eq!(SurfacePresentation::new(1, w("a1")), Err(Error::GenusTooSmall(1)));
        assert_eq!(SurfacePresentation::new(2, Word::identity()), Err(Error::EmptyRelator));
        assert_eq!(SurfacePresentation::new(2, w("a1 b1 a1^-1")), Err(Error::NotCyclicallyReduced));
        assert!(matches!(SurfacePresentation::new(2, w("a3")), Err(Error::HandleOutOfRange { .. })));
        assert_eq!(surface_relator(2), w("a1^-1 b1^-1 a1 b1 a2^-1 b2^-1 a2 b2"));
    }

    #[test]
    fn pair_constraints() {
        assert!(CompatiblePair::new(2, 1, 2).is_ok());
        assert!(CompatiblePair::new(3, 2, 2).is_ok());
        assert!(CompatiblePair::new(2, 2, 2).is_err());
        assert!(CompatiblePair::new(3, 1, 3).is_err());
        assert!(CompatiblePair::new(2, 1, 1).is_err());
        let p = CompatiblePair::new(3, 2, 2).unwrap();
        assert_eq!(p.m0_generators(), vec![w("a2"), w("b2"), w("a1^-1 b1^-1 a1 b1")]);
    }

    #[test]
    fn validate_examples() {
        let pair = CompatiblePair::new(2, 1, 2).unwrap();
        let ex = SurfacePresentation::new(2, w(EXCEPTIONAL)).unwrap();
        assert_eq!(ex.validate(&pair), Ok(()));
        let bad = SurfacePresentation::new(2, w("a1 b1")).unwrap();
        assert_eq!(bad.validate(&pair), Err(Error::RConjugateIntoFactor(Factor::M1)));
        let bad2 = SurfacePresentation::new(2, w("a2 b2^2")).unwrap();
        assert_eq!(bad2.validate(&pair), Err(Error::RConjugateIntoFactor(Factor::M2)));
        // b2 [a1,b1] b2^-1 a1: normal form (a2^-1 b2 a2 b2^-1)(a1) has cyclic length 2
        let r = w("b2 a1^-1 b1^-1 a1 b1 b2^-1 a1");
        let p = SurfacePresentation::new(2, r.clone()).unwrap();
        let nf = p.amalgam_normal_form(1, &r);
        assert_eq!(nf.len(), 2);
        assert_eq!(nf.syllables()[0].word, w("a2^-1 b2 a2 b2^-1"));
        assert_eq!(p.validate(&pair), Ok(()));
    }

    #[test]
    fn magnus_letters() {
        let m = MagnusSpec::Suffix(2);
        assert!(m.contains_letters(3, &w("a2 b3")));
        assert!(!m.contains_letters(3, &w("a1")));
        assert_eq!(MagnusSpec::Prefix(1).generators(2), vec![Generator::a(1), Generator::b(1)]);
    }
}
