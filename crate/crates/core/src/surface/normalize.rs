use std::fmt;

use serde::Serialize;

use super::SurfacePresentation;
use crate::word::{Generator, Kind, Word};

/// `target -> other^power * target` inside one handle, the other generator fixed.
///
/// Both forms (`a -> b^n a`, `b -> a^n b`) fix `[a,b] = a^-1 b^-1 a b` letter
/// for letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Transvection {
    pub handle: u32,
    pub target: Kind,
    pub power: i64,
}

impl Transvection {
    fn target_gen(&self) -> Generator {
        Generator { handle: self.handle, kind: self.target }
    }

    fn other_gen(&self) -> Generator {
        let kind = match self.target {
            Kind::A => Kind::B,
            Kind::B => Kind::A,
        };
        Generator { handle: self.handle, kind }
    }

    pub fn inverse(&self) -> Self {
        Transvection { power: -self.power, ..*self }
    }

    pub fn image(&self, g: Generator) -> Word {
        if g == self.target_gen() {
            Word::power_of(self.other_gen(), self.power).concat(&Word::single(g))
        } else {
            Word::single(g)
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(|g| self.image(*g))
    }
}

impl fmt::Display for Transvection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.target_gen();
        write!(f, "{t} -> {} {t}", Word::power_of(self.other_gen(), self.power))
    }
}

/// A composite of transvections, applied left to right as substitutions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Automorphism {
    pub steps: Vec<Transvection>,
}

impl Automorphism {
    pub fn identity() -> Self {
        Automorphism::default()
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn apply(&self, w: &Word) -> Word {
        self.steps.iter().fold(w.reduced(), |acc, t| t.apply(&acc))
    }

    pub fn inverse(&self) -> Self {
        Automorphism { steps: self.steps.iter().rev().map(Transvection::inverse).collect() }
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Automorphism) -> Self {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().copied());
        Automorphism { steps }
    }

    pub fn image(&self, g: Generator) -> Word {
        self.apply(&Word::single(g))
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.steps.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// A change of basis in one handle making the relator's exponent sum in
/// that handle's `a` generator vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Normalization {
    pub presentation: SurfacePresentation,
    /// Old words to new coordinates: the new relator is the cyclic core of `to_normalized(R)`.
    pub to_normalized: Automorphism,
    /// New coordinates back to old words (the basis change itself).
    pub to_original: Automorphism,
    /// `to_normalized(R) = conjugator * new_relator * conjugator^-1` freely.
    pub conjugator: Word,
}

impl Normalization {
    pub(super) fn for_handle(pres: &SurfacePresentation, handle: u32) -> Self {
        let r = pres.relator();
        let mut alpha = r.exponent_sum(&Generator::a(handle));
        let mut beta = r.exponent_sum(&Generator::b(handle));
        let mut steps = Vec::new();
        // extended Euclid on (alpha, beta) by column operations
        while alpha != 0 {
            if beta == 0 {
                steps.push(Transvection { handle, target: Kind::A, power: 1 });
                beta = alpha;
            } else if alpha.abs() >= beta.abs() {
                let q = alpha / beta;
                steps.push(Transvection { handle, target: Kind::B, power: -q });
                alpha -= q * beta;
            } else {
                let q = beta / alpha;
                steps.push(Transvection { handle, target: Kind::A, power: -q });
                beta -= q * alpha;
            }
        }
        let to_normalized = Automorphism { steps };
        let to_original = to_normalized.inverse();
        let (core, conjugator) = to_normalized.apply(r).cyclic_reduce();
        let presentation = pres.with_relator(core).expect("automorphic image of a valid relator");
        Normalization { presentation, to_normalized, to_original, conjugator }
    }
}
