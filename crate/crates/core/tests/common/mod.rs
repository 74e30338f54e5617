#![allow(dead_code)]

use magnus_core::pipeline::BasisChange;
use magnus_core::{CompatiblePair, Generator, Letter, SurfacePresentation, Word};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Reduced random word of exactly `len` letters over `gens`.
pub fn random_word(rng: &mut impl Rng, gens: &[Generator], len: usize) -> Word {
    let mut letters: Vec<Letter<Generator>> = Vec::with_capacity(len);
    while letters.len() < len {
        let g = gens[rng.gen_range(0..gens.len())];
        let l = if rng.gen_bool(0.5) { Letter::pos(g) } else { Letter::neg(g) };
        if letters.last().is_some_and(|x| x.is_inverse_of(&l)) {
            continue;
        }
        letters.push(l);
    }
    Word::from_letters(letters)
}

/// Cyclically reduced random relator using every handle's letters with some probability.
pub fn random_relator(rng: &mut impl Rng, genus: u32, len: usize) -> Word {
    let gens = Generator::all(genus);
    loop {
        let (core, _) = random_word(rng, &gens, len).cyclic_reduce();
        if !core.is_empty() {
            return core;
        }
    }
}

/// Random presentation already in normalized coordinates that passes
/// validation against `pair`.
pub fn random_normalized(rng: &mut impl Rng, genus: u32, pair: &CompatiblePair, len: usize) -> SurfacePresentation {
    loop {
        let r = random_relator(rng, genus, len);
        let pres = SurfacePresentation::new(genus, r).expect("valid relator");
        let normalized = pres.with_relator(BasisChange::compute(&pres).relator).expect("automorphic image");
        if normalized.validate(pair).is_ok() {
            return normalized;
        }
    }
}

/// Product of `count` conjugates of `r^±1` by random words.
pub fn conjugate_product(rng: &mut impl Rng, r: &Word, gens: &[Generator], count: usize, conj_len: usize) -> Word {
    let mut out = Word::identity();
    for _ in 0..count {
        let len = rng.gen_range(0..=conj_len);
        let c = random_word(rng, gens, len);
        let e = if rng.gen_bool(0.5) { 1 } else { -1 };
        out = &out * &r.pow(e).conjugate_by(&c);
    }
    out
}

pub fn word_strategy(genus: u32, max_len: usize) -> impl Strategy<Value = Word> {
    let n = 2 * genus as usize;
    prop::collection::vec((0..n, any::<bool>()), 0..=max_len).prop_map(|v| {
        let letters = v
            .into_iter()
            .map(|(i, inv)| Letter { sym: Generator::from_index(i), inv })
            .collect();
        Word::from_letters(letters).reduced()
    })
}
