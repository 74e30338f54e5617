//! Two-level rewriting of the relator and emission of the reduced instance.
//!
//! The relator is first normalized so that its exponent sums in `a1` and
//! `ak` vanish. Rewriting over the kernel of the `ak` exponent sum gives the
//! leveled word `R~`; the width `m` of the smallest window of `M1` copies
//! that (together with `M~2`) contains a conjugate of `R~` is computed with
//! the cyclic loop criterion. When `m = 0` the same is repeated for the `a1`
//! grading, giving `p` and `R^`. When `p = 0` too, `R^` is read over
//! `M0 ∪ B1 ∪ B2`, the reduced one-relator instance.

mod basis;
mod instance;
mod leveled;

pub use basis::{FKey, GradedBasis, Layout, ReducedSymbol, Role, SecondSymbol, WindowKey};
pub use instance::{InstanceGenerator, OneRelatorInstance};
pub use leveled::{
    at_level, dump_tokens, eliminate_chain, expand_levels, level_rewrite, level_support, shift_levels,
    LeveledSymbol, LeveledWord,
};

use crate::error::{Error, Result};
use crate::stallings::{LoopWitness, SubgroupGraph};
use crate::surface::{Automorphism, CompatiblePair, SurfacePresentation};
use crate::word::{Generator, Symbol, Word};

/// Level rewriting over the `ak` grading followed by chain elimination
/// toward `anchor` (level 0 when `None`).
pub fn schreier_rewrite(w: &Word, genus: u32, anchor: Option<i64>) -> Result<LeveledWord> {
    let raw = level_rewrite(w, &Generator::a(genus), 0)?;
    Ok(eliminate_chain(&raw, genus, anchor.unwrap_or(0)).reduced())
}

/// Lowest level at which `b_k` occurs, or 0.
pub fn chain_anchor(raw: &LeveledWord, genus: u32) -> i64 {
    let bk = Generator::b(genus);
    level_support(raw, |g| *g == bk).map_or(0, |(lo, _)| lo)
}

/// Least `t` (and first shift `s`) such that the cyclic core of `w` reads a
/// loop in the graph of `gens(s, t)`, searching shifts in `lo..=hi - t`.
pub fn minimal_window<S: Symbol>(
    w: &Word<S>,
    lo: i64,
    hi: i64,
    mut gens: impl FnMut(i64, i64) -> Vec<Word<S>>,
) -> Result<(i64, i64, LoopWitness<S>)> {
    for t in 0..=(hi - lo).max(0) {
        for s in lo..=(hi - t).max(lo) {
            let g = SubgroupGraph::fold(&gens(s, t));
            if let Some(wit) = g.cyclic_loop_witness(w)? {
                return Ok((t, s, wit));
            }
        }
    }
    Err(Error::DegenerateRelator)
}

/// Conjugating automorphisms taking the input relator to the normalized one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    pub to_normalized: Automorphism,
    pub to_original: Automorphism,
    /// `to_normalized(R) = conjugator * relator * conjugator^-1` freely.
    pub conjugator: Word,
    pub relator: Word,
}

impl BasisChange {
    pub fn compute(pres: &SurfacePresentation) -> Self {
        let nk = pres.normalize_basis(pres.genus());
        let n1 = nk.presentation.normalize_basis(1);
        let to_normalized = nk.to_normalized.then(&n1.to_normalized);
        let conjugator = &n1.to_normalized.apply(&nk.conjugator) * &n1.conjugator;
        BasisChange {
            to_original: to_normalized.inverse(),
            to_normalized,
            conjugator,
            relator: n1.presentation.relator().clone(),
        }
    }

    /// Maps `T` with `x = T R' T^-1` (normalized) to `U` with
    /// `to_original(x) = U R U^-1` (original).
    pub fn original_conjugator(&self, t: &Word) -> Word {
        &self.to_original.apply(t) * &self.to_original.apply(&self.conjugator).inverse()
    }
}

/// The first grading: `R~` over the kernel of the `ak` exponent sum.
#[derive(Clone, Debug)]
pub struct FirstLevel {
    /// Leveled relator before chain elimination, starting at level 0.
    pub raw: LeveledWord,
    pub anchor: i64,
    /// Cyclic core of the chain-eliminated rewrite, starting at level 0.
    pub rewritten: LeveledWord,
    pub m: i64,
    pub shift: i64,
    pub witness_vertex: usize,
}

/// The second grading, computed when `m = 0`.
#[derive(Clone, Debug)]
pub struct SecondLevel {
    /// `R~` shifted to the window at level 0 and read over `X1 ∪ F`.
    pub window_word: Word<WindowKey>,
    /// Conjugator for `window_word` (see [`OneRelatorInstance::conjugator`]).
    pub window_conjugator: Word,
    /// Cyclic core of the `a1` rewrite of `window_word`.
    pub rewritten: Word<SecondSymbol>,
    pub rewritten_conjugator: Word,
    pub p: i64,
    pub shift: i64,
}

/// `G` (or `Σ`) as an HNN extension of the window group with stable letter `ak`.
#[derive(Clone, Debug)]
pub struct HnnData {
    pub stable_letter: Generator,
    pub relator: LeveledWord,
    pub layout: Layout,
    /// Window `[shift, shift + width]` of `M1` copies.
    pub shift: i64,
    pub width: i64,
    pub truncation: (i64, i64),
}

impl HnnData {
    /// Generators of the base `K0`.
    pub fn base(&self) -> Vec<LeveledWord> {
        let (lo, hi) = self.truncation;
        self.layout.window_generators(self.shift, self.width, lo, hi)
    }

    fn narrowed(&self, from: i64) -> Vec<LeveledWord> {
        let (lo, hi) = self.truncation;
        if self.width == 0 {
            self.layout.m2_tilde(lo, hi)
        } else {
            self.layout.window_generators(from, self.width - 1, lo, hi)
        }
    }

    /// `K1 = K0 ∩ ak K0 ak^-1`.
    pub fn associated(&self) -> Vec<LeveledWord> {
        self.narrowed(self.shift + 1)
    }

    /// `ak^-1 K1 ak`.
    pub fn associated_image(&self) -> Vec<LeveledWord> {
        self.narrowed(self.shift)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    /// Extra levels added on each side of every truncated basis.
    pub margin: i64,
}

/// Everything the pipeline computes before the endgame.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub presentation: SurfacePresentation,
    pub pair: CompatiblePair,
    pub basis_change: BasisChange,
    pub first: FirstLevel,
    pub hnn: HnnData,
    pub second: Option<SecondLevel>,
    pub instance: Option<OneRelatorInstance>,
    pub layout: Layout,
}

impl Analysis {
    pub fn normalized(&self) -> SurfacePresentation {
        self.presentation.with_relator(self.basis_change.relator.clone()).expect("normalized relator is valid")
    }

    pub fn m(&self) -> i64 {
        self.first.m
    }

    pub fn p(&self) -> Option<i64> {
        self.second.as_ref().map(|s| s.p)
    }

    /// `x = T R T^-1` in the surface group, `R` the normalized relator.
    pub fn is_relator_conjugate(&self, x: &Word, t: &Word) -> bool {
        let r = &self.basis_change.relator;
        let diff = x * &r.conjugate_by(t).inverse();
        self.presentation.is_trivial_in_surface(&diff)
    }

    /// Checks every recorded rewrite against its conjugator, in normalized
    /// and in original coordinates.
    pub fn check_round_trips(&self) -> bool {
        let ak = Generator::a(self.presentation.genus());
        let first = expand_levels(&self.first.rewritten, &ak);
        // rewritten = c core c^-1 with c a prefix of the eliminated word
        let full = schreier_rewrite(&self.basis_change.relator, self.presentation.genus(), Some(self.first.anchor))
            .expect("normalized");
        let (_, c) = full.cyclic_reduce();
        let t0 = expand_levels(&c, &ak).inverse();
        if !self.is_relator_conjugate(&first, &t0) {
            return false;
        }
        if let Some(s) = &self.second {
            let win = s.window_word.substitute(|k| self.layout.key_surface(*k));
            let hat = s.rewritten.substitute(|g| self.layout.second_surface(g));
            if !self.is_relator_conjugate(&win, &s.window_conjugator)
                || !self.is_relator_conjugate(&hat, &s.rewritten_conjugator)
            {
                return false;
            }
        }
        if let Some(inst) = &self.instance {
            let e = inst.expand(&inst.relator);
            if !self.is_relator_conjugate(&e, &inst.conjugator) {
                return false;
            }
            let bc = &self.basis_change;
            let orig = bc.to_original.apply(&e);
            let u = bc.original_conjugator(&inst.conjugator);
            let r = self.presentation.relator();
            let diff = &orig * &r.conjugate_by(&u).inverse();
            if !self.presentation.is_trivial_in_surface(&diff) {
                return false;
            }
        }
        true
    }
}

fn support_with_margin<S: Symbol>(w: &LeveledWord<S>, margin: i64) -> (i64, i64) {
    let (lo, hi) = level_support(w, |_| true).unwrap_or((0, 0));
    (lo - margin, hi + margin)
}

/// Runs both gradings and, when `m = p = 0`, builds the reduced instance.
pub fn analyze(pres: &SurfacePresentation, pair: &CompatiblePair, opts: Options) -> Result<Analysis> {
    pres.validate(pair)?;
    let genus = pres.genus();
    let ak = Generator::a(genus);
    let basis_change = BasisChange::compute(pres);
    let rn = basis_change.relator.clone();

    // first grading, unshifted
    let raw = level_rewrite(&rn, &ak, 0)?;
    let anchor = chain_anchor(&raw, genus);
    let (core, _) = eliminate_chain(&raw, genus, anchor).reduced().cyclic_reduce();
    if core.is_empty() {
        return Err(Error::DegenerateRelator);
    }
    let layout0 = Layout::new(genus, *pair, anchor);
    let m1_handles = 1..=pair.prefix;
    let (lo, hi) = level_support(&core, |g| m1_handles.contains(&g.handle)).unwrap_or((0, 0));
    let (tlo, thi) = support_with_margin(&core, opts.margin);
    let (m, shift, wit) = minimal_window(&core, lo, hi, |s, t| layout0.window_generators(s, t, tlo, thi))?;
    let first = FirstLevel { raw: raw.clone(), anchor, rewritten: core.clone(), m, shift, witness_vertex: wit.vertex };
    let hnn = HnnData {
        stable_letter: ak,
        relator: core.clone(),
        layout: layout0,
        shift,
        width: m,
        truncation: (tlo, thi),
    };
    let mut analysis = Analysis {
        presentation: pres.clone(),
        pair: *pair,
        basis_change,
        first,
        hnn,
        second: None,
        instance: None,
        layout: layout0,
    };
    if m > 0 {
        return Ok(analysis);
    }

    // shift the window to level 0: conjugate by ak^-shift
    let mut t = Word::power_of(ak, -shift);
    let raw = level_rewrite(&rn, &ak, -shift)?;
    let anchor = chain_anchor(&raw, genus);
    let layout = Layout::new(genus, *pair, anchor);
    let (core, c) = eliminate_chain(&raw, genus, anchor).reduced().cyclic_reduce();
    t = &expand_levels(&c, &ak).inverse() * &t;
    let (wlo, whi) = support_with_margin(&core, opts.margin);
    let keys = layout.window_keys(wlo, whi);
    let key_words: Vec<LeveledWord> = keys.iter().map(|k| layout.key_word(*k)).collect();
    let graph = SubgroupGraph::fold(&key_words);
    let wit = graph.cyclic_loop_witness(&core)?.ok_or(Error::DegenerateRelator)?;
    let expr = wit.expression.map_symbols(|&i| keys[i]);
    let (window_word, d) = expr.cyclic_reduce();
    let key_surface = |k: &WindowKey| layout.key_surface(*k);
    t = &(&d.substitute(key_surface).inverse() * &expand_levels(&wit.conjugator, &ak)) * &t;
    let window_conjugator = t.clone();

    // second grading by a1
    let g1 = layout.second_grading();
    let raw2 = level_rewrite(&window_word, &g1, 0)?;
    let (core2, c2) = raw2.cyclic_reduce();
    if core2.is_empty() {
        return Err(Error::DegenerateRelator);
    }
    t = &c2.substitute(|g| layout.second_surface(g)).inverse() * &t;
    let is_f = |k: &WindowKey| matches!(k, WindowKey::F(_));
    let (flo, fhi) = level_support(&core2, is_f).ok_or(Error::RConjugateIntoFactor(crate::Factor::M1))?;
    let (xlo, xhi) = support_with_margin(&core2, opts.margin);
    let f_bases: Vec<WindowKey> = {
        let mut v: Vec<WindowKey> = core2.symbols().map(|s| s.base).filter(is_f).collect();
        v.sort();
        v.dedup();
        v
    };
    let x_bases: Vec<WindowKey> = layout.m1_generators().into_iter().skip(1).map(WindowKey::X).collect();
    let (p, shift2, _) = minimal_window(&core2, flo, fhi, |s, t| {
        let mut gens = Vec::new();
        for q in xlo..=xhi {
            for x in &x_bases {
                gens.push(Word::single(LeveledSymbol::new(*x, q)));
            }
        }
        for q in s..=s + t {
            for f in &f_bases {
                gens.push(Word::single(LeveledSymbol::new(*f, q)));
            }
        }
        gens
    })?;
    let rewritten_conjugator = t.clone();
    analysis.layout = layout;
    analysis.second = Some(SecondLevel {
        window_word,
        window_conjugator,
        rewritten: core2.clone(),
        rewritten_conjugator,
        p,
        shift: shift2,
    });
    if p > 0 {
        return Ok(analysis);
    }

    let shifted = shift_levels(&core2, -shift2);
    t = &Word::power_of(Generator::a(1), -shift2) * &t;
    let (reduced, c3) = layout.nielsen(&shifted).cyclic_reduce();
    t = &c3.substitute(|s| layout.reduced_surface(s)).inverse() * &t;
    analysis.instance = Some(OneRelatorInstance::build(&layout, &reduced, t));
    Ok(analysis)
}
