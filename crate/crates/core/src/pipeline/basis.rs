use std::fmt;

use super::leveled::{at_level, expand_levels, level_rewrite, LeveledSymbol, LeveledWord};
use crate::stallings::SubgroupGraph;
use crate::surface::CompatiblePair;
use crate::word::{Generator, Symbol, Word};

/// Basis element of the complement `F` of `M0` in `M~2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FKey {
    /// `y_n` for a suffix-side generator `y` below handle `k`.
    Handle(LeveledSymbol<Generator>),
    /// `delta_n`
    Delta(i64),
    /// `(b_k)_anchor`
    Chain(LeveledSymbol<Generator>),
}

impl fmt::Display for FKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FKey::Handle(s) | FKey::Chain(s) => write!(f, "{}@{}", s.base, s.level),
            FKey::Delta(n) => write!(f, "d@{n}"),
        }
    }
}

/// Free basis symbol of the window `(M1)_0 * F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WindowKey {
    X(Generator),
    F(FKey),
}

impl fmt::Display for WindowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowKey::X(g) => write!(f, "{g}"),
            WindowKey::F(k) => write!(f, "F{{{k}}}"),
        }
    }
}

pub type SecondSymbol = LeveledSymbol<WindowKey>;

/// Symbols of the reduced instance: the second-level alphabet with
/// `(b1)_0` Nielsen-replaced by `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReducedSymbol {
    Delta,
    Graded(SecondSymbol),
}

impl fmt::Display for ReducedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReducedSymbol::Delta => write!(f, "d"),
            ReducedSymbol::Graded(s) => write!(f, "{s}"),
        }
    }
}

/// Index bookkeeping for one compatible pair in one genus, with the chain
/// anchor level fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub genus: u32,
    pub pair: CompatiblePair,
    pub anchor: i64,
}

fn gens(handles: impl Iterator<Item = u32>) -> Vec<Generator> {
    handles.flat_map(|h| [Generator::a(h), Generator::b(h)]).collect()
}

impl Layout {
    pub fn new(genus: u32, pair: CompatiblePair, anchor: i64) -> Self {
        Layout { genus, pair, anchor }
    }

    pub fn first_grading(&self) -> Generator {
        Generator::a(self.genus)
    }

    pub fn second_grading(&self) -> WindowKey {
        WindowKey::X(Generator::a(1))
    }

    pub fn m1_generators(&self) -> Vec<Generator> {
        gens(1..=self.pair.prefix)
    }

    /// Suffix-side generators below handle `k`.
    fn suffix_lower(&self) -> Vec<Generator> {
        gens(self.pair.suffix..self.genus)
    }

    fn is_overlap(&self, g: Generator) -> bool {
        self.pair.overlap().contains(&g.handle)
    }

    pub fn delta(&self, level: i64) -> LeveledWord {
        at_level(&self.pair.delta(), level)
    }

    pub fn chain(&self) -> LeveledWord {
        Word::single(LeveledSymbol::new(Generator::b(self.genus), self.anchor))
    }

    pub fn fkey_word(&self, key: FKey) -> LeveledWord {
        match key {
            FKey::Handle(s) | FKey::Chain(s) => Word::single(s),
            FKey::Delta(n) => self.delta(n),
        }
    }

    pub fn key_word(&self, key: WindowKey) -> LeveledWord {
        match key {
            WindowKey::X(g) => Word::single(LeveledSymbol::new(g, 0)),
            WindowKey::F(f) => self.fkey_word(f),
        }
    }

    pub fn key_surface(&self, key: WindowKey) -> Word {
        expand_levels(&self.key_word(key), &self.first_grading())
    }

    /// `M~2` truncated to levels `lo..=hi`: `y_n`, `delta_n` and the chain symbol.
    pub fn m2_tilde(&self, lo: i64, hi: i64) -> Vec<LeveledWord> {
        let mut out = Vec::new();
        for n in lo..=hi {
            for g in self.suffix_lower() {
                out.push(Word::single(LeveledSymbol::new(g, n)));
            }
            out.push(self.delta(n));
        }
        out.push(self.chain());
        out
    }

    /// Level-0 basis of `M0 = M1 ∩ M2` inside `M~2`.
    pub fn m0(&self) -> Vec<LeveledWord> {
        let mut out: Vec<LeveledWord> = gens(self.pair.overlap())
            .into_iter()
            .map(|g| Word::single(LeveledSymbol::new(g, 0)))
            .collect();
        out.push(self.delta(0));
        out
    }

    pub fn f_keys(&self, lo: i64, hi: i64) -> Vec<FKey> {
        let mut out = Vec::new();
        for n in lo..=hi {
            for g in self.suffix_lower() {
                if n != 0 || !self.is_overlap(g) {
                    out.push(FKey::Handle(LeveledSymbol::new(g, n)));
                }
            }
            if n != 0 {
                out.push(FKey::Delta(n));
            }
        }
        out.push(FKey::Chain(LeveledSymbol::new(Generator::b(self.genus), self.anchor)));
        out
    }

    /// Free basis `X1 ∪ F` of the width-0 window at level 0.
    pub fn window_keys(&self, lo: i64, hi: i64) -> Vec<WindowKey> {
        let mut out: Vec<WindowKey> = self.m1_generators().into_iter().map(WindowKey::X).collect();
        out.extend(self.f_keys(lo, hi).into_iter().map(WindowKey::F));
        out
    }

    /// Generators of `<(M1)_s, ..., (M1)_{s+t}, M~2>` with `M~2` truncated to `lo..=hi`.
    pub fn window_generators(&self, s: i64, t: i64, lo: i64, hi: i64) -> Vec<LeveledWord> {
        let mut out = Vec::new();
        for n in s..=s + t {
            for g in self.m1_generators() {
                out.push(Word::single(LeveledSymbol::new(g, n)));
            }
        }
        out.extend(self.m2_tilde(lo, hi));
        out
    }

    /// `delta` over the second-level alphabet:
    /// `(b1)_{-1}^-1 (b1)_0 [a2,b2]_0 ... [a_{i-1},b_{i-1}]_0`.
    pub fn delta_hat(&self) -> Word<SecondSymbol> {
        let d = self.pair.delta().map_symbols(|g| WindowKey::X(*g));
        level_rewrite(&d, &self.second_grading(), 0).expect("delta has zero exponent sum")
    }

    /// Image of `(b1)_0` under the Nielsen move that puts `delta` in the basis.
    pub fn b1_zero_image(&self) -> Word<ReducedSymbol> {
        let b1 = |q| ReducedSymbol::Graded(LeveledSymbol::new(WindowKey::X(Generator::b(1)), q));
        let rest = Word::commutator_chain(2, self.pair.suffix - 1)
            .map_symbols(|g| ReducedSymbol::Graded(LeveledSymbol::new(WindowKey::X(*g), 0)));
        Word::single(b1(-1)).concat(&Word::single(ReducedSymbol::Delta)).concat(&rest.inverse())
    }

    pub fn nielsen(&self, w: &Word<SecondSymbol>) -> Word<ReducedSymbol> {
        let b10 = LeveledSymbol::new(WindowKey::X(Generator::b(1)), 0);
        let img = self.b1_zero_image();
        w.substitute(|s| if *s == b10 { img.clone() } else { Word::single(ReducedSymbol::Graded(*s)) })
    }

    /// Inverse of [`nielsen`](Self::nielsen).
    pub fn denielsen(&self, w: &Word<ReducedSymbol>) -> Word<SecondSymbol> {
        let d = self.delta_hat();
        w.substitute(|s| match s {
            ReducedSymbol::Delta => d.clone(),
            ReducedSymbol::Graded(g) => Word::single(*g),
        })
    }

    pub fn second_surface(&self, s: &SecondSymbol) -> Word {
        let t = Word::single(Generator::a(1)).pow(s.level);
        self.key_surface(s.base).conjugate_by(&t)
    }

    pub fn reduced_surface(&self, s: &ReducedSymbol) -> Word {
        match s {
            ReducedSymbol::Delta => self.pair.delta(),
            ReducedSymbol::Graded(g) => self.second_surface(g),
        }
    }

    fn x_at(&self, g: Generator, q: i64) -> SecondSymbol {
        LeveledSymbol::new(WindowKey::X(g), q)
    }

    /// `M~1` (kernel of the `a1` exponent sum on `M1`) truncated to `lo..=hi`,
    /// after the Nielsen move.
    pub fn m1_tilde(&self, lo: i64, hi: i64) -> Vec<Word<SecondSymbol>> {
        let mut out = Vec::new();
        for q in lo..=hi {
            if q != 0 {
                out.push(Word::single(self.x_at(Generator::b(1), q)));
            }
        }
        out.push(self.delta_hat());
        for q in lo..=hi {
            for g in gens(2..=self.pair.prefix) {
                out.push(Word::single(self.x_at(g, q)));
            }
        }
        out
    }

    /// `M0` in the reduced alphabet: `delta` and the level-0 overlap generators.
    pub fn m0_hat(&self) -> Vec<ReducedSymbol> {
        let mut out = vec![ReducedSymbol::Delta];
        for g in gens(self.pair.overlap()) {
            out.push(ReducedSymbol::Graded(self.x_at(g, 0)));
        }
        out
    }

    /// Whether a reduced symbol belongs to the basis of `M0`, the complement
    /// `L` of `M0` in `M~1`, or the level-0 copy of `F`.
    pub fn classify(&self, s: &ReducedSymbol) -> Role {
        match s {
            ReducedSymbol::Delta => Role::M0,
            ReducedSymbol::Graded(g) => match g.base {
                WindowKey::F(_) => Role::B1,
                WindowKey::X(x) if g.level == 0 && self.is_overlap(x) => Role::M0,
                WindowKey::X(_) => Role::B2,
            },
        }
    }

    pub fn l_symbols(&self, lo: i64, hi: i64) -> Vec<ReducedSymbol> {
        let mut out = Vec::new();
        for q in lo..=hi {
            if q != 0 {
                out.push(ReducedSymbol::Graded(self.x_at(Generator::b(1), q)));
            }
            for g in gens(2..=self.pair.prefix) {
                if q != 0 || !self.is_overlap(g) {
                    out.push(ReducedSymbol::Graded(self.x_at(g, q)));
                }
            }
        }
        out
    }

    pub fn graded_basis(&self, lo: i64, hi: i64) -> GradedBasis {
        let f = self.f_keys(lo, hi);
        GradedBasis {
            m2_tilde: self.m2_tilde(lo, hi),
            m0: self.m0(),
            f_words: f.iter().map(|k| self.fkey_word(*k)).collect(),
            f,
            m1_tilde: self.m1_tilde(lo, hi),
            m0_hat: self.m0_hat().iter().map(|s| self.denielsen(&Word::single(*s))).collect(),
            l: self.l_symbols(lo, hi).iter().map(|s| self.denielsen(&Word::single(*s))).collect(),
        }
    }
}

/// Which part of the instance's generating set a symbol belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    M0,
    /// complement of `M0` on the suffix side
    B1,
    /// complement of `M0` on the prefix side
    B2,
}

/// The canonical bases of the two gradings, truncated to a level window.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub m2_tilde: Vec<LeveledWord>,
    pub m0: Vec<LeveledWord>,
    pub f: Vec<FKey>,
    pub f_words: Vec<LeveledWord>,
    pub m1_tilde: Vec<Word<SecondSymbol>>,
    pub m0_hat: Vec<Word<SecondSymbol>>,
    pub l: Vec<Word<SecondSymbol>>,
}

fn is_free_basis<S: Symbol>(ws: &[Word<S>]) -> bool {
    SubgroupGraph::fold(ws).rank() == ws.len()
}

fn union<S: Symbol>(a: &[Word<S>], b: &[Word<S>]) -> Vec<Word<S>> {
    a.iter().chain(b).cloned().collect()
}

impl GradedBasis {
    /// Every family is a free basis, `M0 ∪ F` spans `M~2` and `M0 ∪ L` spans `M~1`.
    pub fn is_valid(&self) -> bool {
        let m0f = union(&self.m0, &self.f_words);
        let m0l = union(&self.m0_hat, &self.l);
        is_free_basis(&self.m2_tilde)
            && is_free_basis(&m0f)
            && SubgroupGraph::fold(&m0f).same_subgroup(&SubgroupGraph::fold(&self.m2_tilde))
            && is_free_basis(&self.m1_tilde)
            && is_free_basis(&m0l)
            && SubgroupGraph::fold(&m0l).same_subgroup(&SubgroupGraph::fold(&self.m1_tilde))
    }
}
