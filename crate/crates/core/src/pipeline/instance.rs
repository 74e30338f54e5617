use std::fmt;

use super::basis::{Layout, ReducedSymbol, Role, WindowKey};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceGenerator {
    pub name: String,
    pub role: Role,
    pub symbol: ReducedSymbol,
    /// The generator as a surface word in normalized coordinates.
    pub expansion: Word,
}

/// `(M0 * <B1> * <B2>) / <<relator>>`, with surface expansions of every generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneRelatorInstance {
    pub generators: Vec<InstanceGenerator>,
    /// Indices into `generators`; cyclically reduced.
    pub relator: Word<usize>,
    /// `T` with `expand(relator) = T R T^-1` in the surface group, `R` the
    /// normalized relator.
    pub conjugator: Word,
}

fn name_of(s: &ReducedSymbol, role: Role) -> String {
    match (s, role) {
        (ReducedSymbol::Delta, _) => "d".to_string(),
        (ReducedSymbol::Graded(g), Role::M0) => g.base.to_string(),
        (ReducedSymbol::Graded(g), Role::B1) => g.base.to_string(),
        (ReducedSymbol::Graded(g), Role::B2) => match g.base {
            WindowKey::X(x) => format!("L{{{x}@{}}}", g.level),
            WindowKey::F(_) => g.to_string(),
        },
    }
}

impl OneRelatorInstance {
    pub(super) fn build(layout: &Layout, relator: &Word<ReducedSymbol>, conjugator: Word) -> Self {
        let mut syms: Vec<ReducedSymbol> = layout.m0_hat();
        let mut rest: Vec<ReducedSymbol> = relator
            .symbols()
            .filter(|s| layout.classify(s) != Role::M0)
            .copied()
            .collect();
        rest.sort_by_key(|s| (layout.classify(s), *s));
        rest.dedup();
        syms.extend(rest);
        let generators: Vec<InstanceGenerator> = syms
            .iter()
            .map(|s| {
                let role = layout.classify(s);
                InstanceGenerator { name: name_of(s, role), role, symbol: *s, expansion: layout.reduced_surface(s) }
            })
            .collect();
        let relator = relator.map_symbols(|s| syms.iter().position(|t| t == s).expect("listed symbol"));
        OneRelatorInstance { generators, relator, conjugator }
    }

    fn indices(&self, roles: &[Role]) -> Vec<usize> {
        (0..self.generators.len()).filter(|&i| roles.contains(&self.generators[i].role)).collect()
    }

    pub fn m0(&self) -> Vec<usize> {
        self.indices(&[Role::M0])
    }

    /// Suffix side: `M0 ∪ B1`.
    pub fn magnus_y(&self) -> Vec<usize> {
        self.indices(&[Role::M0, Role::B1])
    }

    /// Prefix side: `M0 ∪ B2`.
    pub fn magnus_z(&self) -> Vec<usize> {
        self.indices(&[Role::M0, Role::B2])
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn expand(&self, w: &Word<usize>) -> Word {
        w.substitute(|&i| self.generators[i].expansion.clone())
    }

    /// A word over the generators with names substituted.
    pub fn render(&self, w: &Word<usize>) -> String {
        w.map_symbols(|&i| Named(self.generators[i].name.clone())).to_string()
    }

    pub fn relator_string(&self) -> String {
        self.render(&self.relator)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Named(String);

impl fmt::Display for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
