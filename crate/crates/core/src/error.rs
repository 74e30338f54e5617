use std::fmt;

use thiserror::Error;

/// Which side of a compatible pair an error refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    M1,
    M2,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::M1 => write!(f, "M1"),
            Factor::M2 => write!(f, "M2"),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid token {0:?}")]
    InvalidToken(String),
    #[error("exponent 0 is not allowed in token {0:?}")]
    ZeroExponent(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(u32),
    #[error("relator uses handle {handle} but the genus is {genus}")]
    HandleOutOfRange { handle: u32, genus: u32 },
    #[error("relator is empty")]
    EmptyRelator,
    #[error("relator is not cyclically reduced")]
    NotCyclicallyReduced,
    #[error("invalid Magnus pair: {0}")]
    InvalidPair(String),
    #[error("relator is conjugate in the surface group into {0}")]
    RConjugateIntoFactor(Factor),
    #[error("word has exponent sum {0} in the grading generator")]
    NonzeroExponent(i64),
    #[error("cyclic loop membership needs a nonempty cyclically reduced word")]
    EmptyWord,
    #[error("relator collapses into the common subgroup after rewriting")]
    DegenerateRelator,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
