//! Magnus subgroups of one-relator surface groups.
//!
//! Given `G = <a1, b1, ..., ak, bk : [a1,b1]...[ak,bk] = R = 1>` and a
//! compatible pair of Magnus subgroups (a prefix and a suffix of the handles),
//! the pipeline decides whether their intersection in `G` is larger than in
//! the surface group, producing exact certificates for every positive claim.

pub mod budget;
pub mod catalog;
pub mod endgame;
pub mod error;
pub mod pipeline;
pub mod stallings;
pub mod surface;
pub mod word;

pub use budget::Budget;
pub use endgame::{decide_exceptional, Certificate, Decision, Verdict};
pub use error::{Error, Factor, Result};
pub use stallings::SubgroupGraph;
pub use surface::{CompatiblePair, MagnusSpec, SurfacePresentation};
pub use word::{Generator, Kind, Letter, Word};
