use alloc::string::String;

use crate::Weight;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid Lie type: {0}")]
    InvalidType(String),

    #[error("weight has {got} labels but the root system has rank {expected}")]
    RankMismatch { expected: usize, got: usize },

    #[error("generator index {index} out of range 0..={rank}")]
    BadGenerator { index: usize, rank: usize },

    #[error("face index must be a non-empty subset of 0..={rank}")]
    BadFace { rank: usize },

    #[error("weight {0} is not dominant")]
    NotDominant(Weight),

    #[error("label {label} is outside the level-{level} alcove")]
    OutsideAlcove { label: Weight, level: u32 },

    #[error("Weyl denominator vanishes at the evaluation point")]
    SingularPoint,

    #[error("Weyl group of order {0} is too large to enumerate")]
    GroupTooLarge(u128),

    #[error("weight {0} lies on a wall of its alcove; its orbit is not free")]
    WallOrbit(Weight),

    #[error("chain is not a cycle: its boundary has {terms} non-zero terms")]
    NotACycle { terms: usize },

    #[error("cluster {cluster} is not a cycle on its own; targets are not separated from the chain")]
    ClustersNotSeparated { cluster: usize },

    #[error("vector is not anti-invariant under the shifted Weyl group at weight {0}")]
    NotAntiInvariant(Weight),

    #[error("weight {weight} lies outside the window of length {length}")]
    OutsideWindow { weight: Weight, length: usize },

    #[error("vector does not follow its declared orbit pattern at weight {0}")]
    PatternMismatch(Weight),

    #[error("resource limit exceeded: {what} (needed {needed}, limit {limit})")]
    Resource { what: &'static str, needed: usize, limit: usize },

    #[error("reduction left a residual term at weight {0}")]
    Stalled(Weight),

    #[error("parse error: {0}")]
    Parse(String),
}
