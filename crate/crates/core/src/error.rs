use thiserror::Error;

use crate::piclattice::BlowupId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("Hirzebruch index must be non-negative, got {0}")]
    NegativeHirzebruchIndex(i64),

    #[error("unknown torus-fixed point `{0}`")]
    UnknownCenter(String),

    #[error("unknown blow-up id {0}")]
    UnknownBlowup(BlowupId),

    #[error("class has {found} coordinates but the Picard rank is {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    /// h1 came out negative; the cohomology oracle is inconsistent.
    #[error("cohomology consistency failure for class {class:?}: h0={h0} h2={h2} chi={chi}")]
    Inconsistent {
        class: Vec<i64>,
        h0: u64,
        h2: u64,
        chi: i64,
    },

    #[error("surface mismatch: {0}")]
    SurfaceMismatch(String),

    #[error("augmentation position {position} out of range 1..={len}")]
    PositionOutOfRange { position: usize, len: usize },

    #[error("negative extension dimension {0}")]
    NegativeExtDimension(i64),

    #[error("negative multiplicity at index {0}")]
    NegativeMultiplicity(usize),

    /// The dimension of an Ext^1 group needed by the recursion is not pinned
    /// by the vanishing rules available at the dimension level.
    #[error(
        "undetermined boundary rank: Ext^1 between object {object} (after {steps} steps) and member {target} is not fixed by dimensions"
    )]
    UndeterminedBoundaryRank {
        object: usize,
        target: usize,
        steps: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("negative Hom dimension {value} at ({row}, {col})")]
    NegativeHom { row: usize, col: usize, value: i64 },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("search space of {plans} plans exceeds the bound {bound}")]
    SearchSpaceExceeded { plans: u128, bound: usize },
}
