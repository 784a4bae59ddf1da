use thiserror::Error;

use crate::root_system::Basis;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("illegal ADE type {kind}{rank}")]
    IllegalType { kind: char, rank: i64 },

    #[error("rank {rank} exceeds the configured cap {cap} for type {kind}")]
    RankTooLarge { kind: char, rank: usize, cap: usize },

    #[error("cannot parse ADE type {0:?}")]
    ParseType(String),

    #[error("vector of length {found} does not match rank {rank}")]
    BasisMismatch { rank: usize, found: usize },

    #[error("{0:?} does not lie in the root lattice")]
    NotInRootLattice(Vec<i64>),

    #[error("{0:?} is not a root")]
    NotARoot(Vec<i64>),

    #[error("roots are linearly dependent")]
    DependentRoots,

    #[error("simple index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("basis {expected:?} required, found {found:?}")]
    WrongBasis { expected: Basis, found: Basis },

    #[error("minimal dominant weight above {lambda:?} is not unique: {minimal:?}")]
    NonUniqueMinimal {
        lambda: Vec<i64>,
        minimal: Vec<Vec<i64>>,
    },

    #[error("enumeration needs {needed} items, cap is {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },

    #[error("elements belong to different root systems")]
    SystemMismatch,

    #[error("Chevalley construction failed: {0}")]
    ConstructionFailure(String),

    #[error("curvature expansion left a term outside the half: {0}")]
    CancellationFailure(String),

    #[error("oracle has no verdict for root {0:?}")]
    IncompleteOracle(Vec<i64>),

    #[error("divisor {0:?} is not the class of a root")]
    NotARootClass(Vec<i64>),

    #[error("divisor {0:?} is not effective")]
    NotEffective(Vec<i64>),

    #[error("intersection matrix is singular")]
    SingularSystem,
}
