use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("series live on different lattices")]
    LatticeMismatch,

    #[error("lattice matrix is not unimodular (det = {det})")]
    NotUnimodular { det: String },

    #[error("rank {0} not supported (1..=8)")]
    UnsupportedRank(usize),

    #[error("cutoff {0} exceeds the supported maximum 65535")]
    CutoffTooLarge(u64),

    #[error("monomial {0:?} lies outside the standard cone")]
    OutOfCone(Vec<i64>),

    #[error("query at degree {requested} is beyond truncation (cutoff {cutoff})")]
    BeyondTruncation { requested: i64, cutoff: u32 },

    #[error("not invertible in cone-supported ring: constant term is {0}")]
    NotInvertible(String),

    #[error("invalid product factor: {0}")]
    InvalidFactor(String),

    #[error("malformed series record: {0}")]
    Malformed(String),

    #[error("isotropic root: reflection undefined for (v,v) = 0")]
    IsotropicRoot,

    #[error("weight {0} is not in the integral root lattice (requires rho-normalization)")]
    NotInRootLattice(String),

    #[error("support violation: {0}")]
    SupportViolation(String),

    #[error("orbit sum did not terminate within {0} rings")]
    NonTerminating(u64),

    #[error("subgroup {0} is not available on the finite lattice")]
    UnsupportedSubgroup(String),

    #[error("point {point} is within {distance:e} of a pole")]
    PoleProximity { point: String, distance: f64 },

    #[error("evaluation does not converge: {0}")]
    NonConvergent(String),

    #[error("finite-difference step too large for tolerance: estimated error {0:e}")]
    StepTooLarge(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
