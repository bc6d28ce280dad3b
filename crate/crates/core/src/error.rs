use thiserror::Error;

use crate::demand::DemandId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which structural degree claim of the layer/column split failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    /// Layer subproblems carry demand degree at most `q`.
    Layer,
    /// Column subproblems carry demand degree at most `2q`.
    Column,
}

impl std::fmt::Display for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Claim::Layer => write!(f, "layer degree <= q"),
            Claim::Column => write!(f, "column degree <= 2q"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: t = {t}, n = {n} (need t >= 2, n >= 1)")]
    InvalidGrid { t: usize, n: usize },
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("vertex has {got} coordinates, grid has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {value} out of range for side length {t}")]
    CoordinateOutOfRange { value: usize, t: usize },
    #[error("vertex rank {0} out of range")]
    VertexOutOfRange(usize),
    #[error("demand {0} joins a vertex to itself")]
    SelfDemand(DemandId),
    #[error("demand id {0} appears more than once")]
    DuplicateDemandId(DemandId),
    #[error("no even degree budget q with max(2, {delta}) <= q <= floor({t}/6) - 1")]
    InfeasibleBudget { t: usize, delta: usize },
    #[error("demand degree {degree} exceeds budget q = {q}")]
    BudgetExceeded { degree: usize, q: usize },
    #[error("layer index {k} out of range for side length {t}")]
    LayerOutOfRange { k: usize, t: usize },
    #[error("demand {0} is not cross-column")]
    NotCrossColumn(DemandId),
    #[error("degree {degree} exceeds regularization target {target}")]
    DegreeExceedsTarget { degree: usize, target: usize },
    #[error("vertex {vertex} has odd degree {degree}")]
    OddDegree { vertex: usize, degree: usize },
    #[error("multigraph is not {0}-regular")]
    NotRegular(usize),
    #[error("multigraph is not bipartite")]
    NotBipartite,
    #[error("expected {expected} two-factors, got {got}")]
    WrongFactorCount { expected: usize, got: usize },
    #[error("claim violated ({claim}): degree {degree} > {bound}")]
    ClaimViolation {
        claim: Claim,
        degree: usize,
        bound: usize,
    },
    #[error("base solver exhausted on K_{t} with {demands} demands")]
    BaseSolverExhausted { t: usize, demands: usize },
    #[error("trail pieces do not chain: {0}")]
    EndpointMismatch(String),
    #[error("instance too large for exhaustive search: {0}")]
    SizeLimit(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid generator request: {0}")]
    Generator(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}
