use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has {size} vertices, above the configured maximum of {max}")]
    TooLarge { size: usize, max: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid placement: {0}")]
    InvalidPlacement(String),
    #[error("count {count} exceeds the {available} available placements")]
    CountExceedsPlacements { count: u64, available: f64 },
    #[error("need at least {needed} vertices, have {available}")]
    TooFewVertices { needed: usize, available: usize },
    #[error("stub sums do not match atom counts: {0}")]
    StubSumMismatch(String),
    #[error("degree sum mismatch: expected {expected}, found {found}")]
    DegreeSumMismatch { expected: u64, found: u64 },
    #[error("no positive lambda satisfies E = {edges} with minimum {minimum}")]
    InfeasibleLambda { edges: f64, minimum: f64 },
    #[error("configuration does not cover the graph")]
    NotACover,
    #[error("infeasible specification: {0}")]
    Infeasible(String),
    #[error("rejection cap exceeded after {attempts} attempts (acceptance rate {rate:.3e})")]
    RejectionCap { attempts: u64, rate: f64 },
    #[error("oracle guard rail exceeded: {0}")]
    GuardRail(String),
    #[error("model variant {0} does not apply here")]
    VariantNotApplicable(String),
    #[error("motif outside the prior universe: {0}")]
    OutsideUniverse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
