use thiserror::Error;

use crate::network::{StateVector, TransitionVector};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Infer(#[from] InferError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("transition vector is zero")]
    ZeroTransition,
    #[error("reaction source equals target {0}")]
    SourceEqualsTarget(String),
    #[error("rate constant must be positive and finite, got {0}")]
    NonPositiveRate(String),
    #[error("duplicate reaction {from} -> {to}")]
    DuplicateReaction { from: String, to: String },
    #[error("state space has {count} states, above the cap of {cap}")]
    EnumerationTooLarge { count: String, cap: u64 },
    #[error("conservation weights must be strictly positive, got {0}")]
    NonPositiveWeight(String),
    #[error("dimension must be at least 1")]
    ZeroDimension,
}

/// A malformed input file, pointing at the offending line (1-based; 0 for the whole file).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("reaction system has no reactions")]
    EmptySystem,
    #[error("end time must be positive and finite, got {0}")]
    InvalidHorizon(f64),
    #[error("trajectory exceeded the jump cap of {cap}")]
    JumpCapExceeded { cap: u64 },
    #[error("ensemble is empty")]
    EmptyEnsemble,
    #[error("time {t} lies outside the simulated horizon {horizon}")]
    OutsideHorizon { t: f64, horizon: f64 },
    #[error("malformed trajectory: {0}")]
    MalformedTrajectory(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InferError {
    #[error("rates along {z} are not mass-action realizable: coefficient {coefficient} at state {state}")]
    NonRealizable { z: TransitionVector, state: StateVector, coefficient: f64 },
    #[error("reaction {state} -> {state} + {z} would leave the non-negative lattice")]
    InvalidProduct { z: TransitionVector, state: StateVector },
    #[error("missing rate for transition {z} at state {state}")]
    MissingRate { z: TransitionVector, state: StateVector },
    #[error("singular interpolation matrix{}: {detail}", for_transition(.z))]
    SingularMatrix { z: String, detail: String },
    #[error("expected {expected} states{}, found {found}", for_transition(.z))]
    WrongCount { z: String, expected: String, found: usize },
    #[error("negative coefficient {coefficient} for transition {z} at basis state {state}")]
    NegativeCoefficient { z: TransitionVector, state: StateVector, coefficient: f64 },
    #[error("vector {v} is not a conservation law of the system (fails on {z})")]
    UnverifiedConservation { v: String, z: TransitionVector },
    #[error("rate must be non-negative, got {rate} for transition {z} at state {state}")]
    NegativeRate { z: TransitionVector, state: StateVector, rate: String },
    #[error("duplicate rate entry for transition {z} at state {state}")]
    DuplicateRate { z: TransitionVector, state: StateVector },
    #[error("witness construction failed verification: {0}")]
    WitnessCheckFailed(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimateError {
    #[error("states visited fewer than {min_visits} times: {}", list_states(.states))]
    InsufficientVisits { states: Vec<StateVector>, min_visits: u64 },
    #[error("alpha must lie in (0, 1), got {0}")]
    AlphaOutOfRange(f64),
    #[error("no variance available for transition {z} at state {state}")]
    MissingVariance { z: TransitionVector, state: StateVector },
    #[error("malformed trajectory: {0}")]
    MalformedTrajectory(String),
    #[error("state set is empty")]
    EmptyStateSet,
}

fn list_states(states: &[StateVector]) -> String {
    states.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

fn for_transition(z: &str) -> String {
    if z.is_empty() {
        String::new()
    } else {
        format!(" for transition {z}")
    }
}
