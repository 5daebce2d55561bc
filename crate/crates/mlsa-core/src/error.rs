//! Error type shared across the crate.

use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by constructors, numerical kernels and planners.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A probability argument fell outside the open interval (0, 1).
    InvalidProbability(f64),
    /// A constructor argument violated a type invariant.
    InvalidParameter(&'static str),
    /// Log-log regression input was degenerate (fewer than two points,
    /// repeated abscissae, or non-positive coordinates).
    DegenerateFit(&'static str),
    /// The log-branch refinement threshold is undefined at this
    /// (echelon, level, rank) because the logarithm argument is ≤ 1.
    ThresholdUndefined {
        /// Refinement echelon k at which the threshold was requested.
        echelon: u32,
        /// Level ℓ of the estimate being refined.
        level: u32,
        /// Recursion rank n.
        rank: u64,
    },
    /// The model does not support exact loss simulation.
    ExactSimulationUnavailable,
    /// Level planning requires the coarsest bias h₀ to exceed the accuracy.
    AccuracyTooCoarse {
        /// Coarsest bias parameter h₀ of the ladder.
        h0: f64,
        /// Prescribed accuracy ε.
        epsilon: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidProbability(p) => {
                write!(f, "probability {p} outside the open interval (0, 1)")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::DegenerateFit(what) => write!(f, "degenerate regression input: {what}"),
            Error::ThresholdUndefined { echelon, level, rank } => write!(
                f,
                "refinement threshold undefined at echelon {echelon}, level {level}, rank {rank}: \
                 log argument not greater than 1 (check step schedule, h0 and theta)"
            ),
            Error::ExactSimulationUnavailable => {
                write!(f, "model does not support exact loss simulation")
            }
            Error::AccuracyTooCoarse { h0, epsilon } => write!(
                f,
                "level planning requires h0 > epsilon, got h0 = {h0} and epsilon = {epsilon}"
            ),
        }
    }
}

impl core::error::Error for Error {}
