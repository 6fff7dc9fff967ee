use thiserror::Error;

/// Errors raised while building inputs or inverting measured statistics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// `cos θ` vanished: full which-path marking leaves no fringe to restore.
    #[error("singular marking: |cos θ| = {cos_theta:e} is below the threshold {threshold:e}")]
    SingularMarking { cos_theta: f64, threshold: f64 },

    /// The analyzer outcomes carry no resolvable path information.
    #[error("singular analyzer: |{which}| = {value:e} is below the threshold {threshold:e}")]
    SingularAnalyzer {
        which: &'static str,
        value: f64,
        threshold: f64,
    },

    /// Negative weights cannot be sampled.
    #[error("cannot sample from a quasi-probability distribution")]
    QuasiInput,

    #[error("invalid sampling request: {0}")]
    InvalidSampling(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
