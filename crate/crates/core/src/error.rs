use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit index {index} out of range 1..={max}")]
    QubitIndexOutOfRange { index: usize, max: usize },

    #[error("singular detuning: delta must be non-zero")]
    SingularDetuning,

    #[error("wrong detuning sign: {0}")]
    WrongDetuningSign(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error(
        "step budget exceeded: {steps} steps reached an estimated error {estimated_error:.3e} > tol {tol:.3e}"
    )]
    BudgetExceeded { steps: usize, estimated_error: f64, tol: f64 },

    #[error("inconsistent parameters, violated conditions: {}", .violated.join(", "))]
    InconsistentParameters { violated: Vec<String> },

    #[error("infeasible hardware setting: {0}")]
    InfeasibleHardware(String),

    #[error("cavity state `{label}` rejected: truncation weight {weight:.3e} exceeds {limit:.1e}")]
    StateRejected { label: String, weight: f64, limit: f64 },

    #[error("probe set is empty")]
    EmptyProbeSet,
}
