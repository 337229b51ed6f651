use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh request: {0}")]
    Mesh(String),

    #[error("field was built on mesh version {found}, expected version {expected}")]
    VersionMismatch { expected: u64, found: u64 },

    #[error("field length {found} does not match node count {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("time step {dt} violates dt < epsilon^2/beta = {limit}")]
    TimeStepTooLarge { dt: f64, limit: f64 },

    #[error("conjugate gradient did not converge after {iterations} iterations (relative residual {residual:e})")]
    PcgDiverged { iterations: usize, residual: f64 },

    #[error("projected SOR did not converge after {sweeps} sweeps (last max update {delta:e})")]
    SorDiverged { sweeps: usize, delta: f64 },

    #[error("variational inequality residual {residual:e} exceeds {limit:e} at step {step}")]
    ViResidual { step: usize, residual: f64, limit: f64 },

    #[error("maximum principle violated at step {step}: node {node} has u = {value} outside [{lower}, {upper}]")]
    MaxPrinciple {
        step: usize,
        node: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("zone size targets not reached after {rounds} refinement rounds")]
    RefinementStalled { rounds: usize },

    #[error("invalid parameter `{key}`: {reason}")]
    Param { key: String, reason: String },

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("sample count mismatch: {simulated} simulated vs {oracle} oracle samples")]
    SampleCount { simulated: usize, oracle: usize },

    #[error("missing required keys: {}", .0.join(", "))]
    MissingKeys(Vec<String>),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
