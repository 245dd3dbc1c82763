use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid physical constants: {0}")]
    InvalidConstants(String),
    #[error("sample count {found} does not match grid size {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("non-finite value at grid index {index}")]
    NonFinite { index: usize },
    #[error("density below the node threshold everywhere; phase undefined")]
    AllBelowThreshold,
    #[error("negative density {value} at grid index {index}")]
    NegativeDensity { index: usize, value: f64 },
    #[error("state not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },
    #[error("malformed snapshot: {0}")]
    Format(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PropagationError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("time step {dt} violates the stability bound {bound} ({reason})")]
    StabilityViolation { dt: f64, bound: f64, reason: String },
    #[error("stepper for {expected} called with a {found} configuration")]
    WrongModel { expected: &'static str, found: &'static str },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("phase undefined: state is below the node threshold everywhere")]
    PhaseUndefined,
    #[error("analytic oracle does not support the {0} potential")]
    UnsupportedPotential(&'static str),
    #[error("non-finite state at t = {t}")]
    NumericBlowup { t: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrajectoryError {
    #[error("density integrates to zero")]
    ZeroDensity,
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("trajectory left the grid at t = {t} (x = {x})")]
    LeftDomain { t: f64, x: f64 },
    #[error("velocity undefined near a node at t = {t} (x = {x})")]
    NodeEncounter { t: f64, x: f64 },
    #[error("velocity snapshots do not cover t = {t}")]
    OutsideTimeSpan { t: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpticsError {
    #[error("scene has no slits")]
    EmptyScene,
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("grid spacing {dx} too coarse; fringes at z = {z_min} need dx < {limit}")]
    ResolutionViolation { dx: f64, z_min: f64, limit: f64 },
    #[error("only E-polarized fields are supported")]
    UnsupportedPolarization,
    #[error("energy flow stagnates at (x = {x}, z = {z})")]
    StagnationPoint { x: f64, z: f64 },
    #[error("path left the lattice at (x = {x}, z = {z})")]
    LeftDomain { x: f64, z: f64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{}key '{key}': {constraint}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Validation { line: Option<usize>, key: String, constraint: String },
}
