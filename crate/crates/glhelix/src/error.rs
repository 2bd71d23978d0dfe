use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("Newton iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("singular linear system in {0}")]
    SingularSystem(&'static str),
    #[error("fit window holds {0} nodes, need at least 8")]
    WindowTooSmall(usize),
    #[error("vortex center {0} lies outside the grid interior")]
    CenterOutsideGrid(usize),
    #[error("grid spacing {0} too coarse for finite-difference operators (need h <= 0.5)")]
    GridTooCoarse(f64),
    #[error("evaluation point within {0} of a vortex center")]
    PointAtVortexCenter(f64),
    #[error("region {0} holds no grid nodes")]
    RegionEmpty(&'static str),
    #[error("sampling circle of radius {0} leaves the grid")]
    CircleOutsideGrid(f64),
    #[error("reflected point {0} leaves the grid")]
    ReflectionOutsideGrid(String),
    #[error("quadrature needs at least 64 angular points, got {0}")]
    QuadratureUnderresolved(usize),
    #[error("no sign change of the reduced equation on [{0}, {1}]")]
    NoSignChange(f64, f64),
    #[error("energy has no interior minimum for k={0} without a central vortex")]
    NoInteriorMinimum(usize),
    #[error("gradient flow diverged: minimum pair distance {0} below 1e-6")]
    Divergence(f64),
    #[error("probe (r={0}, s={1}) maps outside the grid")]
    ProbeOutsideGrid(f64, f64),
    #[error("config parse error at line {line}: {msg}")]
    ConfigParse { line: usize, msg: String },
    #[error("validation failure: {0}")]
    ValidationFailure(String),
    #[error("io failure: {0}")]
    IoFailure(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
