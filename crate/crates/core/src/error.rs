use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid interval: a = {a} exceeds b = {b}")]
    InvalidInterval { a: f64, b: f64 },

    #[error("quadrature order {order} exceeds the supported cap {cap}")]
    UnsupportedOrder { order: usize, cap: usize },

    #[error("degenerate element: area {area:e}")]
    DegenerateElement { area: f64 },

    #[error("domain validation failed: {invariant} (witness at x = {x}, y = {y})")]
    Validation { invariant: String, x: f64, y: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precision loss: {0}")]
    Precision(String),

    #[error("empty interior: n = {n} is below the first admissible index {n_min}")]
    EmptyInterior { n: u32, n_min: u32 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("point at distance {distance} from the boundary is outside the collar of radius {radius}")]
    NotInCollar { distance: f64, radius: f64 },

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("requested {k} eigenvalues of a problem of size {n}")]
    Size { k: usize, n: usize },

    #[error("matrix not positive definite: Cholesky pivot {pivot} is {value:e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("problem size {n} exceeds the dense cap {cap}; use a coarser mesh (larger h)")]
    SizeCap { n: usize, cap: usize },

    #[error("matrix pair is not symmetric: entry ({i}, {j}) differs by {diff:e}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },

    #[error("eigenpair {index} failed certification: residual {residual:e}")]
    Certification { index: usize, residual: f64 },

    #[error("weight is not positive at x = {x} (value {value:e})")]
    Weight { x: f64, value: f64 },

    #[error("no sign change of the boundary defect in [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("degenerate domain: {0}")]
    Degenerate(String),

    #[error("invalid mesh: {0}")]
    Mesh(String),

    #[error("truncation loop did not converge by n = {last_n}")]
    NonConvergence {
        last_n: u32,
        record: Box<crate::solver2d::ConvergenceRecord>,
    },

    #[error("invalid domain file: {0}")]
    Parse(String),
}
