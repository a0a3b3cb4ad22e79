use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{field} out of range: {detail}")]
    InvalidParam { field: &'static str, detail: String },
    #[error("index out of range: {0}")]
    Index(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("eigensolver failed in sector q={q} (dim {dim}): {detail}")]
    Eigen { q: i32, dim: usize, detail: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("root collision: {0}")]
    Collision(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("not an eigenmode: {0}")]
    NotEigenmode(String),
    #[error("no solution for n={n}: attainable range [{lo}, {hi}]")]
    NoSolution { n: f64, lo: f64, hi: f64 },
    #[error("oracle size guard: two_s={two_s} exceeds {max}")]
    TooLarge { two_s: u32, max: u32 },
    #[error("steady state not found")]
    SteadyStateNotFound,
    #[error("branch tracking failed: {0}")]
    Branch(String),
    #[error("{0}")]
    Io(String),
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
