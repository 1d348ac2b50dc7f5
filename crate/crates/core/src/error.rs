use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be non-empty")]
    Empty,

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian: deviation {deviation:e} exceeds {allowed:e}")]
    NotHermitian { deviation: f64, allowed: f64 },

    #[error("matrix is not positive definite: eigenvalues span [{min_eigenvalue:e}, {max_eigenvalue:e}]")]
    NotPositiveDefinite {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("function is not finite at eigenvalue {eigenvalue:e} (value {value})")]
    Domain { eigenvalue: f64, value: f64 },

    #[error("product dimension {size} exceeds the cap of {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("invalid mean descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("trial with seed {seed} failed: {source}")]
    Trial {
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            e @ Error::Trial { .. } => e,
            e => Error::Trial {
                seed,
                source: Box::new(e),
            },
        }
    }
}
