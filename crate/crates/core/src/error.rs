use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("unsupported dimension {0}: expected a power of two no larger than 16")]
    UnsupportedDimension(usize),

    #[error("tensor product of dimension {0} exceeds the 16x16 limit")]
    DimensionOverflow(usize),

    #[error("expected a {expected}x{expected} matrix, got {found}x{found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid X state: {0}")]
    InvalidXState(String),

    #[error("Bloch parameters outside the physical X-state region: {0}")]
    UnphysicalBloch(String),

    #[error("parameter {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("probabilities do not form a normalized distribution (sum {sum})")]
    NotNormalized { sum: f64 },

    #[error("measurement outcome has vanishing probability ({prob:.3e}); conditional state undefined")]
    ZeroProbability { prob: f64 },

    #[error("optimizer did not converge within {iterations} iterations (spread {spread:.3e})")]
    NonConvergence { iterations: usize, spread: f64 },
}
