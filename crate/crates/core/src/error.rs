use thiserror::Error;

/// Errors raised by tensor operations, factorizations and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index {index} out of range (extent {extent})")]
    Index { index: usize, extent: usize },

    #[error("invalid value: {0}")]
    Value(String),

    #[error("invalid rank: {0}")]
    Rank(String),

    #[error("conjugate symmetry violated: imaginary residue {residue:e} vs real norm {norm:e}")]
    Symmetry { residue: f64, norm: f64 },

    #[error("numerical failure in Fourier slice {slice}: {message}")]
    Numerical { slice: usize, message: String },

    #[error("size guard exceeded: {0}")]
    Size(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("tensor file format: {0}")]
    Format(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("image: {0}")]
    Image(#[from] image::ImageError),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
