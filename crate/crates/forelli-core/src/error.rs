use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite component in {0}")]
    NonFinite(&'static str),

    #[error("Fourier index {index} outside alias-safe band |m| < {half_n}")]
    IndexOutOfBand { index: i64, half_n: usize },

    #[error("linear system ill-conditioned (cond = {cond:.3e}); {hint}")]
    IllConditioned { cond: f64, hint: String },

    #[error("usage error: {0}")]
    Usage(String),
}
