use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain parameter: {0}")]
    Domain(String),

    #[error("shape mismatch: expected {expected} values, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("singular shifted system ({0})")]
    Singular(String),

    #[error("non-finite value in {stage} at t = {t}")]
    NonFinite { stage: &'static str, t: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),

    #[error("matrix too large for dense evaluation: {n} > {max}")]
    TooLarge { n: usize, max: usize },

    #[error("sparse factorization failed: {0}")]
    Sparse(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
        if expected == got {
            Ok(())
        } else {
            Err(Error::Shape { expected, got })
        }
    }
}
