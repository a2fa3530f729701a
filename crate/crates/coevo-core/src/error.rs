use thiserror::Error;

/// Errors from configuration validation, simulation, and result I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("genome length must be at least 1")]
    EmptyGenome,

    #[error("genome lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("virulence {0} outside [0.5, 1.0]")]
    Virulence(f64),

    #[error("substitution count {kappa} exceeds population size {size}")]
    SubstitutionCount { kappa: usize, size: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("sweep cell (strategy {strategy}, beta_h {host_bias}, beta_p {parasite_bias}) trial {trial}: {source}")]
    SweepCell {
        strategy: &'static str,
        host_bias: f64,
        parasite_bias: f64,
        trial: usize,
        source: Box<Error>,
    },

    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },

    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// True for filesystem failures, as opposed to bad configuration or data.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io { .. } => true,
            Error::SweepCell { source, .. } => source.is_io(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
