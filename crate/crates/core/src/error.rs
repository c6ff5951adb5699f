use thiserror::Error;

/// Errors raised by the decision procedures and the file formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("unknown action `{0}`")]
    UnknownAction(String),

    #[error("unknown letter {0}")]
    UnknownLetter(usize),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("flow word breaks at position {position}: {reason}")]
    Chain { position: usize, reason: String },

    #[error("{what} budget of {budget} exhausted after {reached}")]
    Budget {
        what: &'static str,
        budget: usize,
        reached: usize,
    },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("structural error: {0}")]
    Structure(String),

    #[error("consistency failure: {0}")]
    Consistency(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn budget(what: &'static str, budget: usize, reached: usize) -> Self {
        Error::Budget {
            what,
            budget,
            reached,
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
