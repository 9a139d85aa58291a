use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the operation is defined.
    #[error("domain error: {name} = {value} {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("enumeration budget exceeded: {paths:e} paths requested, budget is {budget}")]
    BudgetExceeded { paths: f64, budget: u64 },

    #[error("unsupported generator: {0}")]
    UnsupportedSpec(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("empty sample")]
    EmptySample,

    #[error("cannot merge estimates: {0}")]
    Merge(&'static str),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            reason,
        }
    }

    /// True for errors caused by bad inputs (as opposed to I/O failures).
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}
