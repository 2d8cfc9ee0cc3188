//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by model fitting, numerics, and data handling.
#[derive(Debug, Error)]
pub enum HmmdrError {
    /// An argument was outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter set failed validation (dimensions, positivity, ...).
    #[error("invalid parameters: {0}")]
    Parameter(String),

    /// A linear-algebra or special-function computation broke down.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The EM fit could not be completed.
    #[error("fitting failed: {0}")]
    Fitting(String),

    /// Every candidate fit in a model search failed.
    #[error("all candidate fits failed: {causes:?}")]
    AllFitsFailed { causes: Vec<String> },

    /// A pipeline stage failed; records where.
    #[error("pipeline failed at stage `{stage}` (outer iteration {iteration}): {source}")]
    Pipeline {
        stage: &'static str,
        iteration: usize,
        #[source]
        source: Box<HmmdrError>,
    },
}

pub type Result<T> = std::result::Result<T, HmmdrError>;

impl HmmdrError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        HmmdrError::Domain(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        HmmdrError::Parameter(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        HmmdrError::Numerical(msg.into())
    }

    pub(crate) fn fitting(msg: impl Into<String>) -> Self {
        HmmdrError::Fitting(msg.into())
    }

    pub(crate) fn at_stage(self, stage: &'static str, iteration: usize) -> Self {
        HmmdrError::Pipeline {
            stage,
            iteration,
            source: Box::new(self),
        }
    }
}
