//! Mixtures of multivariate generalized hyperbolic distributions with
//! subspace estimation (HMMDR): model fitting under clustering,
//! classification, and discriminant-analysis likelihoods, generalized
//! eigen-decomposition of the cluster-variation kernel, greedy BIC feature
//! selection, and the end-to-end reduction pipeline.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod featsel;
pub mod ghd;
pub mod mixfit;
pub mod pipeline;
pub mod simgen;
pub mod specfun;
pub mod subspace;

pub use dataset::Dataset;
pub use error::{HmmdrError, Result};
pub use featsel::FeatureSelection;
pub use ghd::GhComponent;
pub use mixfit::{FitConfig, MixtureModel, Mode, Responsibilities};
pub use pipeline::{HmmdrResult, PipelineConfig};
pub use subspace::SubspaceBasis;
