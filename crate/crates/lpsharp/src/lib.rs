//! Density-sharpening toolkit: orthonormal rank-polynomial diagnostics and
//! maximum-entropy repair of misspecified location-scale models.
//!
//! The pipeline fits a robust Gaussian or Laplace base model to each series,
//! estimates LP coefficients of the comparison density against it, prunes
//! them with OPEN penalized selection, and exposes the retained structure as
//! surprisal indices, LP-maps, and d-sharp (base times sharpening function)
//! density estimates.

pub mod base_models;
pub mod error;
pub mod ica;
pub mod io;
pub mod lp_basis;
pub mod lp_inference;
pub mod sharpening;
pub mod svg;
pub mod synth;

pub use base_models::{fit_gaussian_robust, fit_laplace_mle, BaseModel, Family};
pub use error::{Error, Result};
pub use ica::{build_lp_map, compare_surprisal, ExperimentSeries, IcaConfig, LPMap};
pub use lp_basis::{gauss_legendre, LPBasis, QuadratureRule};
pub use lp_inference::{estimate_lp, fit_profile, open_select, LPProfile, Penalty, ScreenMode};
pub use sharpening::{kl_surprise, maxent_fit, DSModel, SharpenForm, SharpeningFunction};
