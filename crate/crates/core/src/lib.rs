//! Numerical workbench for period doubling in area-preserving maps.
//!
//! The crate computes the fixed points and spectra of the one-dimensional
//! doubling operator and of the generating-function renormalization
//! operators, provides the Herglotz-class a-priori bounds and the conformal
//! domain machinery, and re-runs the numerical inclusion and inequality
//! verifications behind the factorized-inverse existence argument.

pub mod area;
pub mod bivariate;
pub mod conformal;
pub mod claim;
pub mod epstein;
pub mod error;
pub mod herglotz;
pub mod onedim;
pub mod region;
pub mod series;
pub mod solve;

pub use error::{Error, Result};
