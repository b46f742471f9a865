//! Parametric squeezing of a single field mode and the late-time radiation
//! of a harmonic atom immersed in the resulting two-mode squeezed field.
//!
//! Natural units ħ = c = 1 throughout.

pub mod atomfield;
pub mod error;
pub mod mode_evolution;
pub mod observables;
pub mod ode;
pub mod profiles;
pub mod quadrature;
pub mod selftest;
pub mod squeeze;
pub mod sweeps;
pub mod stability;

pub use error::{Error, Result};
