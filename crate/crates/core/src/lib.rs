//! Spectral Galerkin solver, regime checker and diagnostics for the family of
//! regularized Navier-Stokes and MHD models
//! `du/dt + Au + B̄(Mu, Nu) = f` on the periodic box.

pub mod bilinear;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod regime;
pub mod spectral;
pub mod timestep;

pub use error::{Error, Result};
