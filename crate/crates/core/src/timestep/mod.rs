//! Fixed-step time integration of the truncated system.
//!
//! The Fourier truncation plays the role of the Galerkin space. Because `N`
//! is a positive diagonal multiplier, the test space `N V_m` is the same
//! space, so no separate test basis is needed.

mod dynamics;
mod forcing;
mod manifest;
mod params;

pub use dynamics::{integrate, whole_steps, Dynamics, Observer, RunEnd, SimState, Stepper, BLOW_UP_THRESHOLD};
pub use forcing::{Forcing, ForcingMode, ForcingSpec};
pub use manifest::{checkpoint, InitSpec, RunManifest};
pub use params::ModelParams;
