//! Scalar diagnostics of runs: sampled norms and pairings, long-time
//! averages, Grashof and Reynolds numbers, bound shapes, spectra and MHD
//! invariants.
//!
//! Long-time averages and limsups are replaced by trailing-window statistics.
//! Every such quantity carries a `stable` flag so unconverged numbers are
//! visible. Bound formulas use constant 1: they give the shape of a bound,
//! never its value.

mod budget;
mod formulas;
mod record;
mod spectrum;

pub use budget::{energy_budget_residual, Quadrature};
pub use formulas::{
    determining_mode_count, forcing_length_scale, forcing_norm, grashof_general, grashof_nse,
    kolmogorov_bound, kolmogorov_exponent, nondimensionalize_forcing, reynolds_and_dissipation, DeterminingRegime,
    ReynoldsEstimate,
};
pub use record::{trailing_average, DiagnosticsRecord, Sampler};
pub use spectrum::{mhd_invariants, shell_spectrum};
