//! Fourier representation of divergence-free fields on the periodic box.

mod field;
mod grid;
mod multiplier;
mod norms;
mod random;
mod snapshot;

pub use field::{FieldKind, SpectralField};
pub use grid::{Grid, GridSpec};
pub use multiplier::{apply_multiplier, Family, MultiplierSpec};
pub use norms::{
    coercivity_constants, inner, inner_with_symbol, physical_rms, single_mode, sobolev_inner,
    sobolev_norm, sobolev_norm_sq, CoercivityConstants,
};
pub use random::{random_band_field, random_divfree_field, taylor_green};
pub use snapshot::Snapshot;

/// Leray projection as a value-level operation.
pub fn leray_project(v: &SpectralField) -> SpectralField {
    v.clone().projected()
}
