use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{random_band_field, sobolev_norm, Grid, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForcingMode {
    Zero,
    SteadyBand,
    /// `f(t) = f₀ + g e^{-rate t} f₁` with `f₁` an independent band field of unit norm.
    TimeDecayingPair,
}

/// Body force acting on the velocity block. Band limits are in lattice units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForcingSpec {
    pub mode: ForcingMode,
    #[serde(default = "default_lo")]
    pub k_lo: f64,
    #[serde(default = "default_hi")]
    pub k_hi: f64,
    /// `‖f₀‖_0`.
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub secondary_amplitude: f64,
    #[serde(default)]
    pub decay_rate: f64,
}

fn default_lo() -> f64 {
    2.0
}
fn default_hi() -> f64 {
    3.0
}

impl Default for ForcingSpec {
    fn default() -> Self {
        ForcingSpec::zero()
    }
}

impl ForcingSpec {
    pub fn zero() -> Self {
        ForcingSpec {
            mode: ForcingMode::Zero,
            k_lo: default_lo(),
            k_hi: default_hi(),
            amplitude: 0.0,
            seed: 0,
            secondary_amplitude: 0.0,
            decay_rate: 0.0,
        }
    }

    pub fn steady_band(k_lo: f64, k_hi: f64, amplitude: f64, seed: u64) -> Self {
        ForcingSpec { mode: ForcingMode::SteadyBand, k_lo, k_hi, amplitude, seed, ..Self::zero() }
    }

    pub fn decaying_pair(base: ForcingSpec, secondary_amplitude: f64, decay_rate: f64) -> Self {
        ForcingSpec { mode: ForcingMode::TimeDecayingPair, secondary_amplitude, decay_rate, ..base }
    }

    /// Centre of the band in lattice units, used as the forcing length scale `L/k_c`.
    pub fn k_center(&self) -> f64 {
        0.5 * (self.k_lo + self.k_hi)
    }

    pub fn realize(&self, grid: &Grid) -> Result<Forcing> {
        if self.mode == ForcingMode::Zero {
            return Ok(Forcing { base: None, secondary: None, spec: self.clone() });
        }
        if !(self.k_lo > 0.0 && self.k_hi >= self.k_lo) {
            return Err(Error::Config(format!("bad forcing band [{}, {}]", self.k_lo, self.k_hi)));
        }
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(Error::Config("forcing amplitude must be >= 0".into()));
        }
        let base = random_band_field(grid, self.seed, 0.0, self.amplitude, self.k_lo, self.k_hi);
        if self.amplitude > 0.0 && sobolev_norm(&base, 0.0) == 0.0 {
            return Err(Error::Config(format!(
                "forcing band [{}, {}] contains no retained modes",
                self.k_lo, self.k_hi
            )));
        }
        let secondary = match self.mode {
            ForcingMode::TimeDecayingPair => {
                let g = random_band_field(grid, self.seed.wrapping_add(1), 0.0, 1.0, self.k_lo, self.k_hi);
                Some(g)
            }
            _ => None,
        };
        Ok(Forcing { base: Some(base), secondary, spec: self.clone() })
    }
}

/// A realized forcing on a grid.
#[derive(Clone, Debug)]
pub struct Forcing {
    base: Option<SpectralField>,
    secondary: Option<SpectralField>,
    spec: ForcingSpec,
}

impl Forcing {
    pub fn spec(&self) -> &ForcingSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_none()
    }

    /// The steady part `f₀` (the `g` of a decaying pair).
    pub fn base(&self) -> Option<&SpectralField> {
        self.base.as_ref()
    }

    pub fn at(&self, t: f64) -> Option<SpectralField> {
        let mut f = self.base.clone()?;
        if let Some(g) = &self.secondary {
            f.axpy(self.spec.secondary_amplitude * (-self.spec.decay_rate * t).exp(), g);
        }
        Some(f)
    }
}
