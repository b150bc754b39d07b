use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::dynamics::{Dynamics, SimState};
use super::forcing::ForcingSpec;
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::spectral::{random_divfree_field, taylor_green, FieldKind, Grid, GridSpec, Snapshot, SpectralField};

/// Initial data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitSpec {
    Zero,
    /// Random divergence-free data; the magnetic block (if any) uses `seed + 1`.
    Random {
        seed: u64,
        #[serde(default = "default_slope")]
        slope: f64,
        amplitude: f64,
        #[serde(default)]
        magnetic_amplitude: Option<f64>,
    },
    TaylorGreen {
        amplitude: f64,
    },
    Snapshot {
        path: String,
    },
}

fn default_slope() -> f64 {
    -2.0
}

impl InitSpec {
    pub fn realize(&self, grid: &Grid, blocks: usize) -> Result<SimState> {
        let fields = match self {
            InitSpec::Zero => (0..blocks).map(|_| SpectralField::zeros(grid)).collect(),
            InitSpec::Random { seed, slope, amplitude, magnetic_amplitude } => {
                let mut v = vec![random_divfree_field(grid, *seed, *slope, *amplitude)];
                if blocks == 2 {
                    let a = magnetic_amplitude.unwrap_or(*amplitude);
                    v.push(random_divfree_field(grid, seed.wrapping_add(1), *slope, a));
                }
                v
            }
            InitSpec::TaylorGreen { amplitude } => {
                if grid.n_dim() != 2 {
                    return Err(Error::Config("Taylor-Green data is two-dimensional".into()));
                }
                let mut v = vec![taylor_green(grid, *amplitude)];
                if blocks == 2 {
                    v.push(SpectralField::zeros(grid));
                }
                v
            }
            InitSpec::Snapshot { path } => {
                let snap = Snapshot::read(Path::new(path))?;
                if snap.fields.len() != blocks {
                    return Err(Error::Config(format!(
                        "snapshot has {} field(s), model needs {blocks}",
                        snap.fields.len()
                    )));
                }
                let v: Vec<SpectralField> = snap.fields.into_iter().map(|(_, f)| f).collect();
                if v[0].grid() != grid {
                    return Err(Error::GridMismatch("snapshot grid differs from run grid".into()));
                }
                return Ok(SimState::new(snap.t, v));
            }
        };
        Ok(SimState::new(0.0, fields))
    }
}

/// Everything needed to reproduce a run bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub params: ModelParams,
    pub grid: GridSpec,
    pub forcing: ForcingSpec,
    pub init: InitSpec,
    pub dt: f64,
    pub t_end: f64,
    pub sample_every: usize,
    pub seed: u64,
    pub crate_version: String,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

/// Snapshot of a state with the model's multipliers recorded alongside.
pub fn checkpoint(dynamics: &Dynamics, state: &SimState) -> Snapshot {
    let p = &dynamics.params;
    let mut multipliers = BTreeMap::new();
    multipliers.insert("A".to_string(), p.a_spec);
    multipliers.insert("M".to_string(), p.selector.m_spec);
    multipliers.insert("N".to_string(), p.selector.n_spec);
    let kinds = [FieldKind::Velocity, FieldKind::Magnetic];
    Snapshot {
        t: state.t,
        multipliers,
        fields: state.fields.iter().cloned().zip(kinds).map(|(f, k)| (k, f)).collect(),
    }
}
