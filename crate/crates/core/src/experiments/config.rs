use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bilinear::Form;
use crate::error::{Error, Result};
use crate::regime::{custom, preset};
use crate::spectral::Grid;
use crate::timestep::{ForcingSpec, InitSpec, ModelParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    AlphaSweep,
    InviscidLimit,
    AbsorbingBall,
    DeterminingModes,
    TwinRun,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::AlphaSweep => "alpha-sweep",
            ExperimentKind::InviscidLimit => "inviscid-limit",
            ExperimentKind::AbsorbingBall => "absorbing-ball",
            ExperimentKind::DeterminingModes => "determining-modes",
            ExperimentKind::TwinRun => "twin-run",
        }
    }

    /// What the `sweep` list holds.
    pub fn sweep_meaning(self) -> &'static str {
        match self {
            ExperimentKind::AlphaSweep => "alpha",
            ExperimentKind::InviscidLimit => "nu",
            ExperimentKind::AbsorbingBall => "amplitude",
            ExperimentKind::DeterminingModes => "radius",
            ExperimentKind::TwinRun => "delta0",
        }
    }
}

/// A named preset, or `custom` with explicit exponents. Unset fields keep the
/// preset's values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default = "default_model")]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
}

fn default_model() -> String {
    "NSE".into()
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            name: default_model(),
            theta: None,
            theta1: None,
            theta2: None,
            form: None,
            alpha: None,
            nu: None,
            eta: None,
        }
    }
}

impl ModelConfig {
    pub fn named(name: &str) -> Self {
        ModelConfig { name: name.into(), ..Default::default() }
    }

    pub fn resolve(&self, n_dim: usize) -> Result<ModelParams> {
        let mut p = if self.name.eq_ignore_ascii_case("custom") {
            let need = |v: Option<f64>, n: &str| v.ok_or_else(|| Error::Config(format!("custom model needs `{n}`")));
            let form = Form::parse(self.form.as_deref().unwrap_or("B1"))?;
            custom(need(self.theta, "theta")?, need(self.theta1, "theta1")?, need(self.theta2, "theta2")?, form)
        } else {
            if self.theta.is_some() || self.theta1.is_some() || self.theta2.is_some() || self.form.is_some() {
                return Err(Error::Config(format!(
                    "exponents and form are fixed by the preset `{}`; use name = \"custom\" to set them",
                    self.name
                )));
            }
            preset(&self.name)?
        };
        if let Some(a) = self.alpha {
            p = p.with_alpha(a);
        }
        if let Some(nu) = self.nu {
            p = p.with_nu(nu);
            if p.is_mhd() && self.eta.is_none() {
                p = p.with_eta(nu);
            }
        }
        if let Some(eta) = self.eta {
            p = p.with_eta(eta);
        }
        p = p.with_dims(n_dim);
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_dims")]
    pub dims: usize,
    /// Points per axis; 128 in 2D and 32 in 3D when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub res: Option<usize>,
}

fn default_dims() -> usize {
    2
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { dims: 2, res: None }
    }
}

impl GridConfig {
    pub fn resolution(&self) -> usize {
        self.res.unwrap_or(if self.dims == 3 { 32 } else { 128 })
    }

    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.dims, self.resolution())
    }
}

/// One experiment, as read from a TOML file.
///
/// ```toml
/// kind = "alpha-sweep"
/// dt = 1e-3
/// t_end = 0.5
/// seed = 7
/// sweep = [0.4, 0.2, 0.1, 0.05]
/// [model]
/// name = "NS-alpha"
/// [grid]
/// dims = 2
/// res = 128
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub grid: GridConfig,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub seed: u64,
    /// Steps between samples.
    #[serde(default = "default_every")]
    pub sample_every: usize,
    /// Values of the swept quantity; see [`ExperimentKind::sweep_meaning`].
    #[serde(default)]
    pub sweep: Vec<f64>,
    /// Initial data; random with unit amplitude and slope −2 when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<InitSpec>,
    #[serde(default)]
    pub forcing: ForcingSpec,
    /// Determining modes: the second forcing is `f` plus a decaying
    /// perturbation of this amplitude and rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forcing_gap: Option<[f64; 2]>,
    /// Determining modes: gap regarded as zero.
    #[serde(default = "default_tol")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn default_every() -> usize {
    10
}

fn default_tol() -> f64 {
    1e-6
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, model: &str, dt: f64, t_end: f64) -> Self {
        ExperimentConfig {
            kind,
            model: ModelConfig::named(model),
            grid: GridConfig::default(),
            dt,
            t_end,
            seed: 0,
            sample_every: default_every(),
            sweep: vec![],
            init: None,
            forcing: ForcingSpec::zero(),
            forcing_gap: None,
            tolerance: default_tol(),
            jobs: None,
            output: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn init_spec(&self) -> InitSpec {
        self.init.clone().unwrap_or(InitSpec::Random { seed: self.seed, slope: -2.0, amplitude: 1.0, magnetic_amplitude: None })
    }

    /// Checks that need no model or grid.
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        if self.sample_every == 0 {
            return Err(Error::Config("sample_every must be at least 1".into()));
        }
        if self.sweep.is_empty() {
            return Err(Error::Config(format!("{} needs a non-empty `sweep` list", self.kind.as_str())));
        }
        if self.sweep.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Config("sweep values must be finite and >= 0".into()));
        }
        let up = self.sweep.windows(2).all(|w| w[1] > w[0]);
        let down = self.sweep.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(Error::Config("sweep list must be strictly monotone".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let c = ExperimentConfig::from_toml(
            "kind = \"alpha-sweep\"\ndt = 1e-3\nt_end = 0.5\nseed = 7\nsweep = [0.4, 0.2, 0.1, 0.05]\n[model]\nname = \"NS-alpha\"\n[grid]\ndims = 2\nres = 128\n",
        )
        .unwrap();
        c.validate().unwrap();
        assert_eq!(c.kind, ExperimentKind::AlphaSweep);
        let p = c.model.resolve(c.grid.dims).unwrap();
        assert_eq!((p.theta1, p.theta2, p.n_dim), (0.0, 1.0, 2));
        let back = ExperimentConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::from_toml("kind = \"alpha-sweep\"\ndt = 1e-3\nt_end = 1\nbogus = 1\n").is_err());
        let mut c = ExperimentConfig::new(ExperimentKind::TwinRun, "Leray-α", 1e-3, 1.0);
        c.sweep = vec![0.1, 0.3, 0.2];
        assert!(c.validate().is_err());
        c.sweep = vec![];
        assert!(c.validate().is_err());
        let m = ModelConfig { theta: Some(2.0), ..ModelConfig::named("NSE") };
        assert!(m.resolve(2).is_err());
        let m = ModelConfig { theta: Some(2.0), theta1: Some(0.0), theta2: Some(0.0), ..ModelConfig::named("custom") };
        assert_eq!(m.resolve(2).unwrap().theta, 2.0);
    }
}
