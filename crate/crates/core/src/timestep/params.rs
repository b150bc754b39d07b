use serde::{Deserialize, Serialize};

use crate::bilinear::{BilinearSelector, Form};
use crate::error::{Error, Result};
use crate::spectral::{Grid, MultiplierSpec};

/// Full identity of a model: the exponents used by the regime checker and the
/// concrete multipliers used by the solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub label: String,
    pub theta: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub alpha: f64,
    pub nu: f64,
    /// Magnetic diffusivity; ignored by single-field models.
    #[serde(default)]
    pub eta: f64,
    pub selector: BilinearSelector,
    /// `A` with coefficient `ν`. The magnetic block uses the same shape with `η`.
    pub a_spec: MultiplierSpec,
    pub n_dim: usize,
}

impl ModelParams {
    pub fn is_mhd(&self) -> bool {
        self.selector.form.blocks() == 2
    }

    pub fn blocks(&self) -> usize {
        self.selector.form.blocks()
    }

    pub fn form(&self) -> Form {
        self.selector.form
    }

    pub fn validate(&self) -> Result<()> {
        self.selector.form.validate()?;
        self.selector.m_spec.validate()?;
        self.selector.n_spec.validate()?;
        self.a_spec.validate()?;
        if !(self.n_dim == 2 || self.n_dim == 3) {
            return Err(Error::Config(format!("n_dim must be 2 or 3, got {}", self.n_dim)));
        }
        for (name, v) in [("theta", self.theta), ("alpha", self.alpha), ("nu", self.nu), ("eta", self.eta)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !(self.theta1.is_finite() && self.theta2.is_finite()) {
            return Err(Error::Config("theta1/theta2 must be finite".into()));
        }
        Ok(())
    }

    /// Linear symbol per block: `ν a(k)` and, for coupled models, `η a(k)`.
    pub fn linear_symbols(&self, grid: &Grid) -> Result<Vec<Vec<f64>>> {
        let mut out = vec![];
        let u = self.a_spec.with_coefficient(self.nu);
        u.validate_dissipative(grid)?;
        out.push(u.symbol_array(grid));
        if self.is_mhd() {
            let h = self.a_spec.with_coefficient(self.eta);
            h.validate_dissipative(grid)?;
            out.push(h.symbol_array(grid));
        }
        Ok(out)
    }

    /// Same model with a new filter length; every `α`-dependent multiplier follows.
    pub fn with_alpha(&self, alpha: f64) -> ModelParams {
        let mut p = self.clone();
        p.alpha = alpha;
        for spec in [&mut p.selector.m_spec, &mut p.selector.n_spec, &mut p.a_spec] {
            if spec.family != crate::spectral::Family::Identity && spec.family != crate::spectral::Family::FractionalLaplacian {
                spec.alpha = alpha;
            }
        }
        p
    }

    pub fn with_nu(&self, nu: f64) -> ModelParams {
        let mut p = self.clone();
        p.nu = nu;
        p.a_spec.coefficient = nu;
        p
    }

    pub fn with_eta(&self, eta: f64) -> ModelParams {
        let mut p = self.clone();
        p.eta = eta;
        p
    }

    pub fn with_dims(&self, n_dim: usize) -> ModelParams {
        let mut p = self.clone();
        p.n_dim = n_dim;
        p
    }

    /// `max_k a(k)/|k|^{2θ}` over `min_k` of the same ratio, for `ν > 0`.
    pub fn order_ratio(&self, grid: &Grid) -> f64 {
        let a = self.a_spec.with_coefficient(1.0);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for idx in grid.retained() {
            let k2 = grid.k2()[idx];
            let r = a.symbol(k2) / k2.powf(self.theta);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        hi / lo
    }
}
