use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Identity,
    /// `c |k|^{2e}`
    FractionalLaplacian,
    /// `c (1 + α²|k|²)^e`
    HelmholtzPower,
    /// `c (1 + (α²|k|²)^e)^{-1}`
    FractionalHelmholtz,
    /// `c |k|² (1 + α²|k|²)^{-1}`
    Rational,
}

/// Fourier multiplier. The symbol depends on `|k|²` only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSpec {
    pub family: Family,
    #[serde(default)]
    pub exponent: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default = "one")]
    pub coefficient: f64,
}

fn one() -> f64 {
    1.0
}

impl MultiplierSpec {
    pub fn identity() -> Self {
        MultiplierSpec { family: Family::Identity, exponent: 0.0, alpha: 0.0, coefficient: 1.0 }
    }
    pub fn fractional_laplacian(coefficient: f64, exponent: f64) -> Self {
        MultiplierSpec { family: Family::FractionalLaplacian, exponent, alpha: 0.0, coefficient }
    }
    pub fn helmholtz_power(alpha: f64, exponent: f64) -> Self {
        MultiplierSpec { family: Family::HelmholtzPower, exponent, alpha, coefficient: 1.0 }
    }
    pub fn fractional_helmholtz(alpha: f64, exponent: f64) -> Self {
        MultiplierSpec { family: Family::FractionalHelmholtz, exponent, alpha, coefficient: 1.0 }
    }
    pub fn rational(coefficient: f64, alpha: f64) -> Self {
        MultiplierSpec { family: Family::Rational, exponent: 1.0, alpha, coefficient }
    }
    /// `(1 - α²Δ)^{-1}`, the usual Helmholtz smoother.
    pub fn helmholtz_inverse(alpha: f64) -> Self {
        Self::helmholtz_power(alpha, -1.0)
    }

    pub fn with_coefficient(mut self, c: f64) -> Self {
        self.coefficient = c;
        self
    }

    pub fn is_identity(&self) -> bool {
        let s = |k2: f64| self.symbol(k2);
        self.coefficient == 1.0
            && match self.family {
                Family::Identity => true,
                Family::HelmholtzPower | Family::FractionalHelmholtz => {
                    self.alpha == 0.0 || self.exponent == 0.0 && s(1.0) == 1.0
                }
                Family::FractionalLaplacian => self.exponent == 0.0,
                Family::Rational => false,
            }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.coefficient.is_finite()
            && self.coefficient >= 0.0
            && self.alpha.is_finite()
            && self.alpha >= 0.0
            && self.exponent.is_finite();
        if !ok {
            return Err(Error::Multiplier(format!("bad parameters {self:?}")));
        }
        if self.family == Family::FractionalHelmholtz && self.exponent < 0.0 {
            return Err(Error::Multiplier("fractional-helmholtz needs exponent >= 0".into()));
        }
        Ok(())
    }

    /// Symbol at `|k|² = k2`. The mean mode gets 0 for the Laplacian-type families.
    pub fn symbol(&self, k2: f64) -> f64 {
        let c = self.coefficient;
        let a2 = self.alpha * self.alpha;
        match self.family {
            Family::Identity => c,
            Family::FractionalLaplacian => {
                if k2 == 0.0 {
                    if self.exponent == 0.0 {
                        c
                    } else {
                        0.0
                    }
                } else {
                    c * k2.powf(self.exponent)
                }
            }
            Family::HelmholtzPower => c * (1.0 + a2 * k2).powf(self.exponent),
            Family::FractionalHelmholtz => {
                let base = a2 * k2;
                let p = if base == 0.0 {
                    if self.exponent == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    base.powf(self.exponent)
                };
                c / (1.0 + p)
            }
            Family::Rational => c * k2 / (1.0 + a2 * k2),
        }
    }

    pub fn symbol_array(&self, grid: &Grid) -> Vec<f64> {
        grid.k2().iter().map(|&k2| self.symbol(k2)).collect()
    }

    /// Check the spec can play the role of the linear operator `A`:
    /// nonnegative, finite and vanishing on the mean.
    pub fn validate_dissipative(&self, grid: &Grid) -> Result<()> {
        self.validate()?;
        for &k2 in grid.k2() {
            let s = self.symbol(k2);
            if !s.is_finite() || s < 0.0 {
                return Err(Error::Multiplier(format!("symbol {s} at |k|^2 = {k2} is not admissible for A")));
            }
        }
        Ok(())
    }
}

/// Mode-wise product with the symbol of `spec`.
pub fn apply_multiplier(spec: &MultiplierSpec, v: &SpectralField) -> Result<SpectralField> {
    spec.validate()?;
    let sym = spec.symbol_array(v.grid());
    if let Some(bad) = sym.iter().find(|s| !s.is_finite()) {
        return Err(Error::Multiplier(format!("non-finite symbol value {bad}")));
    }
    let mut out = v.clone();
    out.mul_symbol(&sym);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_symbol_values() {
        let h = MultiplierSpec::helmholtz_inverse(1.0);
        assert!((h.symbol(1.0) - 0.5).abs() < 1e-15);
        let h = MultiplierSpec::helmholtz_inverse(0.5);
        assert!((h.symbol(4.0) - 0.5).abs() < 1e-15);
        let r = MultiplierSpec::rational(0.1, 0.5);
        assert!((r.symbol(4.0) - 0.2).abs() < 1e-15);
        let f = MultiplierSpec::fractional_laplacian(2.0, 1.5);
        assert!((f.symbol(4.0) - 16.0).abs() < 1e-12);
        let fh = MultiplierSpec::fractional_helmholtz(1.0, 1.0);
        assert!((fh.symbol(1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn alpha_zero_is_identity() {
        assert!(MultiplierSpec::helmholtz_inverse(0.0).is_identity());
        assert!(MultiplierSpec::fractional_helmholtz(0.0, 1.0).is_identity());
        assert!(!MultiplierSpec::helmholtz_inverse(0.3).is_identity());
    }

    #[test]
    fn negative_coefficient_rejected() {
        let g = Grid::new(2, 8).unwrap();
        let a = MultiplierSpec::fractional_laplacian(-1.0, 1.0);
        assert!(a.validate_dissipative(&g).is_err());
    }
}
