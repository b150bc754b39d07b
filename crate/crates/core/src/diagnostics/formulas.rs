use serde::{Deserialize, Serialize};

use super::record::{trailing_start, window_mean, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::spectral::{sobolev_norm, SpectralField};
use crate::timestep::ForcingSpec;

/// `‖f‖_{−θ−θ2}`, the quantity whose limsup is the Grashof number.
pub fn forcing_norm(f: &SpectralField, theta: f64, theta2: f64) -> f64 {
    sobolev_norm(f, -theta - theta2)
}

/// Finite-horizon surrogate for `limsup ‖f(t)‖`: the maximum over the
/// trailing half of the samples.
pub fn grashof_general(norms: &[f64]) -> Result<f64> {
    if norms.is_empty() {
        return Err(Error::Config("empty forcing history".into()));
    }
    let start = norms.len() / 2;
    Ok(norms[start..].iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// `f = L²/(ρν²) f̃` for a dimensional force `f̃` on the box of side `L`.
pub fn nondimensionalize_forcing(f_tilde: &SpectralField, rho: f64, nu: f64) -> Result<SpectralField> {
    check_material(rho, nu)?;
    let l = f_tilde.grid().length();
    Ok(f_tilde.clone().scaled(l * l / (rho * nu * nu)))
}

/// Classical Grashof number `L^{2−n/2}/(ρν²)·‖f̃‖_{−1}` of a steady force,
/// with `‖·‖_{−1}` the integral (not volume-averaged) norm over the box.
pub fn grashof_nse(f_tilde: &SpectralField, rho: f64, nu: f64) -> Result<f64> {
    check_material(rho, nu)?;
    let g = f_tilde.grid();
    let n = g.n_dim() as f64;
    let l = g.length();
    let integral = g.volume().sqrt() * sobolev_norm(f_tilde, -1.0);
    Ok(l.powf(2.0 - n / 2.0) / (rho * nu * nu) * integral)
}

fn check_material(rho: f64, nu: f64) -> Result<()> {
    if !(rho > 0.0 && nu > 0.0 && rho.is_finite() && nu.is_finite()) {
        return Err(Error::Config(format!("density and viscosity must be positive, got ρ = {rho}, ν = {nu}")));
    }
    Ok(())
}

/// `l = L / k_c` with `k_c` the centre of the forcing band.
pub fn forcing_length_scale(length: f64, forcing: &ForcingSpec) -> f64 {
    length / forcing.k_center()
}

/// Long-time velocity scale, dissipation rate and Reynolds number of a run,
/// measured on `ũ` with `‖ũ‖₀ ≂ ‖u‖_{−2θ̌}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReynoldsEstimate {
    pub re: f64,
    pub epsilon: f64,
    pub u: f64,
    pub theta_check: f64,
    /// The two halves of the averaging window agree to 5%.
    pub stable: bool,
    /// Relative disagreement of the two half-window averages of `U²`.
    pub drift: f64,
}

/// `Re = U l / ν`, `U² = avg ‖u‖²_{−2θ̌}`, `ε = ν avg ‖u‖²_{1−2θ̌}`, averaged
/// over the trailing half of the record.
pub fn reynolds_and_dissipation(
    rec: &DiagnosticsRecord,
    theta1: f64,
    theta2: f64,
    l: f64,
    nu: f64,
) -> Result<ReynoldsEstimate> {
    let tc = theta1.max(theta2);
    if (tc - rec.theta_check).abs() > 1e-12 {
        return Err(Error::Config(format!(
            "record was sampled with θ̌ = {}, asked for θ̌ = {tc}",
            rec.theta_check
        )));
    }
    if !(l > 0.0 && nu > 0.0) {
        return Err(Error::Config(format!("need l > 0 and ν > 0, got l = {l}, ν = {nu}")));
    }
    let uu = rec.get("u_check_sq")?;
    let gg = rec.get("grad_check_sq")?;
    let n = rec.len();
    let start = trailing_start(n, 0.5)?;
    let t = &rec.times;
    let u2 = window_mean(&t[start..], &uu[start..]);
    let g2 = window_mean(&t[start..], &gg[start..]);
    let mid = start + (n - 1 - start) / 2;
    let (a, b) = if mid > start && mid < n - 1 {
        (window_mean(&t[start..=mid], &uu[start..=mid]), window_mean(&t[mid..], &uu[mid..]))
    } else {
        (u2, u2)
    };
    let scale = a.abs().max(b.abs());
    let drift = if scale == 0.0 { 0.0 } else { (a - b).abs() / scale };
    let u = u2.sqrt();
    Ok(ReynoldsEstimate { re: u * l / nu, epsilon: nu * g2, u, theta_check: tc, stable: drift <= 0.05, drift })
}

/// `(2 + 1/(θ+θ1))/4`, the Reynolds exponent of the dissipation-length bound.
pub fn kolmogorov_exponent(theta: f64, theta1: f64) -> Result<f64> {
    let s = theta + theta1;
    if !(s > 0.0) {
        return Err(Error::Config(format!("θ + θ1 must be positive, got {s}")));
    }
    Ok(0.25 * (2.0 + 1.0 / s))
}

/// Shape of the bound on `l_d^{−1}`: `Re^{(2+1/(θ+θ1))/4} + Re^{1/2}`.
pub fn kolmogorov_bound(re: f64, theta: f64, theta1: f64) -> Result<f64> {
    if !(re >= 0.0) {
        return Err(Error::Config(format!("Re must be >= 0, got {re}")));
    }
    Ok(re.powf(kolmogorov_exponent(theta, theta1)?) + re.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeterminingRegime {
    Dissipative,
    Nondissipative,
}

/// Shape of the determining-mode bound with constant 1: `⌈G^{n/θ}⌉` in the
/// dissipative case, `⌈G^{−n/(θ2+α)}⌉` in the nondissipative one.
pub fn determining_mode_count(
    g: f64,
    n: usize,
    theta: f64,
    theta2: f64,
    alpha: f64,
    regime: DeterminingRegime,
) -> Result<u64> {
    if !(g >= 0.0 && g.is_finite()) {
        return Err(Error::Config(format!("Grashof number must be finite and >= 0, got {g}")));
    }
    let exponent = match regime {
        DeterminingRegime::Dissipative => {
            if !(theta > 0.0) {
                return Err(Error::Config("the dissipative count needs θ > 0".into()));
            }
            n as f64 / theta
        }
        DeterminingRegime::Nondissipative => {
            if !(theta2 + alpha < 0.0) {
                return Err(Error::Config(format!("the nondissipative count needs θ2 + α < 0, got {}", theta2 + alpha)));
            }
            -(n as f64) / (theta2 + alpha)
        }
    };
    let m = g.powf(exponent);
    if !m.is_finite() || m > u64::MAX as f64 {
        return Err(Error::Config(format!("mode count G^{exponent} overflows")));
    }
    // integer powers land exactly on integers; keep float noise from adding one
    Ok((m * (1.0 - 1e-12)).ceil() as u64)
}
