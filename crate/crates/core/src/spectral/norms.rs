//! Sobolev norms and pairings.
//!
//! Norms are volume-averaged: `‖v‖_s² = Σ_k (1+|k|²)^s |v̂(k)|²` over the
//! Fourier-series coefficients, so `‖v‖_0²` is the mean of `|v(x)|²`. Multiply
//! by `Grid::volume()` for integrals over the box.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use super::grid::Grid;
use super::multiplier::MultiplierSpec;
use crate::error::{Error, Result};

fn weight(k2: f64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        (1.0 + k2).powf(s)
    }
}

pub fn sobolev_norm(v: &SpectralField, s: f64) -> f64 {
    sobolev_norm_sq(v, s).sqrt()
}

pub fn sobolev_norm_sq(v: &SpectralField, s: f64) -> f64 {
    let k2 = v.grid().k2();
    v.comps()
        .iter()
        .map(|c| c.iter().zip(k2).map(|(z, &q)| weight(q, s) * z.norm_sqr()).sum::<f64>())
        .sum()
}

/// `Σ_k (1+|k|²)^s Re(û·conj(v̂))`; the `s = 0` case is the L² pairing.
pub fn sobolev_inner(u: &SpectralField, v: &SpectralField, s: f64) -> f64 {
    let k2 = u.grid().k2();
    u.comps()
        .iter()
        .zip(v.comps())
        .map(|(a, b)| {
            a.iter()
                .zip(b)
                .zip(k2)
                .map(|((x, y), &q)| weight(q, s) * (x * y.conj()).re)
                .sum::<f64>()
        })
        .sum()
}

pub fn inner(u: &SpectralField, v: &SpectralField) -> f64 {
    sobolev_inner(u, v, 0.0)
}

/// `⟨u, S v⟩` for a multiplier `S`, without building `S v`.
pub fn inner_with_symbol(u: &SpectralField, symbol: &[f64], v: &SpectralField) -> f64 {
    u.comps()
        .iter()
        .zip(v.comps())
        .map(|(a, b)| {
            a.iter()
                .zip(b)
                .zip(symbol)
                .map(|((x, y), s)| s * (x * y.conj()).re)
                .sum::<f64>()
        })
        .sum()
}

/// Root-mean-square of the physical samples; equals `sobolev_norm(v, 0)`.
pub fn physical_rms(v: &SpectralField) -> f64 {
    let phys = v.to_physical();
    let n = v.grid().len() as f64;
    (phys.iter().flat_map(|c| c.iter()).map(|x| x * x).sum::<f64>() / n).sqrt()
}

/// Sharp lattice constants for the coercivity of `A` against `N` and of `N` itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoercivityConstants {
    /// `min a(k) n(k) / (1+|k|²)^{θ-θ2}`
    pub c_a: f64,
    /// Always 0 on the truncated space.
    pub big_c_a: f64,
    /// `min n(k) (1+|k|²)^{θ2}`
    pub c_n: f64,
    /// `c_A · min (1+|k|²)^{θ-θ2} / n(k)`: guaranteed decay rate of `⟨u, Nu⟩ / 2`.
    pub decay_rate: f64,
}

pub fn coercivity_constants(
    a_spec: &MultiplierSpec,
    n_spec: &MultiplierSpec,
    grid: &Grid,
    theta: f64,
    theta2: f64,
) -> Result<CoercivityConstants> {
    a_spec.validate_dissipative(grid)?;
    n_spec.validate()?;
    let mut c_a = f64::INFINITY;
    let mut c_n = f64::INFINITY;
    let mut ratio = f64::INFINITY;
    for idx in grid.retained() {
        let k2 = grid.k2()[idx];
        let a = a_spec.symbol(k2);
        let n = n_spec.symbol(k2);
        let w = weight(k2, theta - theta2);
        c_a = c_a.min(a * n / w);
        c_n = c_n.min(n * weight(k2, theta2));
        ratio = ratio.min(w / n);
    }
    if !(c_a > 0.0) {
        return Err(Error::Multiplier(format!("A is not coercive: c_A = {c_a}")));
    }
    if !(c_n > 0.0) {
        return Err(Error::Multiplier(format!("N is not coercive: c_N = {c_n}")));
    }
    Ok(CoercivityConstants { c_a, big_c_a: 0.0, c_n, decay_rate: c_a * ratio })
}

/// Field with a single real Fourier mode pair `amp·(e^{ik·x} + e^{-ik·x})` in
/// the direction `dir`, projected.
pub fn single_mode(grid: &Grid, m: &[i64], dir: &[f64], amp: f64) -> SpectralField {
    let mut f = SpectralField::zeros(grid);
    let idx = grid.index_of(m);
    let nidx = grid.neg_index(idx);
    for (d, c) in f.comps_mut().iter_mut().enumerate() {
        c[idx] += Complex64::new(amp * dir[d], 0.0);
        c[nidx] += Complex64::new(amp * dir[d], 0.0);
    }
    f.project();
    f
}
