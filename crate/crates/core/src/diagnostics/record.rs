use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bilinear::block_inner;
use crate::error::{Error, Result};
use crate::spectral::{inner, inner_with_symbol, sobolev_norm, sobolev_norm_sq};
use crate::timestep::{Dynamics, Observer, SimState};

/// Sampled scalars of one trajectory.
///
/// Columns always present: `u_nu` (`⟨u,Nu⟩`), `au_nu` (`⟨Au,Nu⟩`), `f_nu`
/// (`⟨f,Nu⟩`), `energy` (`½Σ‖·‖₀²` over blocks), `u_check_sq`
/// (`‖u‖²_{−2θ̌}`), `grad_check_sq` (`‖u‖²_{1−2θ̌}`), `f_grashof`
/// (`‖f‖_{−θ−θ2}`) and `norm_s=<s>` for each requested order. Coupled
/// models add `cross_helicity`. Pairings sum over blocks; norms refer to the
/// velocity block.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub times: Vec<f64>,
    pub series: BTreeMap<String, Vec<f64>>,
    pub s_orders: Vec<f64>,
    /// `max(θ1, θ2)`
    pub theta_check: f64,
}

impl DiagnosticsRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn get(&self, key: &str) -> Result<&[f64]> {
        self.series
            .get(key)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::Config(format!("no series `{key}` in record")))
    }

    pub fn norm_key(s: f64) -> String {
        format!("norm_s={s}")
    }

    /// Sample spacing; errors if the cadence is not uniform.
    pub fn spacing(&self) -> Result<f64> {
        if self.times.len() < 2 {
            return Err(Error::Config("need at least two samples".into()));
        }
        let h = self.times[1] - self.times[0];
        for w in self.times.windows(2) {
            if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs() {
                return Err(Error::Config("sample cadence is not uniform".into()));
            }
        }
        Ok(h)
    }

    /// Tab-separated text. The first line records the parameters that define
    /// the columns.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let s: Vec<String> = self.s_orders.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "# theta_check={} s_orders={}", self.theta_check, s.join(","));
        let keys: Vec<&String> = self.series.keys().collect();
        out.push('t');
        for k in &keys {
            out.push('\t');
            out.push_str(k);
        }
        out.push('\n');
        for (i, t) in self.times.iter().enumerate() {
            let _ = write!(out, "{t:.17e}");
            for k in &keys {
                let _ = write!(out, "\t{:.17e}", self.series[*k][i]);
            }
            out.push('\n');
        }
        out
    }

    pub fn write_tsv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_tsv())?;
        Ok(())
    }
}

/// Observer filling a [`DiagnosticsRecord`].
#[derive(Clone, Debug)]
pub struct Sampler {
    pub record: DiagnosticsRecord,
}

impl Sampler {
    pub fn new(s_orders: &[f64], theta1: f64, theta2: f64) -> Sampler {
        Sampler {
            record: DiagnosticsRecord {
                s_orders: s_orders.to_vec(),
                theta_check: theta1.max(theta2),
                ..Default::default()
            },
        }
    }

    pub fn for_dynamics(dynamics: &Dynamics, s_orders: &[f64]) -> Sampler {
        Sampler::new(s_orders, dynamics.params.theta1, dynamics.params.theta2)
    }

    fn push(&mut self, key: &str, v: f64) {
        self.record.series.entry(key.to_string()).or_default().push(v);
    }
}

impl Observer for Sampler {
    fn observe(&mut self, dynamics: &Dynamics, state: &SimState) -> Result<()> {
        let fields = &state.fields;
        let nu = dynamics.apply_n(fields)?;
        let u = &fields[0];
        let p = &dynamics.params;
        let tc = self.record.theta_check;
        self.record.times.push(state.t);

        self.push("u_nu", block_inner(fields, &nu));
        let au_nu: f64 = nu.iter().zip(fields).zip(dynamics.linear_symbols()).map(|((n, f), a)| inner_with_symbol(n, a, f)).sum();
        self.push("au_nu", au_nu);
        let f = dynamics.forcing_blocks(state.t);
        self.push("f_nu", block_inner(&f, &nu));
        self.push("energy", 0.5 * fields.iter().map(|b| sobolev_norm_sq(b, 0.0)).sum::<f64>());
        if fields.len() == 2 {
            self.push("cross_helicity", 0.5 * inner(&fields[0], &fields[1]));
        }
        self.push("u_check_sq", sobolev_norm_sq(u, -2.0 * tc));
        self.push("grad_check_sq", sobolev_norm_sq(u, 1.0 - 2.0 * tc));
        self.push("f_grashof", sobolev_norm(&f[0], -p.theta - p.theta2));
        for s in self.record.s_orders.clone() {
            self.push(&DiagnosticsRecord::norm_key(s), sobolev_norm(u, s));
        }
        Ok(())
    }
}

/// Time average of a series over the trailing `fraction` of the record
/// (trapezoid rule in time).
pub fn trailing_average(rec: &DiagnosticsRecord, key: &str, fraction: f64) -> Result<f64> {
    let y = rec.get(key)?;
    let start = trailing_start(rec.len(), fraction)?;
    Ok(window_mean(&rec.times[start..], &y[start..]))
}

pub(crate) fn trailing_start(n: usize, fraction: f64) -> Result<usize> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Config(format!("window fraction must lie in (0, 1], got {fraction}")));
    }
    if n < 3 {
        return Err(Error::Config(format!("need at least three samples, got {n}")));
    }
    let start = ((n - 1) as f64 * (1.0 - fraction)).floor() as usize;
    Ok(start.min(n - 2))
}

pub(crate) fn window_mean(t: &[f64], y: &[f64]) -> f64 {
    let span = t[t.len() - 1] - t[0];
    let area: f64 = t.windows(2).zip(y.windows(2)).map(|(tw, yw)| 0.5 * (tw[1] - tw[0]) * (yw[0] + yw[1])).sum();
    area / span
}
