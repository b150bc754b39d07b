use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::common::{ls_slope, pool};
use super::convergence::expect_kind;
use super::config::{ExperimentConfig, ExperimentKind};
use super::report::{assertions_text, opt, text_table, tsv, Assertion};
use crate::diagnostics::{DiagnosticsRecord, Sampler};
use crate::error::{Error, Result};
use crate::spectral::{coercivity_constants, sobolev_norm};
use crate::timestep::{integrate, Dynamics, ForcingSpec, SimState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallRow {
    /// Multiplier applied to the initial data.
    pub amplitude: f64,
    /// `‖u(0)‖²_{−θ2}` computed from the data.
    pub initial_norm_sq: f64,
    /// First sample of the recorded series.
    pub first_sample: f64,
    /// Time average of `‖u‖²_{−θ2}` over the last quarter of the run.
    pub plateau: f64,
    /// Fitted rate of `|‖u‖²_{−θ2} − plateau|` before it comes within 10% of the plateau.
    pub transient_rate: Option<f64>,
    #[serde(skip)]
    pub record: DiagnosticsRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallReport {
    pub model: String,
    pub rows: Vec<BallRow>,
    /// `(max − min)/mean` of the plateaus.
    pub plateau_spread: f64,
    /// Fitted decay rate of `⟨u,Nu⟩` without forcing.
    pub unforced_rate: f64,
    /// `2k` with `k` the sharp lattice coercivity rate.
    pub guaranteed_rate: f64,
    pub assertions: Vec<Assertion>,
}

impl BallReport {
    fn cells(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    format!("{}", r.amplitude),
                    format!("{:.6e}", r.initial_norm_sq),
                    format!("{:.6e}", r.plateau),
                    opt(r.transient_rate),
                ]
            })
            .collect()
    }

    pub fn render(&self) -> String {
        let mut s = format!("absorbing ball for {}\n", self.model);
        s += &text_table(&["amplitude", "|u0|^2", "plateau", "rate"], &self.cells());
        s += &format!(
            "plateau spread {:.3}%, unforced rate {:.6} (guaranteed {:.6})\n",
            100.0 * self.plateau_spread,
            self.unforced_rate,
            self.guaranteed_rate
        );
        s + &assertions_text(&self.assertions)
    }

    pub fn table_tsv(&self) -> String {
        tsv(&["amplitude", "initial_norm_sq", "plateau", "transient_rate"], &self.cells())
    }
}

fn tail_mean(t: &[f64], y: &[f64], frac: f64) -> f64 {
    let start = ((t.len() - 1) as f64 * (1.0 - frac)).floor() as usize;
    let (t, y) = (&t[start..], &y[start..]);
    if t.len() < 2 {
        return y[0];
    }
    let area: f64 = t.windows(2).zip(y.windows(2)).map(|(a, b)| 0.5 * (a[1] - a[0]) * (b[0] + b[1])).sum();
    area / (t[t.len() - 1] - t[0])
}

fn log_rate(t: &[f64], y: &[f64]) -> Option<f64> {
    let (x, l): (Vec<f64>, Vec<f64>) = t.iter().zip(y).filter(|(_, v)| **v > 0.0).map(|(a, v)| (*a, v.ln())).unzip();
    if x.len() < 3 {
        return None;
    }
    ls_slope(&x, &l).map(|s| -s)
}

/// Forced runs from scaled initial data, plus one unforced run for the decay rate.
pub fn run_absorbing_ball(cfg: &ExperimentConfig) -> Result<BallReport> {
    expect_kind(cfg, ExperimentKind::AbsorbingBall)?;
    let grid = cfg.grid.build()?;
    let p = cfg.model.resolve(cfg.grid.dims)?;
    let k = coercivity_constants(&p.a_spec.with_coefficient(p.nu), &p.selector.n_spec, &grid, p.theta, p.theta2)
        .map_err(|e| Error::Config(format!("{} is not dissipative on this grid: {e}", p.label)))?
        .decay_rate;
    let base = cfg.init_spec().realize(&grid, p.blocks())?;
    let s = -p.theta2;
    let key = DiagnosticsRecord::norm_key(s);
    let run = |amp: f64, forcing: &ForcingSpec| -> Result<(SimState, DiagnosticsRecord)> {
        let d = Dynamics::new(&p, &grid, forcing)?;
        let mut st = base.clone();
        for f in st.fields.iter_mut() {
            f.scale(amp);
        }
        let mut sampler = Sampler::for_dynamics(&d, &[s]);
        let end = integrate(&d, &st, cfg.t_end, cfg.dt, cfg.sample_every, &mut sampler)?;
        if let Some(t) = end.blow_up {
            return Err(Error::BlowUp { t });
        }
        Ok((st, sampler.record))
    };
    let zero = ForcingSpec::zero();
    let mut jobs: Vec<(f64, &ForcingSpec)> = cfg.sweep.iter().map(|a| (*a, &cfg.forcing)).collect();
    jobs.push((1.0, &zero));
    let mut results = pool(cfg.jobs)?.install(|| jobs.par_iter().map(|(a, f)| run(*a, f)).collect::<Result<Vec<_>>>())?;
    let (_, unforced) = results.pop().expect("unforced run");
    let unforced_rate = log_rate(&unforced.times, unforced.get("u_nu")?).unwrap_or(f64::NAN);

    let mut rows = vec![];
    for (amp, (st, rec)) in cfg.sweep.iter().zip(results) {
        let y: Vec<f64> = rec.get(&key)?.iter().map(|v| v * v).collect();
        let plateau = tail_mean(&rec.times, &y, 0.25);
        let reach = y.iter().position(|v| (v - plateau).abs() <= 0.1 * plateau.abs()).unwrap_or(y.len());
        let dev: Vec<f64> = y[..reach].iter().map(|v| (v - plateau).abs()).collect();
        rows.push(BallRow {
            amplitude: *amp,
            initial_norm_sq: sobolev_norm(&st.fields[0], s).powi(2),
            first_sample: y[0],
            plateau,
            transient_rate: log_rate(&rec.times[..reach], &dev),
            record: rec,
        });
    }
    let pl: Vec<f64> = rows.iter().map(|r| r.plateau).collect();
    let mean = pl.iter().sum::<f64>() / pl.len() as f64;
    let spread = if mean > 0.0 {
        (pl.iter().copied().fold(f64::MIN, f64::max) - pl.iter().copied().fold(f64::MAX, f64::min)) / mean
    } else {
        0.0
    };
    let guaranteed = 2.0 * k;
    let assertions = vec![
        Assertion::new("common plateau", spread <= 0.10, format!("spread {:.3}% (limit 10%)", 100.0 * spread)),
        Assertion::new(
            "unforced decay rate",
            unforced_rate >= 0.95 * guaranteed,
            format!("{unforced_rate:.6} >= 0.95 × {guaranteed:.6}"),
        ),
        Assertion::new(
            "first sample is the initial norm",
            rows.iter().all(|r| r.first_sample == r.initial_norm_sq),
            format!("{} runs", rows.len()),
        ),
    ];
    Ok(BallReport { model: p.label.clone(), rows, plateau_spread: spread, unforced_rate, guaranteed_rate: guaranteed, assertions })
}
