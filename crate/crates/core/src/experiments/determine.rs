use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::common::{gap_sq, insert_low, low_pass, mode_count, pool, run_pair};
use super::config::{ExperimentConfig, ExperimentKind};
use super::convergence::expect_kind;
use super::report::{assertions_text, opt, text_table, tsv, Assertion};
use crate::diagnostics::{determining_mode_count, forcing_norm, grashof_general, DeterminingRegime};
use crate::error::{Error, Result};
use crate::spectral::sobolev_norm_sq;
use crate::timestep::{whole_steps, Dynamics, ForcingSpec, InitSpec, SimState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeRow {
    /// Lattice radius of `R_m`.
    pub radius: f64,
    /// Retained modes with `0 < |m| ≤ radius`.
    pub modes: usize,
    /// `‖u − v‖₀` at `t_end` with the low modes of `v` slaved to `u`.
    pub gap_end: f64,
    /// `‖R_m(u − v)‖₀` at `t_end`.
    pub low_gap_end: f64,
    pub synchronized: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeterminingReport {
    pub model: String,
    /// `limsup ‖f‖_{−θ−θ2} / ν²`.
    pub grashof: f64,
    /// `‖u − v‖₀` at `t_end` for the uncoupled pair (the full projector).
    pub free_gap_end: f64,
    /// Sampled `(t, ‖u − v‖₀)` of the uncoupled pair.
    pub free_gap: Vec<(f64, f64)>,
    pub rows: Vec<ModeRow>,
    /// Fewest modes from which every larger radius synchronizes.
    pub sufficient_modes: Option<usize>,
    /// `⌈G^{n/θ}⌉`, constant 1.
    pub bound_shape: Option<u64>,
    /// `sufficient_modes / G^{n/θ}`.
    pub fitted_constant: Option<f64>,
    pub assertions: Vec<Assertion>,
}

impl DeterminingReport {
    fn cells(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    format!("{}", r.radius),
                    r.modes.to_string(),
                    format!("{:.6e}", r.gap_end),
                    format!("{:.6e}", r.low_gap_end),
                    r.synchronized.to_string(),
                ]
            })
            .collect()
    }

    pub fn render(&self) -> String {
        let mut s = format!("determining modes for {} (G = {:.6})\n", self.model, self.grashof);
        s += &format!("uncoupled gap at t_end: {:.6e}\n", self.free_gap_end);
        s += &text_table(&["radius", "modes", "gap", "low gap", "synchronized"], &self.cells());
        s += &format!(
            "sufficient modes: {}, bound shape G^(n/θ): {}, fitted constant: {}\n",
            self.sufficient_modes.map(|m| m.to_string()).unwrap_or("-".into()),
            self.bound_shape.map(|m| m.to_string()).unwrap_or("-".into()),
            opt(self.fitted_constant)
        );
        s + &assertions_text(&self.assertions)
    }

    pub fn table_tsv(&self) -> String {
        tsv(&["radius", "modes", "gap_end", "low_gap_end", "synchronized"], &self.cells())
    }
}

/// Pairs of trajectories driven by `f` and `g`, started from different data.
/// For each radius the modes `|m| ≤ radius` of the second trajectory are
/// replaced by those of the first after every step, which forces
/// `R_m(u − v) = 0`; the question is whether the remaining modes follow.
pub fn run_determining_modes(cfg: &ExperimentConfig) -> Result<DeterminingReport> {
    expect_kind(cfg, ExperimentKind::DeterminingModes)?;
    let grid = cfg.grid.build()?;
    let p = cfg.model.resolve(cfg.grid.dims)?;
    if !(p.nu > 0.0) {
        return Err(Error::Config("determining-mode runs need ν > 0".into()));
    }
    let g_spec = match cfg.forcing_gap {
        Some([amp, rate]) => ForcingSpec::decaying_pair(cfg.forcing.clone(), amp, rate),
        None => cfg.forcing.clone(),
    };
    let du = Dynamics::new(&p, &grid, &cfg.forcing)?;
    let dv = Dynamics::new(&p, &grid, &g_spec)?;
    let init = cfg.init_spec();
    let other = match &init {
        InitSpec::Random { seed, slope, amplitude, magnetic_amplitude } => InitSpec::Random {
            seed: seed.wrapping_add(1),
            slope: *slope,
            amplitude: *amplitude,
            magnetic_amplitude: *magnetic_amplitude,
        },
        _ => return Err(Error::Config("determining-mode runs need random initial data".into())),
    };
    let u0 = init.realize(&grid, p.blocks())?;
    let v0 = other.realize(&grid, p.blocks())?;

    let n = whole_steps(cfg.t_end, cfg.dt)?;
    let norms: Vec<f64> = (0..=n / cfg.sample_every)
        .map(|i| {
            let t = (i * cfg.sample_every) as f64 * cfg.dt;
            forcing_norm(&du.forcing_blocks(t)[0], p.theta, p.theta2)
        })
        .collect();
    let grashof = grashof_general(&norms)? / (p.nu * p.nu);

    let no_couple = |_: &SimState, _: &mut SimState| {};
    let radii: Vec<Option<f64>> = std::iter::once(None).chain(cfg.sweep.iter().map(|r| Some(*r))).collect();
    let results = pool(cfg.jobs)?.install(|| {
        radii
            .par_iter()
            .map(|r| -> Result<(Vec<(f64, f64)>, f64)> {
                let mut trace = vec![];
                let mut low = 0.0;
                let couple = |a: &SimState, b: &mut SimState| {
                    if let Some(r) = r {
                        for (x, y) in b.fields.iter_mut().zip(&a.fields) {
                            insert_low(x, y, *r);
                        }
                    }
                };
                let mut sample = |a: &SimState, b: &SimState| {
                    trace.push((a.t, gap_sq(&a.fields, &b.fields, 0.0).sqrt()));
                    if let Some(r) = r {
                        low = a.fields.iter().zip(&b.fields).map(|(x, y)| sobolev_norm_sq(&low_pass(&x.sub(y), *r), 0.0)).sum::<f64>().sqrt();
                    }
                };
                let c: &dyn Fn(&SimState, &mut SimState) = if r.is_some() { &couple } else { &no_couple };
                run_pair(cfg, &du, &dv, u0.clone(), v0.clone(), c, &mut sample)?;
                Ok((trace, low))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut it = results.into_iter();
    let (free_gap, _) = it.next().expect("uncoupled run");
    let free_gap_end = free_gap.last().map(|x| x.1).unwrap_or(f64::NAN);
    let rows: Vec<ModeRow> = cfg
        .sweep
        .iter()
        .zip(it)
        .map(|(r, (trace, low))| {
            let gap_end = trace.last().map(|x| x.1).unwrap_or(f64::NAN);
            ModeRow {
                radius: *r,
                modes: mode_count(&grid, *r),
                gap_end,
                low_gap_end: low,
                synchronized: gap_end <= cfg.tolerance,
            }
        })
        .collect();

    let mut by_size: Vec<&ModeRow> = rows.iter().collect();
    by_size.sort_by_key(|r| r.modes);
    let mut sufficient = None;
    for r in by_size.iter().rev() {
        if r.synchronized {
            sufficient = Some(r.modes);
        } else {
            break;
        }
    }
    let (bound_shape, fitted_constant) = if p.theta > 0.0 {
        let shape = determining_mode_count(grashof, p.n_dim, p.theta, p.theta2, 0.0, DeterminingRegime::Dissipative).ok();
        let scale = grashof.powf(p.n_dim as f64 / p.theta);
        (shape, sufficient.filter(|_| scale > 0.0).map(|m| m as f64 / scale))
    } else {
        (None, None)
    };
    let mut assertions = vec![Assertion::new(
        "low modes slaved",
        rows.iter().all(|r| r.low_gap_end == 0.0),
        "R_m(u − v) = 0 at t_end for every radius".into(),
    )];
    if grashof <= 1.0 {
        assertions.push(Assertion::new(
            "small Grashof number: trajectories merge",
            free_gap_end <= cfg.tolerance && rows.iter().all(|r| r.synchronized),
            format!("uncoupled gap {free_gap_end:.3e}, tolerance {:.1e}", cfg.tolerance),
        ));
    }
    Ok(DeterminingReport {
        model: p.label.clone(),
        grashof,
        free_gap_end,
        free_gap,
        rows,
        sufficient_modes: sufficient,
        bound_shape,
        fitted_constant,
        assertions,
    })
}
