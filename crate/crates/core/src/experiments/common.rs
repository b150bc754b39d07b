use rayon::ThreadPool;

use crate::diagnostics::Sampler;
use crate::error::{Error, Result};
use crate::spectral::{sobolev_norm_sq, Grid, SpectralField};
use crate::timestep::{whole_steps, Dynamics, Observer, SimState, Stepper};

use super::config::ExperimentConfig;

pub(crate) fn pool(jobs: Option<usize>) -> Result<ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j);
    }
    b.build().map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// `Σ_blocks ‖a − b‖_s²`.
pub(crate) fn gap_sq(a: &[SpectralField], b: &[SpectralField], s: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| sobolev_norm_sq(&x.sub(y), s)).sum()
}

/// Sampler plus an extra per-sample hook.
pub(crate) struct Hooked<'a> {
    pub sampler: Sampler,
    pub hook: &'a mut dyn FnMut(usize, &SimState) -> Result<()>,
    count: usize,
}

impl<'a> Hooked<'a> {
    pub fn new(sampler: Sampler, hook: &'a mut dyn FnMut(usize, &SimState) -> Result<()>) -> Self {
        Hooked { sampler, hook, count: 0 }
    }
}

impl Observer for Hooked<'_> {
    fn observe(&mut self, dynamics: &Dynamics, state: &SimState) -> Result<()> {
        self.sampler.observe(dynamics, state)?;
        (self.hook)(self.count, state)?;
        self.count += 1;
        Ok(())
    }
}

/// Two trajectories stepped in lockstep; `couple` may edit the second state
/// after every step. `sample` sees both states every `every` steps,
/// including the start. Blow-up of either is an error.
pub(crate) fn run_pair(
    cfg: &ExperimentConfig,
    da: &Dynamics,
    db: &Dynamics,
    a0: SimState,
    b0: SimState,
    couple: &dyn Fn(&SimState, &mut SimState),
    sample: &mut dyn FnMut(&SimState, &SimState),
) -> Result<(SimState, SimState)> {
    let n = whole_steps(cfg.t_end, cfg.dt)?;
    if n % cfg.sample_every != 0 {
        return Err(Error::Config(format!("{} steps per sample does not divide the {n} steps of the run", cfg.sample_every)));
    }
    let sa = Stepper::new(da, cfg.dt)?;
    let sb = Stepper::new(db, cfg.dt)?;
    let (mut a, mut b) = (a0, b0);
    couple(&a, &mut b);
    sample(&a, &b);
    for i in 1..=n {
        a = sa.step(da, &a)?;
        b = sb.step(db, &b)?;
        let t = i as f64 * cfg.dt;
        a.t = t;
        b.t = t;
        couple(&a, &mut b);
        if i % cfg.sample_every == 0 {
            sample(&a, &b);
        }
    }
    Ok((a, b))
}

/// Keep only lattice modes with `|m| ≤ radius`.
pub(crate) fn low_pass(v: &SpectralField, radius: f64) -> SpectralField {
    let mut out = v.clone();
    mask(&mut out, radius, true);
    out
}

/// Overwrite the modes `|m| ≤ radius` of `dst` with those of `src`.
pub(crate) fn insert_low(dst: &mut SpectralField, src: &SpectralField, radius: f64) {
    let g = src.grid().clone();
    let r2 = radius * radius;
    for (d, s) in dst.comps_mut().iter_mut().zip(src.comps()) {
        for idx in 0..g.len() {
            if lattice_r2(&g, idx) <= r2 {
                d[idx] = s[idx];
            }
        }
    }
}

fn lattice_r2(g: &Grid, idx: usize) -> f64 {
    g.lattice(idx).iter().map(|x| (x * x) as f64).sum()
}

fn mask(v: &mut SpectralField, radius: f64, keep_low: bool) {
    let g = v.grid().clone();
    let r2 = radius * radius;
    for c in v.comps_mut() {
        for (idx, z) in c.iter_mut().enumerate() {
            if (lattice_r2(&g, idx) <= r2) != keep_low {
                *z = Default::default();
            }
        }
    }
}

/// Retained lattice modes with `0 < |m| ≤ radius`.
pub(crate) fn mode_count(g: &Grid, radius: f64) -> usize {
    g.retained().filter(|&i| lattice_r2(g, i) <= radius * radius).count()
}

/// Least-squares slope of `y` against `x`.
pub(crate) fn ls_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
