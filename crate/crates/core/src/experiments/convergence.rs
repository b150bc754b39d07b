use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::common::{gap_sq, ls_slope, pool, Hooked};
use super::config::{ExperimentConfig, ExperimentKind};
use super::report::{assertions_text, opt, text_table, tsv, Assertion};
use crate::diagnostics::Sampler;
use crate::error::{Error, Result};
use crate::regime::{check_theorem, custom, TheoremId, Verdict};
use crate::spectral::{Family, Grid, MultiplierSpec, SpectralField};
use crate::timestep::{integrate, Dynamics, ModelParams, SimState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub value: f64,
    /// `max_t ‖u_value(t) − u_ref(t)‖₀` over the samples.
    pub deviation: f64,
    pub blow_up: Option<f64>,
}

/// Deviation of a family of runs from a reference run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub kind: ExperimentKind,
    pub model: String,
    /// `alpha` or `nu`.
    pub parameter: String,
    pub reference: f64,
    /// Hypotheses of the perturbation theorem, checked on the symbols.
    pub hypotheses: Vec<String>,
    pub rows: Vec<ConvergenceRow>,
    /// Fitted slope of `log deviation` against `log value` over nonzero values.
    pub slope: Option<f64>,
    pub assertions: Vec<Assertion>,
}

impl ConvergenceReport {
    fn cells(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| vec![format!("{}", r.value), format!("{:.6e}", r.deviation), opt(r.blow_up)])
            .collect()
    }

    pub fn render(&self) -> String {
        let mut s = format!("{} for {} (reference {} = {})\n", self.kind.as_str(), self.model, self.parameter, self.reference);
        for h in &self.hypotheses {
            s += &format!("  {h}\n");
        }
        s += &text_table(&[&self.parameter, "deviation", "blow-up"], &self.cells());
        s += &format!("fitted slope: {}\n", opt(self.slope));
        s + &assertions_text(&self.assertions)
    }

    pub fn table_tsv(&self) -> String {
        tsv(&[&self.parameter, "deviation", "blow_up"], &self.cells())
    }
}

fn alpha_dependent(s: &MultiplierSpec) -> bool {
    !matches!(s.family, Family::Identity | Family::FractionalLaplacian)
}

/// `sup_k` of `f(k)` over retained modes.
fn sup_over(grid: &Grid, f: impl Fn(f64) -> f64) -> f64 {
    grid.retained().map(|i| f(grid.k2()[i])).fold(0.0, f64::max)
}

/// NS-α-type sweep: `N_α → N_0`, checked as `N_α^{-1}` bounded from
/// `V^{s}` to `V^{s−2}` and `N_α^{-1} N_0 − I → 0` in the same pair of spaces.
fn alpha_hypotheses(base: &ModelParams, values: &[f64], grid: &Grid) -> Vec<String> {
    let n0 = base.with_alpha(0.0).selector.n_spec;
    let m0 = base.with_alpha(0.0).selector.m_spec;
    let mut out = vec![];
    for &a in values {
        let p = base.with_alpha(a);
        let (n, m) = (p.selector.n_spec, p.selector.m_spec);
        let inv = sup_over(grid, |k2| 1.0 / (n.symbol(k2) * (1.0 + k2)));
        let to_id = sup_over(grid, |k2| (n0.symbol(k2) / n.symbol(k2) - 1.0).abs() / (1.0 + k2));
        let m_gap = sup_over(grid, |k2| (m.symbol(k2) - m0.symbol(k2)).abs() / (1.0 + k2));
        out.push(format!(
            "α = {a}: sup (1+|k|²)^-1/n_α = {inv:.4e} (N_α^-1 bounded V^s → V^(s-2)); \
             sup |n_0/n_α − 1|(1+|k|²)^-1 = {to_id:.4e} (N_α^-1 N → I); sup |m_α − m_0|(1+|k|²)^-1 = {m_gap:.4e}"
        ));
    }
    out
}

fn nu_hypotheses(base: &ModelParams, values: &[f64], grid: &Grid) -> Vec<String> {
    let a = base.a_spec.with_coefficient(1.0);
    values
        .iter()
        .map(|&nu| {
            let s = sup_over(grid, |k2| nu * a.symbol(k2) / (1.0 + k2).powf(base.theta));
            format!("ν = {nu}: sup ν a(k)(1+|k|²)^-θ = {s:.4e} (A_ν → 0 from V^θ to V^-θ)")
        })
        .collect()
}

/// The linear perturbation theorem needs the inviscid model's form to be
/// bounded at `σ = (−θ2, −θ2)`; that is the existence hypothesis at `θ = 0`.
fn inviscid_admissible(base: &ModelParams) -> Result<()> {
    let inviscid = custom(0.0, base.theta1, base.theta2, base.form());
    let c = check_theorem(TheoremId::ExistenceA, &inviscid, base.n_dim, None)?;
    if c.verdict != Verdict::Holds {
        return Err(Error::Refused(format!(
            "{}: the inviscid model fails the boundedness hypothesis of the vanishing-viscosity \
             perturbation theorem (b on V^-θ2 × V^-θ2 × V^γ), so its inviscid limit is not covered",
            base.label
        )));
    }
    Ok(())
}

fn sweep(
    cfg: &ExperimentConfig,
    grid: &Grid,
    reference: &ModelParams,
    member: &(dyn Fn(f64) -> ModelParams + Sync),
) -> Result<Vec<ConvergenceRow>> {
    let state0 = cfg.init_spec().realize(grid, reference.blocks())?;
    let dref = Dynamics::new(reference, grid, &cfg.forcing)?;
    let mut ref_states: Vec<Vec<SpectralField>> = vec![];
    let mut hook = |_: usize, s: &SimState| {
        ref_states.push(s.fields.clone());
        Ok(())
    };
    let mut obs = Hooked::new(Sampler::for_dynamics(&dref, &[]), &mut hook);
    let end = integrate(&dref, &state0, cfg.t_end, cfg.dt, cfg.sample_every, &mut obs)?;
    if let Some(t) = end.blow_up {
        return Err(Error::BlowUp { t });
    }
    let ref_states = &ref_states;
    let rows = pool(cfg.jobs)?.install(|| {
        cfg.sweep
            .par_iter()
            .map(|&v| -> Result<ConvergenceRow> {
                let d = Dynamics::new(&member(v), grid, &cfg.forcing)?;
                let mut deviation = 0.0f64;
                let mut hook = |i: usize, s: &SimState| {
                    deviation = deviation.max(gap_sq(&s.fields, &ref_states[i], 0.0).sqrt());
                    Ok(())
                };
                let mut obs = Hooked::new(Sampler::for_dynamics(&d, &[]), &mut hook);
                let end = integrate(&d, &state0, cfg.t_end, cfg.dt, cfg.sample_every, &mut obs)?;
                drop(obs);
                Ok(ConvergenceRow { value: v, deviation, blow_up: end.blow_up })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(rows)
}

fn finish(kind: ExperimentKind, model: &str, parameter: &str, hypotheses: Vec<String>, rows: Vec<ConvergenceRow>) -> ConvergenceReport {
    let (x, y): (Vec<f64>, Vec<f64>) =
        rows.iter().filter(|r| r.value > 0.0 && r.deviation > 0.0 && r.blow_up.is_none()).map(|r| (r.value.ln(), r.deviation.ln())).unzip();
    let slope = ls_slope(&x, &y);
    // order by decreasing parameter and require strictly decreasing deviations
    let mut sorted: Vec<&ConvergenceRow> = rows.iter().collect();
    sorted.sort_by(|a, b| b.value.total_cmp(&a.value));
    let decreasing = sorted.windows(2).all(|w| w[1].deviation < w[0].deviation);
    let clean = rows.iter().all(|r| r.blow_up.is_none());
    let assertions = vec![
        Assertion::new("no blow-up", clean, format!("{} runs", rows.len())),
        Assertion::new(
            "deviation decreases with the parameter",
            decreasing,
            sorted.iter().map(|r| format!("{:.3e}", r.deviation)).collect::<Vec<_>>().join(" > "),
        ),
    ];
    ConvergenceReport { kind, model: model.into(), parameter: parameter.into(), reference: 0.0, hypotheses, rows, slope, assertions }
}

/// Runs at each `α` in the sweep against the `α = 0` model.
pub fn run_alpha_sweep(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    expect_kind(cfg, ExperimentKind::AlphaSweep)?;
    let grid = cfg.grid.build()?;
    let base = cfg.model.resolve(cfg.grid.dims)?;
    let sel = &base.selector;
    if !(alpha_dependent(&sel.m_spec) || alpha_dependent(&sel.n_spec)) {
        return Err(Error::Config(format!("{} has no α-dependent M or N to sweep", base.label)));
    }
    let hyp = alpha_hypotheses(&base, &cfg.sweep, &grid);
    let reference = base.with_alpha(0.0);
    let rows = sweep(cfg, &grid, &reference, &|a| base.with_alpha(a))?;
    Ok(finish(ExperimentKind::AlphaSweep, &base.label, "alpha", hyp, rows))
}

/// Runs at each `ν` in the sweep against the inviscid model.
pub fn run_inviscid_limit(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    expect_kind(cfg, ExperimentKind::InviscidLimit)?;
    let grid = cfg.grid.build()?;
    let base = cfg.model.resolve(cfg.grid.dims)?;
    inviscid_admissible(&base)?;
    let hyp = nu_hypotheses(&base, &cfg.sweep, &grid);
    let with = |nu: f64| {
        let p = base.with_nu(nu);
        if p.is_mhd() {
            p.with_eta(nu)
        } else {
            p
        }
    };
    let reference = with(0.0);
    let rows = sweep(cfg, &grid, &reference, &with)?;
    Ok(finish(ExperimentKind::InviscidLimit, &base.label, "nu", hyp, rows))
}

pub(crate) fn expect_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    if cfg.kind != kind {
        return Err(Error::Config(format!("config is for {}, not {}", cfg.kind.as_str(), kind.as_str())));
    }
    cfg.validate()
}
