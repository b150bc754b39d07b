use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::common::{gap_sq, pool, run_pair};
use super::config::{ExperimentConfig, ExperimentKind};
use super::convergence::expect_kind;
use super::report::{assertions_text, opt, text_table, tsv, Assertion};
use crate::error::{Error, Result};
use crate::regime::{check_theorem, TheoremId, Verdict};
use crate::spectral::{random_divfree_field, sobolev_norm};
use crate::timestep::{Dynamics, SimState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwinRow {
    /// Requested initial gap.
    pub delta0: f64,
    /// Measured `‖u1(0) − u2(0)‖_{−θ2}`.
    pub initial_gap: f64,
    /// Gap over initial gap at `t = 0`; `None` when the runs coincide.
    pub ratio_at_0: Option<f64>,
    pub terminal_gap: f64,
    pub terminal_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwinReport {
    pub model: String,
    /// Which uniqueness statement covers data in `V^{−θ2}`.
    pub regime: String,
    pub rows: Vec<TwinRow>,
    pub assertions: Vec<Assertion>,
}

impl TwinReport {
    fn cells(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    format!("{}", r.delta0),
                    format!("{:.6e}", r.initial_gap),
                    opt(r.ratio_at_0),
                    format!("{:.6e}", r.terminal_gap),
                    opt(r.terminal_ratio),
                    opt(r.max_ratio),
                ]
            })
            .collect()
    }

    pub fn render(&self) -> String {
        let mut s = format!("twin runs for {} ({})\n", self.model, self.regime);
        s += &text_table(&["delta0", "gap(0)", "ratio(0)", "gap(T)", "ratio(T)", "max ratio"], &self.cells());
        s + &assertions_text(&self.assertions)
    }

    pub fn table_tsv(&self) -> String {
        tsv(&["delta0", "initial_gap", "ratio_at_0", "terminal_gap", "terminal_ratio", "max_ratio"], &self.cells())
    }
}

/// Two runs whose initial data differ by `δ₀ w` with `‖w‖_{−θ2} = 1`.
pub fn run_twin(cfg: &ExperimentConfig) -> Result<TwinReport> {
    expect_kind(cfg, ExperimentKind::TwinRun)?;
    let grid = cfg.grid.build()?;
    let p = cfg.model.resolve(cfg.grid.dims)?;
    let n = p.n_dim;
    let a = check_theorem(TheoremId::UniquenessA, &p, n, None)?;
    let regime = if a.verdict == Verdict::Holds {
        "uniqueness-a".to_string()
    } else {
        let b = check_theorem(TheoremId::UniquenessB, &p, n, Some(-p.theta2))?;
        if b.verdict != Verdict::Holds {
            return Err(Error::Refused(format!(
                "{}: no uniqueness result covers data in V^-θ2 (admissible β: {})",
                p.label,
                b.admissible.map(|s| s.text).unwrap_or_default()
            )));
        }
        format!("uniqueness-b at β = {}", -p.theta2)
    };
    let s = -p.theta2;
    let d = Dynamics::new(&p, &grid, &cfg.forcing)?;
    let u0 = cfg.init_spec().realize(&grid, p.blocks())?;
    let mut w = random_divfree_field(&grid, cfg.seed.wrapping_add(7), -2.0, 1.0);
    w.scale(1.0 / sobolev_norm(&w, s));

    let rows = pool(cfg.jobs)?.install(|| {
        cfg.sweep
            .par_iter()
            .map(|&delta| -> Result<TwinRow> {
                let mut v0 = u0.clone();
                v0.fields[0].axpy(delta, &w);
                let mut gaps = vec![];
                let mut sample = |a: &SimState, b: &SimState| gaps.push(gap_sq(&a.fields, &b.fields, s).sqrt());
                run_pair(cfg, &d, &d, u0.clone(), v0, &|_, _| {}, &mut sample)?;
                let g0 = gaps[0];
                let ratio = |g: f64| (g0 > 0.0).then(|| g / g0);
                Ok(TwinRow {
                    delta0: delta,
                    initial_gap: g0,
                    ratio_at_0: ratio(g0),
                    terminal_gap: *gaps.last().expect("samples"),
                    terminal_ratio: ratio(*gaps.last().expect("samples")),
                    max_ratio: ratio(gaps.iter().copied().fold(0.0, f64::max)),
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut assertions = vec![
        Assertion::new(
            "ratio is 1 at t = 0",
            rows.iter().all(|r| r.ratio_at_0.map_or(r.initial_gap == 0.0, |x| x == 1.0)),
            "φ(0) = 1".into(),
        ),
        Assertion::new(
            "ratio stays finite",
            rows.iter().all(|r| r.max_ratio.map_or(r.terminal_gap == 0.0, f64::is_finite)),
            format!("max {}", opt(rows.iter().filter_map(|r| r.max_ratio).reduce(f64::max))),
        ),
    ];
    let pos: Vec<&TwinRow> = rows.iter().filter(|r| r.initial_gap > 0.0).collect();
    if pos.len() >= 2 {
        let worst = pos
            .windows(2)
            .map(|w| (w[0].terminal_ratio.unwrap() / w[1].terminal_ratio.unwrap() - 1.0).abs())
            .fold(0.0, f64::max);
        assertions.push(Assertion::new(
            "linear response",
            worst <= 0.05,
            format!("terminal gaps scale with δ₀ to {:.3}% (limit 5%)", 100.0 * worst),
        ));
    }
    Ok(TwinReport { model: p.label.clone(), regime, rows, assertions })
}
