//! Desk-scale studies: parameter limits, absorbing balls, determining modes
//! and twin runs.
//!
//! An experiment is a TOML config ([`ExperimentConfig`]). Members of a sweep
//! run in parallel on a private thread pool and share grid, time step, seed and
//! forcing. Each study returns a report holding its table, the hypotheses it
//! checked and a list of [`Assertion`]s.
//!
//! Runs measure norm convergence at fixed resolution. The theorems behind
//! them speak of weak convergence of subsequences, so a passing sweep is
//! stronger evidence than needed, and a failing one says nothing about them.

mod ball;
mod common;
mod config;
mod convergence;
mod determine;
mod report;
mod twin;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use ball::{run_absorbing_ball, BallReport, BallRow};
pub use config::{ExperimentConfig, ExperimentKind, GridConfig, ModelConfig};
pub use convergence::{run_alpha_sweep, run_inviscid_limit, ConvergenceReport, ConvergenceRow};
pub use determine::{run_determining_modes, DeterminingReport, ModeRow};
pub use report::Assertion;
pub use twin::{run_twin, TwinReport, TwinRow};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentReport {
    Convergence(ConvergenceReport),
    AbsorbingBall(BallReport),
    DeterminingModes(DeterminingReport),
    Twin(TwinReport),
}

impl ExperimentReport {
    pub fn assertions(&self) -> &[Assertion] {
        match self {
            ExperimentReport::Convergence(r) => &r.assertions,
            ExperimentReport::AbsorbingBall(r) => &r.assertions,
            ExperimentReport::DeterminingModes(r) => &r.assertions,
            ExperimentReport::Twin(r) => &r.assertions,
        }
    }

    pub fn passed(&self) -> bool {
        self.assertions().iter().all(|a| a.passed)
    }

    pub fn render(&self) -> String {
        match self {
            ExperimentReport::Convergence(r) => r.render(),
            ExperimentReport::AbsorbingBall(r) => r.render(),
            ExperimentReport::DeterminingModes(r) => r.render(),
            ExperimentReport::Twin(r) => r.render(),
        }
    }

    fn table_tsv(&self) -> String {
        match self {
            ExperimentReport::Convergence(r) => r.table_tsv(),
            ExperimentReport::AbsorbingBall(r) => r.table_tsv(),
            ExperimentReport::DeterminingModes(r) => r.table_tsv(),
            ExperimentReport::Twin(r) => r.table_tsv(),
        }
    }

    /// Writes `config.toml` (the effective config), `<kind>.tsv`,
    /// `report.json` and, for absorbing-ball runs, one `run-<i>.tsv` per member.
    pub fn write(&self, cfg: &ExperimentConfig, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("config.toml"), cfg.to_toml()?)?;
        fs::write(dir.join(format!("{}.tsv", cfg.kind.as_str())), self.table_tsv())?;
        fs::write(dir.join("report.json"), serde_json::to_string_pretty(self)? + "\n")?;
        if let ExperimentReport::AbsorbingBall(r) = self {
            for (i, row) in r.rows.iter().enumerate() {
                row.record.write_tsv(&dir.join(format!("run-{i}.tsv")))?;
            }
        }
        Ok(())
    }
}

/// Dispatch on `cfg.kind`.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    Ok(match cfg.kind {
        ExperimentKind::AlphaSweep => ExperimentReport::Convergence(run_alpha_sweep(cfg)?),
        ExperimentKind::InviscidLimit => ExperimentReport::Convergence(run_inviscid_limit(cfg)?),
        ExperimentKind::AbsorbingBall => ExperimentReport::AbsorbingBall(run_absorbing_ball(cfg)?),
        ExperimentKind::DeterminingModes => ExperimentReport::DeterminingModes(run_determining_modes(cfg)?),
        ExperimentKind::TwinRun => ExperimentReport::Twin(run_twin(cfg)?),
    })
}
