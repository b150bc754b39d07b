use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde::{Deserialize, Serialize};

use regflow::diagnostics::{shell_spectrum, DiagnosticsRecord, Sampler};
use regflow::experiments::{self, ExperimentConfig, ExperimentKind, GridConfig, ModelConfig};
use regflow::regime::{check_theorem, full_report, preset, RegimeReport, TheoremCheck, TheoremId, PRESET_NAMES, TABLE_MODELS};
use regflow::spectral::{Family, Grid, MultiplierSpec, Snapshot, SpectralField};
use regflow::timestep::{checkpoint, integrate, Dynamics, ForcingSpec, InitSpec, Observer, RunManifest, SimState};
use regflow::{Error, Result};

use crate::{
    Command, DetermineArgs, ModelArgs, PresetsArgs, RegimeArgs, RunArgs, SimulateArgs, SpectrumArgs, SweepArgs,
    SweepKind,
};

pub fn exit_code(e: &Error) -> ExitCode {
    ExitCode::from(match e {
        Error::Config(_) | Error::GridMismatch(_) | Error::Multiplier(_) | Error::Refused(_) | Error::Format(_) => 2,
        Error::BlowUp { .. } => 3,
        Error::Assertion(_) => 4,
        Error::Io(_) => 1,
    })
}

pub fn dispatch(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Simulate(a) => simulate(a),
        Command::Regime(a) => regime(a),
        Command::Sweep(a) => sweep(a),
        Command::Determine(a) => determine(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Presets(a) => presets(a),
    }
}

fn out_dir(flag: &Option<PathBuf>, sub: &str) -> PathBuf {
    if let Some(p) = flag {
        return p.clone();
    }
    match std::env::var_os("REGFLOW_OUT") {
        Some(root) if !root.is_empty() => PathBuf::from(root).join(sub),
        _ => PathBuf::from("regflow-out").join(sub),
    }
}

fn apply_model(m: &mut ModelConfig, a: &ModelArgs) {
    if let Some(name) = &a.model {
        m.name = name.clone();
    }
    m.theta = a.theta.or(m.theta);
    m.theta1 = a.theta1.or(m.theta1);
    m.theta2 = a.theta2.or(m.theta2);
    if a.form.is_some() {
        m.form = a.form.clone();
    }
    m.alpha = a.alpha.or(m.alpha);
    m.nu = a.nu.or(m.nu);
    m.eta = a.eta.or(m.eta);
}

fn apply_grid(g: &mut GridConfig, grid: Option<usize>, dims: Option<usize>) {
    if let Some(d) = dims {
        g.dims = d;
    }
    if grid.is_some() {
        g.res = grid;
    }
}

/// Inline initial-data and forcing flags. A new seed also reseeds random
/// initial data taken from a config file.
fn apply_init_forcing(init: &mut Option<InitSpec>, forcing: &mut ForcingSpec, seed: u64, r: &RunArgs) -> Result<()> {
    if r.init_slope.is_some() || r.init_amplitude.is_some() || r.seed.is_some() {
        let (slope0, amp0, mag) = match init {
            Some(InitSpec::Random { slope, amplitude, magnetic_amplitude, .. }) => (*slope, *amplitude, *magnetic_amplitude),
            _ => (-2.0, 1.0, None),
        };
        *init = Some(InitSpec::Random {
            seed,
            slope: r.init_slope.unwrap_or(slope0),
            amplitude: r.init_amplitude.unwrap_or(amp0),
            magnetic_amplitude: mag,
        });
    }
    if r.forcing_amplitude.is_some() || r.forcing_band.is_some() {
        let band = r.forcing_band.clone().unwrap_or_else(|| vec![forcing.k_lo, forcing.k_hi]);
        if band.len() != 2 {
            return Err(Error::Config(format!("--forcing-band takes `lo,hi`, got {} value(s)", band.len())));
        }
        let amp = r.forcing_amplitude.unwrap_or(forcing.amplitude);
        *forcing = if amp == 0.0 { ForcingSpec::zero() } else { ForcingSpec::steady_band(band[0], band[1], amp, seed) };
    }
    Ok(())
}

/// Print to stdout; a closed pipe (`regflow ... | head`) is not an error.
fn emit(s: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

macro_rules! out {
    ($($t:tt)*) => { emit(&format!($($t)*)) };
}

macro_rules! outln {
    ($($t:tt)*) => { emit(&format!("{}\n", format_args!($($t)*))) };
}

// ---------------------------------------------------------------------------
// simulate

/// Config-file schema of `simulate`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateConfig {
    #[serde(default)]
    model: ModelConfig,
    #[serde(default)]
    grid: GridConfig,
    #[serde(default = "default_dt")]
    dt: f64,
    #[serde(default = "default_t_end")]
    t_end: f64,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_every")]
    sample_every: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    init: Option<InitSpec>,
    #[serde(default)]
    forcing: ForcingSpec,
    #[serde(default = "default_norms")]
    norms: Vec<f64>,
    #[serde(default)]
    snapshot_every: usize,
}

fn default_dt() -> f64 {
    1e-3
}
fn default_t_end() -> f64 {
    1.0
}
fn default_every() -> usize {
    10
}
fn default_norms() -> Vec<f64> {
    vec![-1.0, 0.0, 1.0]
}

impl Default for SimulateConfig {
    fn default() -> Self {
        toml::from_str("").expect("all fields have defaults")
    }
}

fn read_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn simulate_config(a: &SimulateArgs) -> Result<SimulateConfig> {
    let mut c: SimulateConfig = match &a.run.config {
        Some(p) => read_toml(p)?,
        None => SimulateConfig::default(),
    };
    apply_model(&mut c.model, &a.model);
    apply_grid(&mut c.grid, a.run.grid, a.run.dims);
    c.dt = a.run.dt.unwrap_or(c.dt);
    c.t_end = a.run.t_end.unwrap_or(c.t_end);
    c.seed = a.run.seed.unwrap_or(c.seed);
    c.sample_every = a.run.every.unwrap_or(c.sample_every);
    apply_init_forcing(&mut c.init, &mut c.forcing, c.seed, &a.run)?;
    if let Some(n) = &a.norms {
        c.norms = n.clone();
    }
    c.snapshot_every = a.snapshot_every.unwrap_or(c.snapshot_every);
    Ok(c)
}

struct RunObserver<'a> {
    sampler: Sampler,
    snapshot_every: usize,
    dir: &'a Path,
    count: usize,
}

impl Observer for RunObserver<'_> {
    fn observe(&mut self, dynamics: &Dynamics, state: &SimState) -> Result<()> {
        self.sampler.observe(dynamics, state)?;
        let i = self.count;
        self.count += 1;
        if i == 0 || (self.snapshot_every > 0 && i % self.snapshot_every == 0) {
            checkpoint(dynamics, state).write(&self.dir.join(format!("state-{i:05}.snap")))?;
        }
        Ok(())
    }
}

fn spectrum_tsv(fields: &[SpectralField]) -> String {
    let specs: Vec<Vec<f64>> = fields.iter().map(shell_spectrum).collect();
    let mut out = String::from(if fields.len() == 2 { "k\tE_u\tE_h\n" } else { "k\tE\n" });
    for k in 0..specs[0].len() {
        let _ = write!(out, "{k}");
        for s in &specs {
            let _ = write!(out, "\t{:.17e}", s[k]);
        }
        out.push('\n');
    }
    out
}

fn simulate(a: SimulateArgs) -> Result<ExitCode> {
    let c = simulate_config(&a)?;
    let params = c.model.resolve(c.grid.dims)?;
    let grid = c.grid.build()?;
    let init = c.init.clone().unwrap_or(InitSpec::Random { seed: c.seed, slope: -2.0, amplitude: 1.0, magnetic_amplitude: None });
    let dynamics = Dynamics::new(&params, &grid, &c.forcing)?;
    let state0 = init.realize(&grid, params.blocks())?;

    let dir = out_dir(&a.run.out, "simulate");
    let snaps = dir.join("snapshots");
    fs::create_dir_all(&snaps)?;
    fs::write(dir.join("config.toml"), toml::to_string(&c).map_err(|e| Error::Format(e.to_string()))?)?;
    let manifest = RunManifest {
        params: params.clone(),
        grid: grid.spec(),
        forcing: c.forcing.clone(),
        init: init.clone(),
        dt: c.dt,
        t_end: c.t_end,
        sample_every: c.sample_every,
        seed: c.seed,
        crate_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    manifest.write(&dir.join("manifest.json"))?;

    let mut obs = RunObserver {
        sampler: Sampler::for_dynamics(&dynamics, &c.norms),
        snapshot_every: c.snapshot_every,
        dir: &snaps,
        count: 0,
    };
    let end = integrate(&dynamics, &state0, c.t_end, c.dt, c.sample_every, &mut obs)?;
    checkpoint(&dynamics, &end.state).write(&snaps.join("final.snap"))?;
    let rec = obs.sampler.record;
    rec.write_tsv(&dir.join("diagnostics.tsv"))?;
    fs::write(dir.join("spectrum.tsv"), spectrum_tsv(&end.state.fields))?;

    out!("{}", simulate_summary(&params.label, &grid, &c, &rec, &end.state, end.steps, dynamics.cfl_number(&end.state, c.dt)));
    outln!("output: {}", dir.display());
    match end.blow_up {
        Some(t) => {
            eprintln!("regflow: numerical blow-up at t = {t}; data up to t = {} written", end.state.t);
            Ok(ExitCode::from(3))
        }
        None => Ok(ExitCode::SUCCESS),
    }
}

fn simulate_summary(
    label: &str,
    grid: &Grid,
    c: &SimulateConfig,
    rec: &DiagnosticsRecord,
    last: &SimState,
    steps: usize,
    cfl: f64,
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "model      {label}");
    let _ = writeln!(s, "grid       {}^{}", grid.res(), grid.n_dim());
    let _ = writeln!(s, "dt         {}", c.dt);
    let _ = writeln!(s, "steps      {steps}");
    let _ = writeln!(s, "t reached  {}", last.t);
    let _ = writeln!(s, "samples    {}", rec.len());
    if let Ok(e) = rec.get("energy") {
        let _ = writeln!(s, "energy     {:.6e} -> {:.6e}", e[0], e[e.len() - 1]);
    }
    if let Ok(h) = rec.get("cross_helicity") {
        let _ = writeln!(s, "cross hel. {:.6e} -> {:.6e}", h[0], h[h.len() - 1]);
    }
    let _ = writeln!(s, "final CFL  {cfl:.3}");
    s
}

// ---------------------------------------------------------------------------
// regime

fn regime_params(a: &ModelArgs, n: usize) -> Result<regflow::timestep::ModelParams> {
    let mut m = ModelConfig::named("NSE");
    apply_model(&mut m, a);
    // the solver only runs in 2D or 3D; the theorems take any n
    m.resolve(if n == 2 { 2 } else { 3 })
}

fn verdict_line(c: &TheoremCheck) -> String {
    let set = c.admissible.as_ref().map(|s| s.text.clone()).unwrap_or_else(|| "-".into());
    format!("{:<28} {:<15} {:<40} remark: {}", c.theorem.as_str(), c.verdict.as_str(), set, c.remark.verdict.as_str())
}

fn render_report(r: &RegimeReport) -> String {
    let p = &r.params;
    let t = &r.table;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{}: θ = {}, θ1 = {}, θ2 = {}, form {}, n = {}{}",
        p.label,
        p.theta,
        p.theta1,
        p.theta2,
        p.form,
        p.n,
        if p.exact { "" } else { " (inexact exponents)" }
    );
    let _ = writeln!(s, "existence: a = {}, b = {}, γ = {}, p = {}", t.a, t.b, t.gamma, t.p);
    if let Some(g) = &t.gamma_caption {
        let _ = writeln!(s, "existence γ (caption): {g}");
    }
    let _ = writeln!(s, "local existence: {}", t.local);
    let _ = writeln!(s, "uniqueness: {}", t.uniqueness);
    let _ = writeln!(s, "regularity: {}", t.regularity);
    s.push('\n');
    for c in r.verdicts.values() {
        let _ = writeln!(s, "{}", verdict_line(c));
    }
    s
}

fn render_check(c: &TheoremCheck) -> String {
    let mut s = verdict_line(c) + "\n";
    for (k, v) in &c.details {
        let _ = writeln!(s, "  {k}: {v}");
    }
    if let Some(at) = &c.remark.evaluated_at {
        let _ = writeln!(s, "  remark evaluated at {at}");
    }
    for i in &c.remark.inequalities {
        let holds = match i.holds {
            Some(true) => "ok",
            Some(false) => "FAILS",
            None => "?",
        };
        let slack = i.slack.map(|x| format!("{x:+.4}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "  [{holds:<5}] {:<48} slack {slack}{}", i.text, if i.boundary { " (boundary)" } else { "" });
    }
    s
}

fn regime(a: RegimeArgs) -> Result<ExitCode> {
    if a.n == 0 {
        return Err(Error::Config("--n must be positive".into()));
    }
    let params = regime_params(&a.model, a.n)?;
    match &a.theorem {
        Some(t) => {
            let id: TheoremId = t.parse()?;
            let c = check_theorem(id, &params, a.n, a.beta)?;
            if a.json {
                outln!("{}", serde_json::to_string_pretty(&c)?);
            } else {
                out!("{}", render_check(&c));
            }
        }
        None => {
            if a.beta.is_some() {
                return Err(Error::Config("--beta needs --theorem".into()));
            }
            let r = full_report(&params, a.n)?;
            if a.json {
                outln!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                out!("{}", render_report(&r));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// sweep and determine

fn experiment_config(kind: Option<ExperimentKind>, m: &ModelArgs, r: &RunArgs) -> Result<ExperimentConfig> {
    let mut c = match &r.config {
        Some(p) => {
            let mut c = ExperimentConfig::load(p)?;
            if let Some(k) = kind {
                c.kind = k;
            }
            c
        }
        None => {
            let k = kind.ok_or_else(|| Error::Config("give --kind or a --config file".into()))?;
            ExperimentConfig::new(k, "NSE", 1e-3, 1.0)
        }
    };
    apply_model(&mut c.model, m);
    apply_grid(&mut c.grid, r.grid, r.dims);
    c.dt = r.dt.unwrap_or(c.dt);
    c.t_end = r.t_end.unwrap_or(c.t_end);
    c.seed = r.seed.unwrap_or(c.seed);
    apply_init_forcing(&mut c.init, &mut c.forcing, c.seed, r)?;
    c.sample_every = r.every.unwrap_or(c.sample_every);
    if r.jobs.is_some() {
        c.jobs = r.jobs;
    }
    Ok(c)
}

fn run_experiment(c: ExperimentConfig, out: &Option<PathBuf>) -> Result<ExitCode> {
    c.validate()?;
    let report = experiments::run(&c)?;
    let dir = out_dir(out, c.kind.as_str());
    report.write(&c, &dir)?;
    out!("{}", report.render());
    outln!("output: {}", dir.display());
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        let failed: Vec<&str> = report.assertions().iter().filter(|x| !x.passed).map(|x| x.name.as_str()).collect();
        Err(Error::Assertion(failed.join("; ")))
    }
}

fn sweep(a: SweepArgs) -> Result<ExitCode> {
    let kind = a.kind.map(|k| match k {
        SweepKind::AlphaSweep => ExperimentKind::AlphaSweep,
        SweepKind::InviscidLimit => ExperimentKind::InviscidLimit,
        SweepKind::AbsorbingBall => ExperimentKind::AbsorbingBall,
        SweepKind::TwinRun => ExperimentKind::TwinRun,
    });
    let mut c = experiment_config(kind, &a.model, &a.run)?;
    if c.kind == ExperimentKind::DeterminingModes {
        return Err(Error::Config("determining-modes experiments run through `regflow determine`".into()));
    }
    if let Some(v) = a.values {
        c.sweep = v;
    }
    run_experiment(c, &a.run.out)
}

fn determine(a: DetermineArgs) -> Result<ExitCode> {
    let mut c = experiment_config(Some(ExperimentKind::DeterminingModes), &a.model, &a.run)?;
    if let Some(r) = a.radii {
        c.sweep = r;
    }
    if let Some(t) = a.tolerance {
        c.tolerance = t;
    }
    run_experiment(c, &a.run.out)
}

// ---------------------------------------------------------------------------
// spectrum

fn spectrum(a: SpectrumArgs) -> Result<ExitCode> {
    let fields: Vec<SpectralField> = match &a.snapshot {
        Some(p) => Snapshot::read(p)?.fields.into_iter().map(|(_, f)| f).collect(),
        None => {
            let mut g = GridConfig::default();
            apply_grid(&mut g, a.grid, a.dims);
            let grid = g.build()?;
            let blocks = preset(a.model.as_deref().unwrap_or("NSE"))?.blocks();
            let init = InitSpec::Random {
                seed: a.seed.unwrap_or(0),
                slope: a.init_slope.unwrap_or(-2.0),
                amplitude: 1.0,
                magnetic_amplitude: None,
            };
            init.realize(&grid, blocks)?.fields
        }
    };
    let tsv = spectrum_tsv(&fields);
    let mut rows = tsv.lines();
    let head: Vec<&str> = rows.next().unwrap_or_default().split('\t').collect();
    outln!("{}", head.iter().map(|h| format!("{h:>14}")).collect::<String>());
    for line in rows {
        let cells: Vec<&str> = line.split('\t').collect();
        let mut s = format!("{:>14}", cells[0]);
        for c in &cells[1..] {
            let v: f64 = c.parse().unwrap_or(f64::NAN);
            s += &format!("{v:>14.4e}");
        }
        outln!("{s}");
    }
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("spectrum.tsv"), tsv)?;
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// presets

fn describe(m: &MultiplierSpec) -> String {
    let c = if m.coefficient == 1.0 { String::new() } else { format!("{}·", m.coefficient) };
    match m.family {
        Family::Identity => format!("{c}I"),
        Family::FractionalLaplacian => {
            if m.exponent == 1.0 {
                format!("{c}(−Δ)")
            } else {
                format!("{c}(−Δ)^{}", m.exponent)
            }
        }
        Family::HelmholtzPower => format!("{c}(I−α²Δ)^{}", m.exponent),
        Family::FractionalHelmholtz => format!("{c}[I+(−α²Δ)^{}]^-1", m.exponent),
        Family::Rational => format!("{c}(−Δ)(I−α²Δ)^-1"),
    }
}

fn presets(a: PresetsArgs) -> Result<ExitCode> {
    let names: &[&str] = if a.all { &PRESET_NAMES } else { &TABLE_MODELS };
    let mut rows = vec![["model", "θ", "θ1", "θ2", "form", "M", "N", "A"].map(String::from).to_vec()];
    for name in names {
        let p = preset(name)?;
        rows.push(vec![
            p.label.clone(),
            p.theta.to_string(),
            p.theta1.to_string(),
            p.theta2.to_string(),
            p.selector.form.name(),
            describe(&p.selector.m_spec),
            describe(&p.selector.n_spec),
            describe(&p.a_spec),
        ]);
    }
    let widths: Vec<usize> = (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    for (i, r) in rows.iter().enumerate() {
        let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        outln!("{}", line.join("  ").trim_end());
        if i == 0 {
            outln!("{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
        }
    }
    outln!("defaults: α = {}, ν = η = {}", regflow::regime::presets::DEFAULT_ALPHA, regflow::regime::presets::DEFAULT_NU);
    Ok(ExitCode::SUCCESS)
}
