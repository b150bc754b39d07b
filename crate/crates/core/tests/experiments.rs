use regflow::experiments::{run, ExperimentConfig, ExperimentKind, ExperimentReport, ModelConfig};
use regflow::timestep::{ForcingSpec, InitSpec};
use regflow::Error;

fn small(kind: ExperimentKind, model: &str, sweep: &[f64]) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(kind, model, 5e-3, 0.1);
    c.grid.res = Some(16);
    c.sample_every = 5;
    c.sweep = sweep.to_vec();
    c.init = Some(InitSpec::Random { seed: 7, slope: -3.0, amplitude: 0.5, magnetic_amplitude: None });
    c
}

#[test]
fn inviscid_limit_refuses_models_without_inviscid_existence() {
    for m in ["ML-α", "NS-α"] {
        let c = small(ExperimentKind::InviscidLimit, m, &[0.1, 0.05]);
        assert!(matches!(run(&c), Err(Error::Refused(_))), "{m} should be refused");
    }
    for m in ["SBM", "Leray-α"] {
        let c = small(ExperimentKind::InviscidLimit, m, &[0.1, 0.05]);
        let ExperimentReport::Convergence(r) = run(&c).unwrap() else { panic!("wrong report") };
        assert!(r.rows.iter().all(|row| row.blow_up.is_none() && row.deviation.is_finite()), "{m}");
    }
}

#[test]
fn zero_alpha_member_matches_reference() {
    let c = small(ExperimentKind::AlphaSweep, "NS-α", &[0.2, 0.0]);
    let ExperimentReport::Convergence(r) = run(&c).unwrap() else { panic!("wrong report") };
    let zero = r.rows.iter().find(|row| row.value == 0.0).unwrap();
    assert_eq!(zero.deviation, 0.0);
    assert!(r.rows.iter().find(|row| row.value == 0.2).unwrap().deviation > 0.0);
}

#[test]
fn alpha_sweep_needs_alpha_dependent_model() {
    let c = small(ExperimentKind::AlphaSweep, "NSE", &[0.2, 0.1]);
    assert!(run(&c).is_err());
}

#[test]
fn twin_run_with_zero_gap_stays_together() {
    let mut c = small(ExperimentKind::TwinRun, "Leray-α", &[0.0, 1e-4]);
    c.forcing = ForcingSpec::steady_band(1.0, 3.0, 0.5, 9);
    let ExperimentReport::Twin(r) = run(&c).unwrap() else { panic!("wrong report") };
    let z = r.rows.iter().find(|row| row.delta0 == 0.0).unwrap();
    assert_eq!(z.terminal_gap, 0.0);
    assert!(z.ratio_at_0.is_none());
    let p = r.rows.iter().find(|row| row.delta0 > 0.0).unwrap();
    assert_eq!(p.ratio_at_0, Some(1.0));
    assert!((p.initial_gap / 1e-4 - 1.0).abs() < 1e-9);
}

#[test]
fn twin_run_refused_without_uniqueness() {
    let mut c = small(ExperimentKind::TwinRun, "custom", &[1e-4]);
    c.model = ModelConfig { theta: Some(0.0), theta1: Some(0.0), theta2: Some(0.0), ..ModelConfig::named("custom") };
    assert!(matches!(run(&c), Err(Error::Refused(_))));
}

#[test]
fn reports_are_deterministic() {
    let mut c = small(ExperimentKind::AbsorbingBall, "Leray-α", &[1.0, 4.0]);
    c.forcing = ForcingSpec::steady_band(1.0, 2.5, 0.1, 2);
    c.jobs = Some(2);
    let a = serde_json::to_string(&run(&c).unwrap()).unwrap();
    let b = serde_json::to_string(&run(&c).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn config_round_trips_through_toml() {
    let mut c = small(ExperimentKind::DeterminingModes, "NSE", &[2.0, 4.0]);
    c.forcing = ForcingSpec::steady_band(1.0, 2.5, 0.5, 4);
    c.forcing_gap = Some([0.1, 1.0]);
    let text = c.to_toml().unwrap();
    let back = ExperimentConfig::from_toml(&text).unwrap();
    assert_eq!(back.to_toml().unwrap(), text);
    assert!(ExperimentConfig::from_toml(&format!("bogus = 1\n{text}")).is_err());
}

#[test]
fn written_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small(ExperimentKind::AbsorbingBall, "Leray-α", &[1.0]);
    c.forcing = ForcingSpec::steady_band(1.0, 2.5, 0.1, 2);
    let r = run(&c).unwrap();
    r.write(&c, dir.path()).unwrap();
    for f in ["config.toml", "absorbing-ball.tsv", "report.json", "run-0.tsv"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
}
