use proptest::prelude::*;

use regflow::diagnostics::{energy_budget_residual, Quadrature, Sampler};
use regflow::regime::{preset, PRESET_NAMES};
use regflow::spectral::{sobolev_norm, Grid};
use regflow::timestep::{integrate, Dynamics, ForcingSpec, InitSpec, SimState, Stepper};
use regflow::Result;

fn init(seed: u64, slope: f64) -> InitSpec {
    InitSpec::Random { seed, slope, amplitude: 1.0, magnetic_amplitude: None }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn steps_stay_solenoidal_and_mean_free(name in prop::sample::select(PRESET_NAMES.to_vec()), seed in any::<u64>()) {
        let g = Grid::new(2, 16).unwrap();
        let p = preset(name).unwrap().with_dims(2);
        let d = Dynamics::new(&p, &g, &ForcingSpec::steady_band(1.0, 3.0, 0.5, seed)).unwrap();
        let s0 = init(seed, -1.0).realize(&g, p.blocks()).unwrap();
        let mean = g.index_of(&[0, 0]);
        let mut check = |_: &Dynamics, s: &SimState| -> Result<()> {
            for f in &s.fields {
                assert!(f.divergence_residual() < 1e-12);
                for c in f.comps() {
                    assert_eq!(c[mean].norm(), 0.0);
                    assert!(c.iter().zip(g.keep()).all(|(z, &k)| k || z.norm() == 0.0));
                }
            }
            Ok(())
        };
        let end = integrate(&d, &s0, 0.02, 2e-3, 1, &mut check).unwrap();
        prop_assert!(end.blow_up.is_none());
    }
}

#[test]
fn budget_residual_is_fourth_order_for_every_preset() {
    let g = Grid::new(2, 32).unwrap();
    for name in PRESET_NAMES {
        let p = preset(name).unwrap().with_dims(2);
        let d = Dynamics::new(&p, &g, &ForcingSpec::steady_band(1.0, 3.0, 1.0, 5)).unwrap();
        let s0 = init(4, -1.5).realize(&g, p.blocks()).unwrap();
        let res: Vec<f64> = [4e-3, 2e-3]
            .iter()
            .map(|&dt| {
                let mut s = Sampler::for_dynamics(&d, &[]);
                integrate(&d, &s0, 0.16, dt, 2, &mut s).unwrap();
                let gaps = s.record.len() - 1;
                energy_budget_residual(&s.record, gaps, Quadrature::Simpson).unwrap()[0].abs()
            })
            .collect();
        let ratio = res[0] / res[1];
        assert!((10.0..=24.0).contains(&ratio), "{name}: residuals {res:?}, ratio {ratio}");
    }
}

#[test]
fn ideal_runs_retrace_their_path() {
    let g = Grid::new(2, 32).unwrap();
    let p = preset("NSE").unwrap().with_dims(2).with_nu(0.0);
    let d = Dynamics::new(&p, &g, &ForcingSpec::zero()).unwrap();
    let s0 = init(8, -2.0).realize(&g, 1).unwrap();
    let err = |dt: f64| {
        let (fwd, back) = (Stepper::new(&d, dt).unwrap(), Stepper::new(&d, -dt).unwrap());
        let n = (0.5 / dt).round() as usize;
        let mut s = s0.clone();
        for _ in 0..n {
            s = fwd.step(&d, &s).unwrap();
        }
        for _ in 0..n {
            s = back.step(&d, &s).unwrap();
        }
        sobolev_norm(&s.fields[0].sub(&s0.fields[0]), 0.0)
    };
    let (e1, e2) = (err(1e-2), err(5e-3));
    assert!(e1 < 1e-6, "return error {e1}");
    assert!(e1 / e2 > 12.0, "return errors {e1:e}, {e2:e}");
}
