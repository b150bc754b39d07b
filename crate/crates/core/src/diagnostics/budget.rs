use serde::{Deserialize, Serialize};

use super::record::DiagnosticsRecord;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quadrature {
    Trapezoid,
    /// Composite Simpson; needs an even number of sample gaps per interval.
    #[default]
    Simpson,
}

fn integrate(y: &[f64], h: f64, rule: Quadrature) -> f64 {
    let m = y.len() - 1;
    match rule {
        Quadrature::Trapezoid => h * (0.5 * (y[0] + y[m]) + y[1..m].iter().sum::<f64>()),
        Quadrature::Simpson => {
            let inner: f64 = (1..m).map(|i| if i % 2 == 1 { 4.0 * y[i] } else { 2.0 * y[i] }).sum();
            h / 3.0 * (y[0] + y[m] + inner)
        }
    }
}

/// Residual of `d/dt⟨u,Nu⟩ + 2⟨Au,Nu⟩ = 2⟨f,Nu⟩` integrated over consecutive
/// intervals of `gaps` sample spacings:
/// `Δ⟨u,Nu⟩ + 2∫⟨Au,Nu⟩ − 2∫⟨f,Nu⟩`, one value per interval.
pub fn energy_budget_residual(rec: &DiagnosticsRecord, gaps: usize, rule: Quadrature) -> Result<Vec<f64>> {
    if gaps < 4 {
        return Err(Error::Config(format!("need at least 4 sample gaps per budget interval, got {gaps}")));
    }
    if rule == Quadrature::Simpson && gaps % 2 != 0 {
        return Err(Error::Config(format!("Simpson's rule needs an even number of gaps, got {gaps}")));
    }
    if rec.len() < gaps + 1 {
        return Err(Error::Config(format!("record has {} samples, one interval needs {}", rec.len(), gaps + 1)));
    }
    let h = rec.spacing()?;
    let e = rec.get("u_nu")?;
    let a = rec.get("au_nu")?;
    let f = rec.get("f_nu")?;
    let mut out = vec![];
    let mut i = 0;
    while i + gaps < rec.len() {
        let r = i..=i + gaps;
        out.push(e[i + gaps] - e[i] + 2.0 * integrate(&a[r.clone()], h, rule) - 2.0 * integrate(&f[r], h, rule));
        i += gaps;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_on_polynomials() {
        let h = 0.25;
        let y: Vec<f64> = (0..=4).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((integrate(&y, h, Quadrature::Simpson) - 0.25).abs() < 1e-15);
        let lin: Vec<f64> = (0..=4).map(|i| 1.0 + i as f64 * h).collect();
        assert!((integrate(&lin, h, Quadrature::Trapezoid) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn exact_budget_has_no_residual() {
        // ⟨u,Nu⟩ = e^{-2t}, ⟨Au,Nu⟩ = e^{-2t}, f = 0, sampled finely
        let h = 1e-3;
        let times: Vec<f64> = (0..=400).map(|i| i as f64 * h).collect();
        let e: Vec<f64> = times.iter().map(|t| (-2.0 * t).exp()).collect();
        let mut rec = DiagnosticsRecord { times, ..Default::default() };
        rec.series.insert("u_nu".into(), e.clone());
        rec.series.insert("au_nu".into(), e);
        rec.series.insert("f_nu".into(), vec![0.0; 401]);
        let r = energy_budget_residual(&rec, 8, Quadrature::Simpson).unwrap();
        assert_eq!(r.len(), 50);
        assert!(r.iter().all(|x| x.abs() < 1e-13));
        assert!(energy_budget_residual(&rec, 3, Quadrature::Trapezoid).is_err());
        assert!(energy_budget_residual(&rec, 5, Quadrature::Simpson).is_err());
    }
}
