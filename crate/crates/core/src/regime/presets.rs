use crate::bilinear::{BilinearSelector, Form};
use crate::error::{Error, Result};
use crate::spectral::MultiplierSpec;
use crate::timestep::ModelParams;

/// Filter length and viscosity a preset starts with; both are overridable.
pub const DEFAULT_ALPHA: f64 = 0.2;
pub const DEFAULT_NU: f64 = 0.05;

/// Names accepted by [`preset`], in table order.
pub const PRESET_NAMES: [&str; 10] =
    ["NSE", "Leray-α", "ML-α", "SBM", "NSV", "NS-α", "NS-α-like", "MHD", "Leray-α-MHD", "MHD-α"];

/// The seven single-field models of the summary tables.
pub const TABLE_MODELS: [&str; 7] = ["NSE", "Leray-α", "ML-α", "SBM", "NSV", "NS-α", "NS-α-like"];

fn canonical(name: &str) -> String {
    name.trim()
        .to_ascii_lowercase()
        .replace("alpha", "α")
        .replace('_', "-")
        .replace(' ', "")
}

/// Parses `NS-α-like(θ,θ2)`; the bare name means `(1, 1)`.
fn like_args(c: &str) -> Option<Result<(f64, f64)>> {
    let rest = c.strip_prefix("ns-α-like")?;
    if rest.is_empty() {
        return Some(Ok((1.0, 1.0)));
    }
    let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')'));
    let parsed = inner.and_then(|s| {
        let v: Vec<f64> = s.split(',').map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().ok()?;
        (v.len() == 2).then(|| (v[0], v[1]))
    });
    Some(parsed.ok_or_else(|| Error::Config(format!("expected NS-α-like(θ,θ2), got `{c}`"))))
}

/// Model parameters for a named special case, in three dimensions, with
/// `α = 0.2` and `ν = η = 0.05`.
pub fn preset(name: &str) -> Result<ModelParams> {
    let c = canonical(name);
    let s = MultiplierSpec::helmholtz_inverse(DEFAULT_ALPHA);
    let id = MultiplierSpec::identity();
    let lap = MultiplierSpec::fractional_laplacian(DEFAULT_NU, 1.0);
    let mk = |label: &str, th: (f64, f64, f64), form: Form, a: MultiplierSpec, m: MultiplierSpec, n: MultiplierSpec| {
        ModelParams {
            label: label.to_string(),
            theta: th.0,
            theta1: th.1,
            theta2: th.2,
            alpha: DEFAULT_ALPHA,
            nu: DEFAULT_NU,
            eta: if form.blocks() == 2 { DEFAULT_NU } else { 0.0 },
            selector: BilinearSelector { form, m_spec: m, n_spec: n },
            a_spec: a,
            n_dim: 3,
        }
    };
    if let Some(args) = like_args(&c) {
        let (th, th2) = args?;
        if !(th.is_finite() && th >= 0.0 && th2.is_finite() && th2 >= 0.0) {
            return Err(Error::Config(format!("NS-α-like needs θ, θ2 >= 0, got ({th}, {th2})")));
        }
        let a = MultiplierSpec::fractional_laplacian(DEFAULT_NU, th);
        let n = MultiplierSpec::fractional_helmholtz(DEFAULT_ALPHA, th2);
        return Ok(mk(&format!("NS-α-like({th},{th2})"), (th, 0.0, th2), Form::B2, a, id, n));
    }
    let p = match c.as_str() {
        "nse" => mk("NSE", (1.0, 0.0, 0.0), Form::B1, lap, id, id),
        "leray-α" => mk("Leray-α", (1.0, 1.0, 0.0), Form::B1, lap, s, id),
        "ml-α" => mk("ML-α", (1.0, 0.0, 1.0), Form::B1, lap, id, s),
        "sbm" => mk("SBM", (1.0, 1.0, 1.0), Form::B1, lap, s, s),
        "nsv" => mk("NSV", (0.0, 1.0, 1.0), Form::B1, MultiplierSpec::rational(DEFAULT_NU, DEFAULT_ALPHA), s, s),
        "ns-α" => mk("NS-α", (1.0, 0.0, 1.0), Form::B2, lap, id, s),
        "leray-α-mhd" => mk("Leray-α-MHD", (1.0, 1.0, 0.0), Form::B3, lap, s, id),
        "mhd-α" => mk("MHD-α", (1.0, 1.0, 0.0), Form::B4, lap, s, id),
        "mhd" => mk("MHD", (1.0, 0.0, 0.0), Form::B3, lap, id, id),
        _ => return Err(Error::Config(format!("unknown model `{name}`; known: {}", PRESET_NAMES.join(", ")))),
    };
    Ok(p)
}

/// Same as [`preset`] but with exponents only; any multipliers are taken as
/// the closest standard shapes.
pub fn custom(theta: f64, theta1: f64, theta2: f64, form: Form) -> ModelParams {
    let m = if theta1 == 0.0 { MultiplierSpec::identity() } else { MultiplierSpec::helmholtz_power(DEFAULT_ALPHA, -theta1) };
    let n = if theta2 == 0.0 { MultiplierSpec::identity() } else { MultiplierSpec::helmholtz_power(DEFAULT_ALPHA, -theta2) };
    ModelParams {
        label: format!("custom({theta},{theta1},{theta2},{})", form.name()),
        theta,
        theta1,
        theta2,
        alpha: DEFAULT_ALPHA,
        nu: DEFAULT_NU,
        eta: if form.blocks() == 2 { DEFAULT_NU } else { 0.0 },
        selector: BilinearSelector { form, m_spec: m, n_spec: n },
        a_spec: MultiplierSpec::fractional_laplacian(DEFAULT_NU, theta),
        n_dim: 3,
    }
}
