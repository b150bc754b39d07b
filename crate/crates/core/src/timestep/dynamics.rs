use crate::bilinear::{apply_n, compose_b};
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

use super::forcing::{Forcing, ForcingSpec};
use super::params::ModelParams;

/// Coefficients above this modulus count as blow-up.
pub const BLOW_UP_THRESHOLD: f64 = 1e15;

/// Time and state. The state has one block, or two (`u`, `h`) for coupled models.
#[derive(Clone, Debug)]
pub struct SimState {
    pub t: f64,
    pub fields: Vec<SpectralField>,
}

impl SimState {
    pub fn new(t: f64, fields: Vec<SpectralField>) -> Self {
        SimState { t, fields }
    }

    pub fn single(u: SpectralField) -> Self {
        SimState { t: 0.0, fields: vec![u] }
    }

    pub fn coupled(u: SpectralField, h: SpectralField) -> Self {
        SimState { t: 0.0, fields: vec![u, h] }
    }

    pub fn u(&self) -> &SpectralField {
        &self.fields[0]
    }

    pub fn max_abs(&self) -> f64 {
        self.fields.iter().map(|f| f.max_abs()).fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
    }
}

/// The right-hand side `-Au - B(u,u) + f` on a fixed grid.
#[derive(Clone, Debug)]
pub struct Dynamics {
    pub params: ModelParams,
    pub grid: Grid,
    pub forcing: Forcing,
    lin: Vec<Vec<f64>>,
    n_symbol: Vec<f64>,
    advect: bool,
}

impl Dynamics {
    pub fn new(params: &ModelParams, grid: &Grid, forcing: &ForcingSpec) -> Result<Self> {
        params.validate()?;
        if params.n_dim != grid.n_dim() {
            return Err(Error::Config(format!(
                "model is {}-dimensional but grid is {}-dimensional",
                params.n_dim,
                grid.n_dim()
            )));
        }
        let lin = params.linear_symbols(grid)?;
        let n_symbol = params.selector.n_spec.symbol_array(grid);
        Ok(Dynamics {
            params: params.clone(),
            grid: grid.clone(),
            forcing: forcing.realize(grid)?,
            lin,
            n_symbol,
            advect: true,
        })
    }

    /// Drop the bilinear term (for checks of the linear propagator).
    pub fn without_nonlinearity(mut self) -> Self {
        self.advect = false;
        self
    }

    pub fn blocks(&self) -> usize {
        self.lin.len()
    }

    /// Symbol of the linear part for each block.
    pub fn linear_symbols(&self) -> &[Vec<f64>] {
        &self.lin
    }

    pub fn n_symbol(&self) -> &[f64] {
        &self.n_symbol
    }

    /// Forcing per block at time `t` (zero on the magnetic block).
    pub fn forcing_blocks(&self, t: f64) -> Vec<SpectralField> {
        let mut out: Vec<SpectralField> = (0..self.blocks()).map(|_| SpectralField::zeros(&self.grid)).collect();
        if let Some(f) = self.forcing.at(t) {
            out[0] = f;
        }
        out
    }

    /// `-B(u,u) + f(t)`.
    pub fn explicit_term(&self, t: f64, u: &[SpectralField]) -> Result<Vec<SpectralField>> {
        let mut out = if self.advect {
            let mut b = compose_b(&self.params.selector, u, u)?;
            for f in b.iter_mut() {
                f.scale(-1.0);
            }
            b
        } else {
            (0..u.len()).map(|_| SpectralField::zeros(&self.grid)).collect()
        };
        if let Some(f) = self.forcing.at(t) {
            out[0].axpy(1.0, &f);
        }
        Ok(out)
    }

    /// `du/dt` in full.
    pub fn tendency(&self, t: f64, u: &[SpectralField]) -> Result<Vec<SpectralField>> {
        let mut out = self.explicit_term(t, u)?;
        for ((o, x), sym) in out.iter_mut().zip(u).zip(&self.lin) {
            let mut ax = x.clone();
            ax.mul_symbol(sym);
            o.axpy(-1.0, &ax);
        }
        Ok(out)
    }

    /// `Nu` block-wise.
    pub fn apply_n(&self, u: &[SpectralField]) -> Result<Vec<SpectralField>> {
        apply_n(&self.params.selector, u)
    }

    /// `dt · max|Mu| / Δx` using the advecting velocity in physical space.
    pub fn cfl_number(&self, state: &SimState, dt: f64) -> f64 {
        let sel = &self.params.selector;
        let mut vmax: f64 = 0.0;
        for f in &state.fields {
            let mut m = f.clone();
            m.mul_symbol(&sel.m_spec.symbol_array(&self.grid));
            let phys = m.to_physical();
            let n = phys.len();
            for p in 0..self.grid.len() {
                let s: f64 = (0..n).map(|d| phys[d][p] * phys[d][p]).sum();
                vmax = vmax.max(s.sqrt());
            }
        }
        dt * vmax * self.grid.res() as f64 / self.grid.length()
    }
}

/// Integrating-factor (Lawson) RK4 with the exact propagator `e^{-a(k)dt}`.
#[derive(Clone, Debug)]
pub struct Stepper {
    dt: f64,
    e_half: Vec<Vec<f64>>,
    e_full: Vec<Vec<f64>>,
}

impl Stepper {
    /// `dt` may be negative for reversed integration of ideal runs.
    pub fn new(dynamics: &Dynamics, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::Config(format!("time step must be finite and nonzero, got {dt}")));
        }
        let e = |h: f64| -> Vec<Vec<f64>> {
            dynamics.lin.iter().map(|s| s.iter().map(|a| (-a * h).exp()).collect()).collect()
        };
        Ok(Stepper { dt, e_half: e(0.5 * dt), e_full: e(dt) })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn prop(&self, e: &[Vec<f64>], u: &[SpectralField]) -> Vec<SpectralField> {
        u.iter()
            .zip(e)
            .map(|(f, s)| {
                let mut g = f.clone();
                g.mul_symbol(s);
                g
            })
            .collect()
    }

    fn comb(a: &[SpectralField], c: f64, b: &[SpectralField]) -> Vec<SpectralField> {
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                let mut z = x.clone();
                z.axpy(c, y);
                z
            })
            .collect()
    }

    /// One step. A non-finite or oversized coefficient is reported as
    /// [`Error::BlowUp`] at the time reached.
    pub fn step(&self, dynamics: &Dynamics, state: &SimState) -> Result<SimState> {
        let (t, u, h) = (state.t, &state.fields, self.dt);
        let k1 = dynamics.explicit_term(t, u)?;
        let a = self.prop(&self.e_half, &Self::comb(u, 0.5 * h, &k1));
        let k2 = dynamics.explicit_term(t + 0.5 * h, &a)?;
        let eu_half = self.prop(&self.e_half, u);
        let b = Self::comb(&eu_half, 0.5 * h, &k2);
        let k3 = dynamics.explicit_term(t + 0.5 * h, &b)?;
        let eu_full = self.prop(&self.e_full, u);
        let c = Self::comb(&eu_full, h, &self.prop(&self.e_half, &k3));
        let k4 = dynamics.explicit_term(t + h, &c)?;
        let mid = self.prop(&self.e_half, &Self::comb(&k2, 1.0, &k3));
        let mut out = eu_full;
        let ek1 = self.prop(&self.e_full, &k1);
        for i in 0..out.len() {
            out[i].axpy(h / 6.0, &ek1[i]);
            out[i].axpy(h / 3.0, &mid[i]);
            out[i].axpy(h / 6.0, &k4[i]);
        }
        let next = SimState { t: t + h, fields: out };
        let m = next.max_abs();
        if !(m <= BLOW_UP_THRESHOLD) {
            return Err(Error::BlowUp { t: next.t });
        }
        Ok(next)
    }
}

/// Read-only consumer of states during [`integrate`].
pub trait Observer {
    fn observe(&mut self, dynamics: &Dynamics, state: &SimState) -> Result<()>;
}

impl<F: FnMut(&Dynamics, &SimState) -> Result<()>> Observer for F {
    fn observe(&mut self, dynamics: &Dynamics, state: &SimState) -> Result<()> {
        self(dynamics, state)
    }
}

/// How a run ended.
#[derive(Clone, Debug)]
pub struct RunEnd {
    /// Last good state.
    pub state: SimState,
    /// Time of failure if the run blew up.
    pub blow_up: Option<f64>,
    pub steps: usize,
}

/// Number of whole steps of size `dt` in `span`; errors if it is not an integer.
pub fn whole_steps(span: f64, dt: f64) -> Result<usize> {
    let n = (span / dt).round();
    if !(n >= 0.0) || (n * dt - span).abs() > 1e-9 * span.abs().max(1.0) {
        return Err(Error::Config(format!("dt = {dt} does not divide the interval {span}")));
    }
    Ok(n as usize)
}

/// March from `state0` to `t_end` with fixed `dt`, calling `observer` at the
/// start and then every `every` steps. Blow-up ends the run early and is
/// returned as data.
pub fn integrate(
    dynamics: &Dynamics,
    state0: &SimState,
    t_end: f64,
    dt: f64,
    every: usize,
    observer: &mut dyn Observer,
) -> Result<RunEnd> {
    if !(t_end > state0.t) {
        return Err(Error::Config(format!("t_end = {t_end} must exceed t0 = {}", state0.t)));
    }
    if every == 0 {
        return Err(Error::Config("observation cadence must be at least one step".into()));
    }
    let n = whole_steps(t_end - state0.t, dt)?;
    if n % every != 0 {
        return Err(Error::Config(format!("{every} steps per sample does not divide the {n} steps of the run")));
    }
    let stepper = Stepper::new(dynamics, dt)?;
    let t0 = state0.t;
    let mut state = state0.clone();
    observer.observe(dynamics, &state)?;
    for i in 1..=n {
        match stepper.step(dynamics, &state) {
            Ok(mut next) => {
                // avoid drift of the clock over long runs
                next.t = t0 + i as f64 * dt;
                state = next;
            }
            Err(Error::BlowUp { t }) => return Ok(RunEnd { state, blow_up: Some(t), steps: i - 1 }),
            Err(e) => return Err(e),
        }
        if i % every == 0 {
            observer.observe(dynamics, &state)?;
        }
    }
    Ok(RunEnd { state, blow_up: None, steps: n })
}
