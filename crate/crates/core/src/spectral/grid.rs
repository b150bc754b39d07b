use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic box `[0, L)^n` sampled on `res^n` points.
///
/// Coefficients are stored row-major over the axes (axis 0 slowest). Index `i`
/// along an axis holds the integer wavenumber `i` for `i < res/2` and `i - res`
/// otherwise, so the Nyquist index is `-res/2`.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    n_dim: usize,
    res: usize,
    length: f64,
    dealias_fraction: f64,
    cutoff: usize,
    /// Physical wavevector per flat index (unused trailing entries are zero).
    kvec: Vec<[f64; 3]>,
    k2: Vec<f64>,
    /// Retained after truncation: every `|m_j| <= cutoff` and `m != 0`.
    keep: Vec<bool>,
    /// Flat index of `-m`.
    neg: Vec<usize>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

/// Plain-data description of a grid, used in snapshots and manifests.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_dim: usize,
    pub res: usize,
    pub length: f64,
    pub dealias_fraction: f64,
}

impl GridSpec {
    pub fn new(n_dim: usize, res: usize) -> Self {
        GridSpec { n_dim, res, length: 2.0 * PI, dealias_fraction: 2.0 / 3.0 }
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n_dim", &self.n_dim())
            .field("res", &self.res())
            .field("length", &self.length())
            .field("cutoff", &self.cutoff())
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.spec() == other.spec()
    }
}

impl Grid {
    /// Box of side `2π` with the usual 2/3 truncation.
    pub fn new(n_dim: usize, res: usize) -> Result<Self> {
        Self::from_spec(&GridSpec::new(n_dim, res))
    }

    pub fn with_length(n_dim: usize, res: usize, length: f64) -> Result<Self> {
        Self::from_spec(&GridSpec { length, ..GridSpec::new(n_dim, res) })
    }

    pub fn from_spec(spec: &GridSpec) -> Result<Self> {
        let GridSpec { n_dim, res, length, dealias_fraction } = *spec;
        if !(n_dim == 2 || n_dim == 3) {
            return Err(Error::Config(format!("dimension must be 2 or 3, got {n_dim}")));
        }
        if res < 8 || !res.is_power_of_two() {
            return Err(Error::Config(format!("resolution must be a power of two >= 8, got {res}")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Config(format!("box length must be positive, got {length}")));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "dealias fraction must lie in (0, 1], got {dealias_fraction}"
            )));
        }
        let cutoff = ((dealias_fraction * res as f64) / 2.0 + 1e-9).floor() as usize;
        let cutoff = cutoff.min(res / 2 - 1);
        let total = res.pow(n_dim as u32);
        let scale = 2.0 * PI / length;
        let mut kvec = vec![[0.0; 3]; total];
        let mut k2 = vec![0.0; total];
        let mut keep = vec![false; total];
        let mut neg = vec![0; total];
        for idx in 0..total {
            let m = lattice_of(idx, res, n_dim);
            let mut kk = [0.0; 3];
            let mut ok = true;
            let mut nonzero = false;
            let mut nidx = 0usize;
            for d in 0..n_dim {
                kk[d] = scale * m[d] as f64;
                ok &= m[d].unsigned_abs() as usize <= cutoff;
                nonzero |= m[d] != 0;
                let j = (-m[d]).rem_euclid(res as i64) as usize;
                nidx = nidx * res + j;
            }
            kvec[idx] = kk;
            k2[idx] = kk.iter().map(|x| x * x).sum();
            keep[idx] = ok && nonzero;
            neg[idx] = nidx;
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(res);
        let inv = planner.plan_fft_inverse(res);
        Ok(Grid {
            inner: Arc::new(GridInner {
                n_dim,
                res,
                length,
                dealias_fraction,
                cutoff,
                kvec,
                k2,
                keep,
                neg,
                fwd,
                inv,
            }),
        })
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            n_dim: self.inner.n_dim,
            res: self.inner.res,
            length: self.inner.length,
            dealias_fraction: self.inner.dealias_fraction,
        }
    }

    pub fn n_dim(&self) -> usize {
        self.inner.n_dim
    }
    pub fn res(&self) -> usize {
        self.inner.res
    }
    pub fn length(&self) -> f64 {
        self.inner.length
    }
    /// Largest retained `|m_j|`.
    pub fn cutoff(&self) -> usize {
        self.inner.cutoff
    }
    pub fn len(&self) -> usize {
        self.inner.k2.len()
    }
    pub fn is_empty(&self) -> bool {
        self.inner.k2.is_empty()
    }
    /// `L^n`.
    pub fn volume(&self) -> f64 {
        self.inner.length.powi(self.inner.n_dim as i32)
    }
    /// Smallest nonzero `|k|`.
    pub fn k_min(&self) -> f64 {
        2.0 * PI / self.inner.length
    }
    pub fn kvec(&self, idx: usize) -> &[f64; 3] {
        &self.inner.kvec[idx]
    }
    pub fn k2(&self) -> &[f64] {
        &self.inner.k2
    }
    pub fn keep(&self) -> &[bool] {
        &self.inner.keep
    }
    pub fn neg_index(&self, idx: usize) -> usize {
        self.inner.neg[idx]
    }
    pub fn lattice(&self, idx: usize) -> [i64; 3] {
        lattice_of(idx, self.inner.res, self.inner.n_dim)
    }
    /// Flat index of an integer wavevector (components taken mod `res`).
    pub fn index_of(&self, m: &[i64]) -> usize {
        let res = self.inner.res as i64;
        m.iter()
            .take(self.inner.n_dim)
            .fold(0usize, |acc, &mj| acc * self.inner.res + mj.rem_euclid(res) as usize)
    }
    /// Retained flat indices.
    pub fn retained(&self) -> impl Iterator<Item = usize> + '_ {
        self.inner.keep.iter().enumerate().filter(|(_, &k)| k).map(|(i, _)| i)
    }

    /// Unnormalised inverse transform in place: `u(x) = Σ c_k e^{ik·x}`.
    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inner.inv);
    }

    /// Forward transform with the `1/res^n` factor, giving Fourier-series coefficients.
    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inner.fwd);
        let s = 1.0 / self.len() as f64;
        for z in data.iter_mut() {
            *z *= s;
        }
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let res = self.inner.res;
        let n_dim = self.inner.n_dim;
        let total = data.len();
        debug_assert_eq!(total, self.len());
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        // last axis is contiguous
        fft.process_with_scratch(data, &mut scratch);
        if n_dim == 1 {
            return;
        }
        let mut lines = vec![Complex64::default(); total];
        for axis in 0..n_dim - 1 {
            let stride = res.pow((n_dim - 1 - axis) as u32);
            let block = stride * res;
            // gather every line along `axis` into a contiguous buffer
            let mut li = 0;
            for b0 in (0..total).step_by(block) {
                for off in 0..stride {
                    let base = b0 + off;
                    for j in 0..res {
                        lines[li + j] = data[base + j * stride];
                    }
                    li += res;
                }
            }
            fft.process_with_scratch(&mut lines, &mut scratch);
            let mut li = 0;
            for b0 in (0..total).step_by(block) {
                for off in 0..stride {
                    let base = b0 + off;
                    for j in 0..res {
                        data[base + j * stride] = lines[li + j];
                    }
                    li += res;
                }
            }
        }
    }
}

fn lattice_of(idx: usize, res: usize, n_dim: usize) -> [i64; 3] {
    let mut m = [0i64; 3];
    let mut rem = idx;
    for d in (0..n_dim).rev() {
        let i = rem % res;
        rem /= res;
        m[d] = if i < res / 2 { i as i64 } else { i as i64 - res as i64 };
    }
    m
}
