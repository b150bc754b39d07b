use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::error::{Error, Result};

/// What a field represents. Only affects bookkeeping in snapshots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    Velocity,
    Magnetic,
    Forcing,
}

/// Real vector field on the torus held as Fourier-series coefficients,
/// `u(x) = Σ_k û(k) e^{ik·x}`, one coefficient array per component.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Grid,
    comps: Vec<Vec<Complex64>>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        let comps = vec![vec![Complex64::default(); grid.len()]; grid.n_dim()];
        SpectralField { grid: grid.clone(), comps }
    }

    pub fn from_components(grid: &Grid, comps: Vec<Vec<Complex64>>) -> Result<Self> {
        if comps.len() != grid.n_dim() || comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::GridMismatch("component shape does not match grid".into()));
        }
        Ok(SpectralField { grid: grid.clone(), comps })
    }

    /// Transform sampled physical components. No projection or truncation is applied.
    pub fn from_physical(grid: &Grid, phys: &[Vec<f64>]) -> Result<Self> {
        if phys.len() != grid.n_dim() || phys.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::GridMismatch("physical shape does not match grid".into()));
        }
        let comps = grid.forward_real(phys);
        Ok(SpectralField { grid: grid.clone(), comps })
    }

    pub fn to_physical(&self) -> Vec<Vec<f64>> {
        let refs: Vec<&[Complex64]> = self.comps.iter().map(|c| c.as_slice()).collect();
        self.grid.inverse_real(&refs)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn comps(&self) -> &[Vec<Complex64>] {
        &self.comps
    }
    pub fn comps_mut(&mut self) -> &mut [Vec<Complex64>] {
        &mut self.comps
    }
    pub fn comp(&self, i: usize) -> &[Complex64] {
        &self.comps[i]
    }

    pub fn same_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)))
        }
    }

    /// Leray projection `û - k (k·û)/|k|²`; also clears the mean.
    pub fn project(&mut self) {
        let n = self.grid.n_dim();
        for idx in 0..self.grid.len() {
            let k2 = self.grid.k2()[idx];
            if k2 == 0.0 {
                for c in self.comps.iter_mut() {
                    c[idx] = Complex64::default();
                }
                continue;
            }
            let k = self.grid.kvec(idx);
            let mut dot = Complex64::default();
            for d in 0..n {
                dot += self.comps[d][idx] * k[d];
            }
            let f = dot / k2;
            for d in 0..n {
                self.comps[d][idx] -= f * k[d];
            }
        }
    }

    pub fn projected(mut self) -> Self {
        self.project();
        self
    }

    /// Zero every mode outside the retained set (including the mean).
    pub fn truncate(&mut self) {
        let keep = self.grid.keep();
        for c in self.comps.iter_mut() {
            for (z, &k) in c.iter_mut().zip(keep) {
                if !k {
                    *z = Complex64::default();
                }
            }
        }
    }

    /// Make the coefficients those of a real field: `û(-k) = conj(û(k))`.
    pub fn symmetrize(&mut self) {
        for c in self.comps.iter_mut() {
            let old = c.clone();
            for (idx, z) in c.iter_mut().enumerate() {
                *z = 0.5 * (old[idx] + old[self.grid.neg_index(idx)].conj());
            }
        }
    }

    /// `max_k |k·û(k)|`.
    pub fn divergence_residual(&self) -> f64 {
        let n = self.grid.n_dim();
        (0..self.grid.len())
            .map(|idx| {
                let k = self.grid.kvec(idx);
                (0..n).map(|d| self.comps[d][idx] * k[d]).sum::<Complex64>().norm()
            })
            .fold(0.0, f64::max)
    }

    /// Largest modulus of any coefficient, or NaN if one is not finite.
    pub fn max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for c in &self.comps {
            for z in c {
                let a = z.norm();
                if !a.is_finite() {
                    return f64::NAN;
                }
                m = m.max(a);
            }
        }
        m
    }

    pub fn scale(&mut self, s: f64) {
        for c in self.comps.iter_mut() {
            for z in c.iter_mut() {
                *z *= s;
            }
        }
    }

    pub fn scaled(mut self, s: f64) -> Self {
        self.scale(s);
        self
    }

    /// `self += a * x`.
    pub fn axpy(&mut self, a: f64, x: &SpectralField) {
        for (c, xc) in self.comps.iter_mut().zip(&x.comps) {
            for (z, w) in c.iter_mut().zip(xc) {
                *z += a * w;
            }
        }
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    pub fn add(&self, other: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.axpy(1.0, other);
        out
    }

    /// Multiply mode-wise by a real symbol.
    pub fn mul_symbol(&mut self, symbol: &[f64]) {
        for c in self.comps.iter_mut() {
            for (z, s) in c.iter_mut().zip(symbol) {
                *z *= *s;
            }
        }
    }

    /// Component `j` of `∂_i u` in spectral form.
    pub fn derivative(&self, comp: usize, axis: usize) -> Vec<Complex64> {
        self.comps[comp]
            .iter()
            .enumerate()
            .map(|(idx, z)| z * Complex64::new(0.0, self.grid.kvec(idx)[axis]))
            .collect()
    }
}

impl Grid {
    /// Inverse transforms of real fields, two at a time through one complex FFT.
    pub fn inverse_real(&self, comps: &[&[Complex64]]) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(comps.len());
        let i = Complex64::new(0.0, 1.0);
        for chunk in comps.chunks(2) {
            let mut buf: Vec<Complex64> = match chunk {
                [a, b] => a.iter().zip(b.iter()).map(|(x, y)| x + i * y).collect(),
                [a] => a.to_vec(),
                _ => unreachable!(),
            };
            self.inverse(&mut buf);
            out.push(buf.iter().map(|z| z.re).collect());
            if chunk.len() == 2 {
                out.push(buf.iter().map(|z| z.im).collect());
            }
        }
        out
    }

    /// Forward transforms of real fields, two at a time.
    pub fn forward_real(&self, phys: &[Vec<f64>]) -> Vec<Vec<Complex64>> {
        let mut out = Vec::with_capacity(phys.len());
        for chunk in phys.chunks(2) {
            match chunk {
                [a, b] => {
                    let mut buf: Vec<Complex64> =
                        a.iter().zip(b).map(|(x, y)| Complex64::new(*x, *y)).collect();
                    self.forward(&mut buf);
                    let mut x = vec![Complex64::default(); buf.len()];
                    let mut y = vec![Complex64::default(); buf.len()];
                    for idx in 0..buf.len() {
                        let zc = buf[self.neg_index(idx)].conj();
                        x[idx] = 0.5 * (buf[idx] + zc);
                        y[idx] = Complex64::new(0.0, -0.5) * (buf[idx] - zc);
                    }
                    out.push(x);
                    out.push(y);
                }
                [a] => {
                    let mut buf: Vec<Complex64> =
                        a.iter().map(|x| Complex64::new(*x, 0.0)).collect();
                    self.forward(&mut buf);
                    out.push(buf);
                }
                _ => unreachable!(),
            }
        }
        out
    }

    /// Physical coordinates of grid point `idx`.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let res = self.res();
        let h = self.length() / res as f64;
        let mut x = [0.0; 3];
        let mut rem = idx;
        for d in (0..self.n_dim()).rev() {
            x[d] = (rem % res) as f64 * h;
            rem /= res;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paired_transforms_round_trip() {
        let g = Grid::new(2, 16).unwrap();
        let phys: Vec<Vec<f64>> = (0..3)
            .map(|c| {
                (0..g.len())
                    .map(|i| {
                        let x = g.point(i);
                        (x[0] * (c + 1) as f64).sin() + (2.0 * x[1]).cos() * c as f64
                    })
                    .collect()
            })
            .collect();
        let spec = g.forward_real(&phys);
        let refs: Vec<&[Complex64]> = spec.iter().map(|c| c.as_slice()).collect();
        let back = g.inverse_real(&refs);
        for (a, b) in phys.iter().zip(&back) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn projection_kills_gradients() {
        let g = Grid::new(3, 8).unwrap();
        let mut f = SpectralField::zeros(&g);
        let idx = g.index_of(&[1, 2, -1]);
        let k = *g.kvec(idx);
        for d in 0..3 {
            f.comps_mut()[d][idx] = Complex64::new(k[d], 0.5 * k[d]);
        }
        f.project();
        assert!(f.max_abs() < 1e-15);
    }
}
