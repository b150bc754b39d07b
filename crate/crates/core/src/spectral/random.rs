use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::field::SpectralField;
use super::grid::Grid;
use super::norms::sobolev_norm;

/// Random divergence-free field with coefficient amplitudes `∝ |k|^slope`
/// (lattice units) and `‖·‖_0 = amplitude`.
pub fn random_divfree_field(grid: &Grid, seed: u64, slope: f64, amplitude: f64) -> SpectralField {
    random_band_field(grid, seed, slope, amplitude, 0.0, f64::INFINITY)
}

/// As [`random_divfree_field`], restricted to lattice shells `k_lo <= |m| <= k_hi`.
pub fn random_band_field(
    grid: &Grid,
    seed: u64,
    slope: f64,
    amplitude: f64,
    k_lo: f64,
    k_hi: f64,
) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid);
    let kmin2 = grid.k_min() * grid.k_min();
    let n = grid.n_dim();
    for idx in 0..grid.len() {
        // draw for every mode so the stream does not depend on the band
        let draws: Vec<(f64, f64)> = (0..n)
            .map(|_| (StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        if !grid.keep()[idx] {
            continue;
        }
        let m = (grid.k2()[idx] / kmin2).sqrt();
        if m < k_lo || m > k_hi {
            continue;
        }
        let a = m.powf(slope);
        for (d, (re, im)) in draws.into_iter().enumerate() {
            f.comps_mut()[d][idx] = Complex64::new(a * re, a * im);
        }
    }
    f.symmetrize();
    f.project();
    f.truncate();
    let norm = sobolev_norm(&f, 0.0);
    if norm > 0.0 {
        f.scale(amplitude / norm);
    }
    f
}

/// Two-dimensional Taylor-Green vortex `amp (sin x cos y, -cos x sin y)` on the
/// lowest lattice shell.
pub fn taylor_green(grid: &Grid, amp: f64) -> SpectralField {
    let k = grid.k_min();
    let mut phys = vec![vec![0.0; grid.len()]; grid.n_dim()];
    for idx in 0..grid.len() {
        let x = grid.point(idx);
        phys[0][idx] = amp * (k * x[0]).sin() * (k * x[1]).cos();
        phys[1][idx] = -amp * (k * x[0]).cos() * (k * x[1]).sin();
    }
    let mut f = SpectralField::from_physical(grid, &phys).expect("shape matches grid");
    f.project();
    f.truncate();
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_normalised() {
        let g = Grid::new(2, 32).unwrap();
        let a = random_divfree_field(&g, 7, -10.0, 1.0);
        let b = random_divfree_field(&g, 7, -10.0, 1.0);
        assert_eq!(a.comps(), b.comps());
        assert!((sobolev_norm(&a, 0.0) - 1.0).abs() < 1e-12);
        assert!(a.divergence_residual() < 1e-12);
        let c = random_divfree_field(&g, 8, -10.0, 1.0);
        assert_ne!(a.comps(), c.comps());
    }

    #[test]
    fn band_is_respected() {
        let g = Grid::new(3, 16).unwrap();
        let f = random_band_field(&g, 1, 0.0, 2.0, 2.0, 3.0);
        for idx in 0..g.len() {
            let m = g.k2()[idx].sqrt();
            if !(2.0..=3.0).contains(&m) {
                assert!(f.comps().iter().all(|c| c[idx].norm() == 0.0));
            }
        }
    }
}
