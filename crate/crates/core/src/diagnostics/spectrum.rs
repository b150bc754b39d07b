use crate::error::{Error, Result};
use crate::spectral::{inner, sobolev_norm_sq, SpectralField};
use crate::timestep::SimState;

/// `E(κ) = ½ Σ_{κ−½ ≤ |m| < κ+½} |v̂(m)|²` over integer lattice shells `κ`.
pub fn shell_spectrum(v: &SpectralField) -> Vec<f64> {
    let g = v.grid();
    let shell = |idx: usize| -> usize {
        let m = g.lattice(idx);
        let r2: i64 = m.iter().map(|x| x * x).sum();
        ((r2 as f64).sqrt() + 0.5).floor() as usize
    };
    let top = g.retained().map(shell).max().unwrap_or(0);
    let mut e = vec![0.0; top + 1];
    for idx in g.retained() {
        let s: f64 = v.comps().iter().map(|c| c[idx].norm_sqr()).sum();
        e[shell(idx)] += 0.5 * s;
    }
    e
}

/// Energy `½(‖u‖₀² + ‖h‖₀²)` and cross helicity `½⟨u,h⟩` of a coupled state.
pub fn mhd_invariants(state: &SimState) -> Result<(f64, f64)> {
    if state.fields.len() != 2 {
        return Err(Error::Config("MHD invariants need a coupled (u, h) state".into()));
    }
    let (u, h) = (&state.fields[0], &state.fields[1]);
    Ok((0.5 * (sobolev_norm_sq(u, 0.0) + sobolev_norm_sq(h, 0.0)), 0.5 * inner(u, h)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{random_divfree_field, single_mode, Grid};

    #[test]
    fn single_mode_lands_in_its_shell() {
        let g = Grid::new(2, 32).unwrap();
        let v = single_mode(&g, &[3, 0], &[0.0, 1.0], 0.4);
        let e = shell_spectrum(&v);
        assert!((e[3] - 0.5 * 2.0 * 0.16).abs() < 1e-15);
        assert_eq!(e.iter().sum::<f64>(), e[3]);
    }

    #[test]
    fn spectrum_partitions_energy() {
        for g in [Grid::new(2, 32).unwrap(), Grid::new(3, 16).unwrap()] {
            let v = random_divfree_field(&g, 9, -1.0, 1.3);
            let total: f64 = shell_spectrum(&v).iter().sum();
            assert!((total - 0.5 * sobolev_norm_sq(&v, 0.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn invariants_by_substitution() {
        let g = Grid::new(2, 16).unwrap();
        let u = random_divfree_field(&g, 2, -1.0, 1.0);
        let z = SpectralField::zeros(&g);
        let (e, hc) = mhd_invariants(&SimState::coupled(u.clone(), z)).unwrap();
        assert_eq!((e, hc), (0.5 * sobolev_norm_sq(&u, 0.0), 0.0));
        let (e, hc) = mhd_invariants(&SimState::coupled(u.clone(), u.clone())).unwrap();
        assert!((e - sobolev_norm_sq(&u, 0.0)).abs() < 1e-15);
        assert!((hc - 0.5 * sobolev_norm_sq(&u, 0.0)).abs() < 1e-15);
        assert!(mhd_invariants(&SimState::single(u)).is_err());
    }
}
