use proptest::prelude::*;

use regflow::bilinear::{bbar, bbar1, compose_b, trilinear, BilinearSelector, Form};
use regflow::regime::preset;
use regflow::spectral::{random_divfree_field, sobolev_norm, Grid, SpectralField};

fn grid_strategy() -> impl Strategy<Value = Grid> {
    prop_oneof![Just(Grid::new(2, 16).unwrap()), Just(Grid::new(2, 32).unwrap()), Just(Grid::new(3, 8).unwrap())]
}

fn form_strategy() -> impl Strategy<Value = Form> {
    prop_oneof![
        Just(Form::B1),
        Just(Form::B2),
        Just(Form::B5(1, 1, 1)),
        Just(Form::B5(1, 2, 2)),
        Just(Form::B5(2, 1, 1)),
    ]
}

fn fields(grid: &Grid, seed: u64, blocks: usize) -> Vec<SpectralField> {
    (0..blocks as u64).map(|b| random_divfree_field(grid, seed.wrapping_add(97 * b), -1.0, 1.0)).collect()
}

fn lin(a: f64, x: &[SpectralField], b: f64, y: &[SpectralField]) -> Vec<SpectralField> {
    x.iter().zip(y).map(|(p, q)| p.clone().scaled(a).add(&q.clone().scaled(b))).collect()
}

fn gap(a: &[SpectralField], b: &[SpectralField]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| sobolev_norm(&x.sub(y), 0.0).powi(2)).sum();
    let s: f64 = b.iter().map(|y| sobolev_norm(y, 0.0).powi(2)).sum();
    (d / s.max(f64::MIN_POSITIVE)).sqrt()
}

/// Copy the retained modes of `v` onto `fine`, which has the same period.
fn embed(v: &SpectralField, fine: &Grid) -> SpectralField {
    let n = fine.n_dim();
    let mut out = SpectralField::zeros(fine);
    for idx in v.grid().retained() {
        let m = v.grid().lattice(idx);
        let j = fine.index_of(&m[..n]);
        for d in 0..n {
            out.comps_mut()[d][j] = v.comp(d)[idx];
        }
    }
    out
}

/// Restrict `w` to the retained modes of `coarse`.
fn restrict(w: &SpectralField, coarse: &Grid) -> SpectralField {
    let n = coarse.n_dim();
    let mut out = SpectralField::zeros(coarse);
    for idx in coarse.retained() {
        let m = coarse.lattice(idx);
        let j = w.grid().index_of(&m[..n]);
        for d in 0..n {
            out.comps_mut()[d][idx] = w.comp(d)[j];
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn antisymmetry(grid in grid_strategy(), seed in any::<u64>(), form in form_strategy()) {
        let k = form.blocks();
        let w = fields(&grid, seed, k);
        let v = fields(&grid, seed ^ 0x5555, k);
        let b = bbar(form, &w, &v).unwrap();
        let t: f64 = b.iter().zip(&v).map(|(x, y)| regflow::spectral::inner(x, y)).sum();
        let scale: f64 = w.iter().map(|x| sobolev_norm(x, 1.0)).sum::<f64>()
            * v.iter().map(|x| sobolev_norm(x, 1.0).powi(2)).sum::<f64>();
        prop_assert!(t.abs() <= 1e-11 * scale, "{} vs {}", t, scale);
    }

    #[test]
    fn cancellation_with_n(seed in any::<u64>(), name in prop::sample::select(vec!["NSE", "Leray-α", "ML-α", "SBM", "NSV", "NS-α", "NS-α-like(0.75,0.5)", "MHD", "Leray-α-MHD", "MHD-α"])) {
        let p = preset(name).unwrap().with_dims(2);
        let grid = Grid::new(2, 32).unwrap();
        let v = fields(&grid, seed, p.blocks());
        let nv = regflow::bilinear::apply_n(&p.selector, &v).unwrap();
        let t = trilinear(&p.selector, &v, &v, &nv).unwrap();
        let scale: f64 = v.iter().map(|x| sobolev_norm(x, 1.0)).sum::<f64>().powi(3);
        prop_assert!(t.abs() <= 1e-11 * scale);
    }

    #[test]
    fn bilinear_in_both_slots(grid in grid_strategy(), seed in any::<u64>(), form in form_strategy(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let k = form.blocks();
        let sel = BilinearSelector::bare(form);
        let (u, u2, v) = (fields(&grid, seed, k), fields(&grid, seed ^ 1, k), fields(&grid, seed ^ 2, k));
        let left = compose_b(&sel, &lin(a, &u, b, &u2), &v).unwrap();
        let expect = lin(a, &compose_b(&sel, &u, &v).unwrap(), b, &compose_b(&sel, &u2, &v).unwrap());
        prop_assert!(gap(&left, &expect) < 1e-12);
        let right = compose_b(&sel, &v, &lin(a, &u, b, &u2)).unwrap();
        let expect = lin(a, &compose_b(&sel, &v, &u).unwrap(), b, &compose_b(&sel, &v, &u2).unwrap());
        prop_assert!(gap(&right, &expect) < 1e-12);
    }

    #[test]
    fn dealiasing_matches_double_resolution(dims in 2usize..=3, seed in any::<u64>()) {
        let res = if dims == 2 { 32 } else { 8 };
        let coarse = Grid::new(dims, res).unwrap();
        let fine = Grid::new(dims, 2 * res).unwrap();
        let v = random_divfree_field(&coarse, seed, -0.5, 1.0);
        let w = random_divfree_field(&coarse, seed ^ 9, -0.5, 1.0);
        let direct = bbar1(&v, &w).unwrap();
        let padded = restrict(&bbar1(&embed(&v, &fine), &embed(&w, &fine)).unwrap(), &coarse);
        prop_assert!(gap(&[direct], &[padded]) < 1e-12);
    }
}

/// `‖B̄1(u,v)‖_{-1} / (‖u‖_1‖v‖_1)` should not grow with resolution in 3D.
#[test]
fn b1_bound_constant_is_resolution_independent() {
    let worst = |res: usize| {
        let g = Grid::new(3, res).unwrap();
        (0..6u64)
            .map(|s| {
                let u = random_divfree_field(&g, s, -2.5, 1.0);
                let v = random_divfree_field(&g, s + 100, -2.5, 1.0);
                sobolev_norm(&bbar1(&u, &v).unwrap(), -1.0) / (sobolev_norm(&u, 1.0) * sobolev_norm(&v, 1.0))
            })
            .fold(0.0, f64::max)
    };
    let (c8, c16) = (worst(8), worst(16));
    assert!(c8 > 0.0 && c16 > 0.0);
    assert!(c16 < 2.0 * c8 && c8 < 2.0 * c16, "C = {c8} at 8³, {c16} at 16³");
}
