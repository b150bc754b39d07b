//! Nonlinear terms `B(v, w) = B̄(Mv, Nw)` evaluated pseudospectrally.
//!
//! Products are formed on the resolution grid from inputs truncated at
//! `|m_j| <= res/3`; everything that aliases lands above the cutoff and is
//! removed, so retained coefficients are exact Galerkin values.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{apply_multiplier, inner, MultiplierSpec, SpectralField};

/// Which `B̄`. `B3` and `B4` are stored as their `B5` index triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    B1,
    B2,
    B5(u8, u8, u8),
}

impl Form {
    pub const B3: Form = Form::B5(1, 1, 1);
    pub const B4: Form = Form::B5(2, 1, 1);

    pub fn validate(&self) -> Result<()> {
        if let Form::B5(i, j, k) = *self {
            if ![i, j, k].iter().all(|x| *x == 1 || *x == 2) {
                return Err(Error::Config(format!("B5 indices must be 1 or 2, got ({i},{j},{k})")));
            }
        }
        Ok(())
    }

    /// Number of field blocks the form acts on.
    pub fn blocks(&self) -> usize {
        match self {
            Form::B5(..) => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Form::B1 => "B1".into(),
            Form::B2 => "B2".into(),
            Form::B5(1, 1, 1) => "B3".into(),
            Form::B5(2, 1, 1) => "B4".into(),
            Form::B5(i, j, k) => format!("B5({i},{j},{k})"),
        }
    }

    pub fn parse(s: &str) -> Result<Form> {
        let t = s.trim().to_ascii_uppercase();
        let f = match t.as_str() {
            "B1" => Form::B1,
            "B2" => Form::B2,
            "B3" => Form::B3,
            "B4" => Form::B4,
            _ => {
                let inner = t
                    .strip_prefix("B5(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Config(format!("unknown bilinear form `{s}`")))?;
                let ix: Vec<u8> = inner
                    .split(',')
                    .map(|p| p.trim().parse::<u8>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Config(format!("bad B5 indices in `{s}`")))?;
                if ix.len() != 3 {
                    return Err(Error::Config(format!("B5 needs three indices, got `{s}`")));
                }
                Form::B5(ix[0], ix[1], ix[2])
            }
        };
        f.validate()?;
        Ok(f)
    }
}

/// `B̄` together with the `M` and `N` of `B(v, w) = B̄(Mv, Nw)`. For the
/// coupled forms the same multipliers act on both blocks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilinearSelector {
    pub form: Form,
    pub m_spec: MultiplierSpec,
    pub n_spec: MultiplierSpec,
}

impl BilinearSelector {
    pub fn new(form: Form, m_spec: MultiplierSpec, n_spec: MultiplierSpec) -> Result<Self> {
        form.validate()?;
        m_spec.validate()?;
        n_spec.validate()?;
        Ok(BilinearSelector { form, m_spec, n_spec })
    }

    pub fn bare(form: Form) -> Self {
        BilinearSelector { form, m_spec: MultiplierSpec::identity(), n_spec: MultiplierSpec::identity() }
    }
}

fn check_same(fields: &[&SpectralField]) -> Result<()> {
    for f in &fields[1..] {
        fields[0].same_grid(f)?;
    }
    Ok(())
}

/// Physical samples of all `∂_i w_j`, indexed `[j * n + i]`.
fn gradient_physical(w: &SpectralField) -> Vec<Vec<f64>> {
    let n = w.grid().n_dim();
    let spec: Vec<Vec<Complex64>> =
        (0..n).flat_map(|j| (0..n).map(move |i| (j, i))).map(|(j, i)| w.derivative(j, i)).collect();
    let refs: Vec<&[Complex64]> = spec.iter().map(|c| c.as_slice()).collect();
    w.grid().inverse_real(&refs)
}

fn finish(grid: &crate::spectral::Grid, phys: Vec<Vec<f64>>) -> SpectralField {
    let mut out = SpectralField::from_physical(grid, &phys).expect("shape matches grid");
    out.truncate();
    out.project();
    out
}

/// `B̄1(v, w) = P[(v·∇)w]`.
pub fn bbar1(v: &SpectralField, w: &SpectralField) -> Result<SpectralField> {
    check_same(&[v, w])?;
    let grid = v.grid();
    let n = grid.n_dim();
    let vp = v.to_physical();
    let gw = gradient_physical(w);
    let mut out = vec![vec![0.0; grid.len()]; n];
    for (j, o) in out.iter_mut().enumerate() {
        for (i, vi) in vp.iter().enumerate() {
            let g = &gw[j * n + i];
            for ((x, a), b) in o.iter_mut().zip(vi).zip(g) {
                *x += a * b;
            }
        }
    }
    Ok(finish(grid, out))
}

/// `B̄2(v, w) = P[(w·∇)v + (∇w)ᵀv]`, computed as `P[w_i ∂_i v_k - w_i ∂_k v_i]`.
pub fn bbar2(v: &SpectralField, w: &SpectralField) -> Result<SpectralField> {
    check_same(&[v, w])?;
    let grid = v.grid();
    let n = grid.n_dim();
    let wp = w.to_physical();
    let gv = gradient_physical(v);
    let mut out = vec![vec![0.0; grid.len()]; n];
    for (k, o) in out.iter_mut().enumerate() {
        for (i, wi) in wp.iter().enumerate() {
            let dvk_i = &gv[k * n + i];
            let dvi_k = &gv[i * n + k];
            for (((x, a), b), c) in o.iter_mut().zip(wi).zip(dvk_i).zip(dvi_k) {
                *x += a * (b - c);
            }
        }
    }
    Ok(finish(grid, out))
}

/// `B̄2` in its literal form `P[w_i ∂_i v_k + (∂_k w_i) v_i]`; kept as an
/// independent check on [`bbar2`].
pub fn bbar2_direct(v: &SpectralField, w: &SpectralField) -> Result<SpectralField> {
    check_same(&[v, w])?;
    let grid = v.grid();
    let n = grid.n_dim();
    let wp = w.to_physical();
    let vp = v.to_physical();
    let gv = gradient_physical(v);
    let gw = gradient_physical(w);
    let mut out = vec![vec![0.0; grid.len()]; n];
    for (k, o) in out.iter_mut().enumerate() {
        for i in 0..n {
            for p in 0..grid.len() {
                o[p] += wp[i][p] * gv[k * n + i][p] + gw[i * n + k][p] * vp[i][p];
            }
        }
    }
    Ok(finish(grid, out))
}

fn bbar_index(idx: u8, v: &SpectralField, w: &SpectralField) -> Result<SpectralField> {
    match idx {
        1 => bbar1(v, w),
        2 => bbar2(v, w),
        _ => Err(Error::Config(format!("B5 index {idx} is not 1 or 2"))),
    }
}

/// `B̄5 = (B̄_i(v1,w1) - B̄_j(v2,w2), B̄_k(v1,w2) - B̄_j(v2,w1))`.
pub fn bbar5(
    ijk: (u8, u8, u8),
    v: (&SpectralField, &SpectralField),
    w: (&SpectralField, &SpectralField),
) -> Result<(SpectralField, SpectralField)> {
    Form::B5(ijk.0, ijk.1, ijk.2).validate()?;
    check_same(&[v.0, v.1, w.0, w.1])?;
    let (i, j, k) = ijk;
    let a = bbar_index(i, v.0, w.0)?.sub(&bbar_index(j, v.1, w.1)?);
    let b = bbar_index(k, v.0, w.1)?.sub(&bbar_index(j, v.1, w.0)?);
    Ok((a, b))
}

/// Bare form applied block-wise: one block for `B1`/`B2`, two for `B5`.
pub fn bbar(form: Form, v: &[SpectralField], w: &[SpectralField]) -> Result<Vec<SpectralField>> {
    if v.len() != form.blocks() || w.len() != form.blocks() {
        return Err(Error::Config(format!(
            "{} acts on {} block(s), got {} and {}",
            form.name(),
            form.blocks(),
            v.len(),
            w.len()
        )));
    }
    match form {
        Form::B1 => Ok(vec![bbar1(&v[0], &w[0])?]),
        Form::B2 => Ok(vec![bbar2(&v[0], &w[0])?]),
        Form::B5(i, j, k) => {
            let (a, b) = bbar5((i, j, k), (&v[0], &v[1]), (&w[0], &w[1]))?;
            Ok(vec![a, b])
        }
    }
}

fn apply_blocks(spec: &MultiplierSpec, u: &[SpectralField]) -> Result<Vec<SpectralField>> {
    if spec.is_identity() {
        return Ok(u.to_vec());
    }
    u.iter().map(|f| apply_multiplier(spec, f)).collect()
}

/// `B(u, v) = B̄(Mu, Nv)`.
pub fn compose_b(sel: &BilinearSelector, u: &[SpectralField], v: &[SpectralField]) -> Result<Vec<SpectralField>> {
    let mu = apply_blocks(&sel.m_spec, u)?;
    let nv = apply_blocks(&sel.n_spec, v)?;
    bbar(sel.form, &mu, &nv)
}

/// `N` applied block-wise.
pub fn apply_n(sel: &BilinearSelector, u: &[SpectralField]) -> Result<Vec<SpectralField>> {
    apply_blocks(&sel.n_spec, u)
}

/// `Σ_blocks ⟨a, b⟩`.
pub fn block_inner(a: &[SpectralField], b: &[SpectralField]) -> f64 {
    a.iter().zip(b).map(|(x, y)| inner(x, y)).sum()
}

/// `b(u, v, w) = ⟨B(u, v), w⟩`.
pub fn trilinear(sel: &BilinearSelector, u: &[SpectralField], v: &[SpectralField], w: &[SpectralField]) -> Result<f64> {
    let b = compose_b(sel, u, v)?;
    if w.len() != b.len() {
        return Err(Error::Config("block count mismatch in trilinear form".into()));
    }
    Ok(block_inner(&b, w))
}
