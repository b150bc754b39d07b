//! Binary field snapshots.
//!
//! Layout: the 8-byte magic `RGFSNAP1`, a little-endian `u64` header length,
//! a JSON header, then for each field, for each component, every coefficient
//! in flat row-major order (axis 0 slowest) as two little-endian `f64`
//! (real, imaginary).

use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{FieldKind, SpectralField};
use super::grid::{Grid, GridSpec};
use super::multiplier::MultiplierSpec;
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"RGFSNAP1";
const INDEX_ORDER: &str = "field-major, component-major, row-major over axes (axis 0 slowest), (re, im) f64 little-endian";

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Header {
    grid: GridSpec,
    t: f64,
    index_order: String,
    multipliers: BTreeMap<String, MultiplierSpec>,
    fields: Vec<FieldKind>,
}

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub t: f64,
    pub multipliers: BTreeMap<String, MultiplierSpec>,
    pub fields: Vec<(FieldKind, SpectralField)>,
}

impl Snapshot {
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let grid = self
            .fields
            .first()
            .ok_or_else(|| Error::Format("snapshot without fields".into()))?
            .1
            .grid()
            .clone();
        for (_, f) in &self.fields {
            if *f.grid() != grid {
                return Err(Error::GridMismatch("snapshot fields on different grids".into()));
            }
        }
        let header = Header {
            grid: grid.spec(),
            t: self.t,
            index_order: INDEX_ORDER.into(),
            multipliers: self.multipliers.clone(),
            fields: self.fields.iter().map(|(k, _)| *k).collect(),
        };
        let h = serde_json::to_vec(&header)?;
        let mut out = Vec::with_capacity(16 + h.len() + self.fields.len() * grid.n_dim() * grid.len() * 16);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(h.len() as u64).to_le_bytes());
        out.extend_from_slice(&h);
        for (_, f) in &self.fields {
            for c in f.comps() {
                for z in c {
                    out.extend_from_slice(&z.re.to_le_bytes());
                    out.extend_from_slice(&z.im.to_le_bytes());
                }
            }
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = bytes;
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("not a snapshot file".into()));
        }
        let mut len = [0u8; 8];
        r.read_exact(&mut len)?;
        let hlen = u64::from_le_bytes(len) as usize;
        if r.len() < hlen {
            return Err(Error::Format("truncated header".into()));
        }
        let header: Header = serde_json::from_slice(&r[..hlen])?;
        r = &r[hlen..];
        let grid = Grid::from_spec(&header.grid)?;
        let need = header.fields.len() * grid.n_dim() * grid.len() * 16;
        if r.len() != need {
            return Err(Error::Format(format!("expected {need} data bytes, found {}", r.len())));
        }
        let mut fields = Vec::new();
        let mut vals = r.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes")));
        for kind in header.fields {
            let mut comps = Vec::new();
            for _ in 0..grid.n_dim() {
                let c: Vec<Complex64> = (0..grid.len())
                    .map(|_| {
                        let re = vals.next().expect("length checked");
                        let im = vals.next().expect("length checked");
                        Complex64::new(re, im)
                    })
                    .collect();
                comps.push(c);
            }
            fields.push((kind, SpectralField::from_components(&grid, comps)?));
        }
        Ok(Snapshot { t: header.t, multipliers: header.multipliers, fields })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path)?;
        f.write_all(&self.to_bytes()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}
