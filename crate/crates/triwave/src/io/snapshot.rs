//! Binary snapshot format for a field triple plus its parameters.
//!
//! Layout (all integers little-endian, all floats IEEE-754 f64 LE):
//!
//!   magic  b"TRIW"
//!   version        u16  (currently 1)
//!   dim            u8
//!   n_per_dim      u32
//!   half_width     f64
//!   γ₁ γ₂ γ₃ ω     4 × f64
//!   c              dim × f64
//!   payload        3 components × n^dim × (re, im) f64, row-major
//!
//! Round trips are bit-exact.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{make_grid, ComplexField, Grid};
use crate::state::{Params, TriField};

pub const MAGIC: &[u8; 4] = b"TRIW";
pub const VERSION: u16 = 1;

pub fn write_snapshot(path: impl AsRef<Path>, field: &TriField, params: &Params) -> Result<()> {
    let grid = field.grid();
    if params.c.len() != grid.dim() {
        return Err(Error::GridMismatch);
    }
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&[grid.dim() as u8])?;
    out.write_all(&(grid.n_per_dim() as u32).to_le_bytes())?;
    for x in [grid.half_width(), params.gamma1, params.gamma2, params.gamma3, params.omega] {
        out.write_all(&x.to_le_bytes())?;
    }
    for &x in &params.c {
        out.write_all(&x.to_le_bytes())?;
    }
    for comp in field.components() {
        for z in comp.values() {
            out.write_all(&z.re.to_le_bytes())?;
            out.write_all(&z.im.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn read_exact_or(r: &mut impl Read, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf)
        .map_err(|_| Error::Snapshot(format!("truncated file while reading {what}")))
}

fn read_f64(r: &mut impl Read, what: &str) -> Result<f64> {
    let mut b = [0u8; 8];
    read_exact_or(r, &mut b, what)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<(TriField, Params)> {
    let mut r = BufReader::new(File::open(path)?);

    let mut magic = [0u8; 4];
    read_exact_or(&mut r, &mut magic, "magic")?;
    if &magic != MAGIC {
        return Err(Error::Snapshot(format!("bad magic {magic:?}, expected {MAGIC:?}")));
    }
    let mut v = [0u8; 2];
    read_exact_or(&mut r, &mut v, "version")?;
    let version = u16::from_le_bytes(v);
    if version != VERSION {
        return Err(Error::Snapshot(format!(
            "unsupported version {version}, this reader understands {VERSION}"
        )));
    }
    let mut d = [0u8; 1];
    read_exact_or(&mut r, &mut d, "dim")?;
    let dim = d[0] as usize;
    let mut nb = [0u8; 4];
    read_exact_or(&mut r, &mut nb, "n_per_dim")?;
    let n = u32::from_le_bytes(nb) as usize;
    let half_width = read_f64(&mut r, "half_width")?;
    let gamma1 = read_f64(&mut r, "gamma1")?;
    let gamma2 = read_f64(&mut r, "gamma2")?;
    let gamma3 = read_f64(&mut r, "gamma3")?;
    let omega = read_f64(&mut r, "omega")?;

    let grid: Arc<Grid> =
        make_grid(dim, n, half_width).map_err(|e| Error::Snapshot(format!("bad header: {e}")))?;
    let mut c = Vec::with_capacity(dim);
    for a in 0..dim {
        c.push(read_f64(&mut r, &format!("c[{a}]"))?);
    }
    let params = Params::new(gamma1, gamma2, gamma3, omega, c)
        .map_err(|e| Error::Snapshot(format!("bad header: {e}")))?;

    let total = grid.total_points();
    let mut read_component = |name: &str| -> Result<ComplexField> {
        let mut values = Vec::with_capacity(total);
        let mut buf = vec![0u8; total * 16];
        read_exact_or(&mut r, &mut buf, name)?;
        for chunk in buf.chunks_exact(16) {
            let re = f64::from_le_bytes(chunk[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(chunk[8..].try_into().expect("8 bytes"));
            values.push(Complex64::new(re, im));
        }
        ComplexField::new(grid.clone(), values)
    };
    let u = read_component("u payload")?;
    let v = read_component("v payload")?;
    let w = read_component("w payload")?;

    // no trailing bytes allowed
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(Error::Snapshot("trailing bytes after payload".into()));
    }

    Ok((TriField::new(u, v, w)?, params))
}
