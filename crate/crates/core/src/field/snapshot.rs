//! Binary field snapshots.
//!
//! Layout (little-endian): `"WFLD"`, version `u32`, `d` `u32`, `N_j` as three
//! `u32` (0 for unused axes), 8 reserved zero bytes, then `d` values `L_j` as
//! `f64`, the time tag `f64`, and the interleaved `(re, im)` values, row-major.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::grid::{Axis, Grid, MAX_DIM};
use super::wave::WaveField;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"WFLD";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 32;

pub fn write_snapshot_to(u: &WaveField, mut w: impl Write) -> Result<()> {
    let g = u.grid();
    let mut header = [0u8; HEADER_LEN];
    header[0..4].copy_from_slice(MAGIC);
    header[4..8].copy_from_slice(&VERSION.to_le_bytes());
    header[8..12].copy_from_slice(&(g.dim() as u32).to_le_bytes());
    for j in 0..g.dim() {
        header[12 + 4 * j..16 + 4 * j].copy_from_slice(&(g.n(j) as u32).to_le_bytes());
    }
    w.write_all(&header)?;
    for a in g.axes() {
        w.write_all(&a.half_width.to_le_bytes())?;
    }
    w.write_all(&u.t().to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * g.len());
    for v in u.values() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

pub fn read_snapshot_from(mut r: impl Read) -> Result<WaveField> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)?;
    if &header[0..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let d = u32_at(8) as usize;
    if d == 0 || d > MAX_DIM {
        return Err(Error::Format(format!("dimension {d} out of range")));
    }
    let mut f64_buf = [0u8; 8];
    let mut axes = Vec::with_capacity(d);
    for j in 0..d {
        r.read_exact(&mut f64_buf)?;
        axes.push(Axis { n: u32_at(12 + 4 * j) as usize, half_width: f64::from_le_bytes(f64_buf) });
    }
    let grid = Grid::new(axes).map_err(|e| Error::Format(e.to_string()))?;
    r.read_exact(&mut f64_buf)?;
    let t = f64::from_le_bytes(f64_buf);
    let mut data = vec![0u8; 16 * grid.len()];
    r.read_exact(&mut data)?;
    let values = data
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            )
        })
        .collect();
    WaveField::new(grid, values, t).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_snapshot(u: &WaveField, path: impl AsRef<Path>) -> Result<()> {
    write_snapshot_to(u, BufWriter::new(File::create(path)?))
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<WaveField> {
    read_snapshot_from(BufReader::new(File::open(path)?))
}
