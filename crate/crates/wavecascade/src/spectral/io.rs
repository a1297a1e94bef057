//! Binary snapshot format for scalar fields.
//!
//! Layout: 16-byte magic `WAVECASCADE-F64\0`, u32-LE nx, u32-LE ny,
//! f64-LE lx, f64-LE ly, then nx·ny f64-LE values in row-major order
//! (x fastest). Round-trips are bit-exact.

use std::io::{Read, Write};
use std::sync::Arc;

use super::{PeriodicGrid, ScalarField};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 16] = b"WAVECASCADE-F64\0";

pub fn write_field<W: Write>(w: &mut W, field: &ScalarField) -> Result<()> {
    let g = &field.grid;
    w.write_all(MAGIC)?;
    w.write_all(&(g.nx as u32).to_le_bytes())?;
    w.write_all(&(g.ny as u32).to_le_bytes())?;
    w.write_all(&g.lx.to_le_bytes())?;
    w.write_all(&g.ly.to_le_bytes())?;
    for v in &field.values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field<R: Read>(r: &mut R) -> Result<ScalarField> {
    let mut magic = [0u8; 16];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::InvalidInput("bad field snapshot magic".into()));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let nx = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b4)?;
    let ny = u32::from_le_bytes(b4) as usize;
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let lx = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let ly = f64::from_le_bytes(b8);
    let grid = PeriodicGrid::new(nx, ny, lx, ly)?;
    let mut values = vec![0.0; nx * ny];
    for v in values.iter_mut() {
        r.read_exact(&mut b8)?;
        *v = f64::from_le_bytes(b8);
    }
    Ok(ScalarField::from_values(&grid, values))
}

pub fn save_field(path: &std::path::Path, field: &ScalarField) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_field(&mut f, field)
}

pub fn load_field(path: &std::path::Path) -> Result<ScalarField> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    read_field(&mut f)
}

#[allow(dead_code)]
fn _grid_arc(field: &ScalarField) -> Arc<PeriodicGrid> {
    field.grid.clone()
}
