//! On-disk formats: binary spectral snapshots, the diagnostics table and
//! the run manifest.
//!
//! Snapshot layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4 | magic `NSMS` |
//! | 4 | `u32` version (1) |
//! | 4 | `u32` dim |
//! | 4 | `u32` n_modes |
//! | 8 | `f64` period |
//! | 8 | `f64` time |
//!
//! followed, for each velocity component in turn, by every coefficient as an
//! `(f64 re, f64 im)` pair. Coefficients are ordered row-major over the
//! signed lattice, each wavenumber ascending from `-n/2+1` to `n/2`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::grid::TorusGrid;
use crate::solver::DiagnosticsRow;

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"NSMS";
pub const SNAPSHOT_VERSION: u32 = 1;
pub const DIAGNOSTICS_HEADER: [&str; 6] = ["time", "energy", "enstrophy", "max_div", "norm_x_half", "norm_F"];

/// Flat storage indices in file order.
fn lattice_order(grid: &TorusGrid) -> Vec<usize> {
    let half = (grid.n_modes() / 2) as i64;
    let range: Vec<i64> = (-half + 1..=half).collect();
    let third: &[i64] = if grid.dim() == 3 { &range } else { &[0] };
    let mut order = Vec::with_capacity(grid.len());
    for &a in &range {
        for &b in &range {
            for &c in third {
                order.push(grid.index_of([a, b, c]).expect("lattice mode within grid"));
            }
        }
    }
    order
}

pub fn write_snapshot_to<W: Write>(mut w: W, u: &SpectralVectorField, time: f64) -> Result<()> {
    let grid = u.grid();
    w.write_all(SNAPSHOT_MAGIC)?;
    w.write_u32::<LittleEndian>(SNAPSHOT_VERSION)?;
    w.write_u32::<LittleEndian>(grid.dim() as u32)?;
    w.write_u32::<LittleEndian>(grid.n_modes() as u32)?;
    w.write_f64::<LittleEndian>(grid.period())?;
    w.write_f64::<LittleEndian>(time)?;
    let order = lattice_order(grid);
    for c in u.components() {
        for &flat in &order {
            w.write_f64::<LittleEndian>(c[flat].re)?;
            w.write_f64::<LittleEndian>(c[flat].im)?;
        }
    }
    Ok(())
}

/// Returns the field and its time stamp.
pub fn read_snapshot_from<R: Read>(mut r: R) -> Result<(SpectralVectorField, f64)> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(Error::Snapshot(format!("bad magic {magic:?}")));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != SNAPSHOT_VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let dim = r.read_u32::<LittleEndian>()? as usize;
    let n_modes = r.read_u32::<LittleEndian>()? as usize;
    let period = r.read_f64::<LittleEndian>()?;
    let time = r.read_f64::<LittleEndian>()?;
    let grid = TorusGrid::new(dim, n_modes, period).map_err(|e| Error::Snapshot(format!("bad header: {e}")))?;
    let order = lattice_order(&grid);
    let mut coeffs = vec![vec![Complex64::default(); grid.len()]; dim];
    for c in &mut coeffs {
        for &flat in &order {
            let re = r.read_f64::<LittleEndian>()?;
            let im = r.read_f64::<LittleEndian>()?;
            c[flat] = Complex64::new(re, im);
        }
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Snapshot("trailing bytes after body".into()));
    }
    let mut u = SpectralVectorField::new(grid, coeffs)?;
    u.mark_divergence_free(1e-12);
    Ok((u, time))
}

pub fn write_snapshot(path: &Path, u: &SpectralVectorField, time: f64) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_snapshot_to(&mut w, u, time)?;
    w.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<(SpectralVectorField, f64)> {
    read_snapshot_from(BufReader::new(File::open(path)?))
}

/// Seventeen significant digits, enough to round-trip any `f64`.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_diagnostics_to<W: Write>(w: W, rows: &[DiagnosticsRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(DIAGNOSTICS_HEADER)?;
    for r in rows {
        out.write_record([r.time, r.energy, r.enstrophy, r.max_div, r.norm_x_half, r.norm_f].map(fmt))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_diagnostics(path: &Path, rows: &[DiagnosticsRow]) -> Result<()> {
    write_diagnostics_to(File::create(path)?, rows)
}

pub fn read_diagnostics(path: &Path) -> Result<Vec<DiagnosticsRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != DIAGNOSTICS_HEADER {
        return Err(Error::InvalidArgument(format!("unexpected diagnostics header {header:?}")));
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let v: Vec<f64> = record
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| Error::InvalidArgument(format!("bad number {s:?}: {e}"))))
            .collect::<Result<_>>()?;
        if v.len() != 6 {
            return Err(Error::InvalidArgument(format!("expected 6 columns, got {}", v.len())));
        }
        rows.push(DiagnosticsRow {
            time: v[0],
            energy: v[1],
            enstrophy: v[2],
            max_div: v[3],
            norm_x_half: v[4],
            norm_f: v[5],
        });
    }
    Ok(rows)
}

/// Record of one command invocation, written as `manifest.json`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    /// Seconds since the Unix epoch.
    pub started_at: f64,
    pub finished_at: f64,
    pub outputs: Vec<PathBuf>,
    pub exit_code: i32,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
    }
}
