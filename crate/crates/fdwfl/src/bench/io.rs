//! CSV formats for spectra, trajectories, and sweep error profiles.
//!
//! Spectrum files carry the header `k,omega,re_0,im_0,...` with one row per
//! grid index. All floats are printed with 17 significant digits so a
//! write-then-read round trip reproduces every value bit for bit.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lti::Trajectory;
use crate::spectra::{FrequencyGrid, Spectrum};

use super::SweepPoint;

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_spectrum_csv(path: &Path, spectrum: &Spectrum) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let dim = spectrum.dim();
    let mut header = String::from("k,omega");
    for r in 0..dim {
        header.push_str(&format!(",re_{r},im_{r}"));
    }
    writeln!(w, "{header}")?;
    for k in 0..spectrum.grid().len() {
        let mut row = format!("{k},{}", fmt(spectrum.grid().omega(k)));
        for r in 0..dim {
            let v = spectrum.value(k)[r];
            row.push_str(&format!(",{},{}", fmt(v.re), fmt(v.im)));
        }
        writeln!(w, "{row}")?;
    }
    Ok(())
}

pub fn read_spectrum_csv(path: &Path) -> Result<Spectrum> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() < 4 || &headers[0] != "k" || &headers[1] != "omega" {
        return Err(Error::InvalidArgument(format!(
            "{} does not carry a spectrum header",
            path.display()
        )));
    }
    let dim = (headers.len() - 2) / 2;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row: std::result::Result<Vec<f64>, _> =
            record.iter().map(|f| f.parse::<f64>()).collect();
        rows.push(row.map_err(|e| Error::InvalidArgument(format!("bad float: {e}")))?);
    }
    let m = rows.len();
    let grid = FrequencyGrid::new(m)?;
    let mut values = DMatrix::zeros(dim, m);
    for (k, row) in rows.iter().enumerate() {
        if row.len() != 2 + 2 * dim {
            return Err(Error::ShapeMismatch(format!(
                "row {k} has {} fields",
                row.len()
            )));
        }
        if row[0] as usize != k || (row[1] - grid.omega(k)).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "row {k} is not on the equidistant grid of {m} points"
            )));
        }
        for r in 0..dim {
            values[(r, k)] = Complex64::new(row[2 + 2 * r], row[3 + 2 * r]);
        }
    }
    Spectrum::new(grid, values)
}

pub fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let (nu, ny) = (traj.u[0].len(), traj.y[0].len());
    let mut header = String::from("t");
    for r in 0..nu {
        header.push_str(&format!(",u_{r}"));
    }
    for r in 0..ny {
        header.push_str(&format!(",y_{r}"));
    }
    writeln!(w, "{header}")?;
    for t in 0..traj.len() {
        let mut row = t.to_string();
        for r in 0..nu {
            row.push_str(&format!(",{}", fmt(traj.u[t][r])));
        }
        for r in 0..ny {
            row.push_str(&format!(",{}", fmt(traj.y[t][r])));
        }
        writeln!(w, "{row}")?;
    }
    Ok(())
}

pub fn read_trajectory_csv(path: &Path) -> Result<Trajectory> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let nu = headers.iter().filter(|h| h.starts_with("u_")).count();
    let ny = headers.iter().filter(|h| h.starts_with("y_")).count();
    if nu == 0 || ny == 0 {
        return Err(Error::InvalidArgument(format!(
            "{} does not carry a trajectory header",
            path.display()
        )));
    }
    let mut u = Vec::new();
    let mut y = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row: std::result::Result<Vec<f64>, _> =
            record.iter().map(|f| f.parse::<f64>()).collect();
        let row = row.map_err(|e| Error::InvalidArgument(format!("bad float: {e}")))?;
        if row.len() != 1 + nu + ny {
            return Err(Error::ShapeMismatch("trajectory row width mismatch".into()));
        }
        u.push(DVector::from_fn(nu, |i, _| row[1 + i]));
        y.push(DVector::from_fn(ny, |i, _| row[1 + nu + i]));
    }
    Trajectory::new(u, y)
}

pub fn write_sweep_csv(path: &Path, points: &[SweepPoint]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "omega,frf_error,transient_error")?;
    for p in points {
        writeln!(
            w,
            "{},{},{}",
            fmt(p.omega),
            fmt(p.frf_error),
            fmt(p.transient_error)
        )?;
    }
    Ok(())
}
