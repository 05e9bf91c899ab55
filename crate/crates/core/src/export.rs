//! CSV writers. Floats are written with 17 significant digits so files
//! round-trip exactly and are byte-identical across runs.

use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::discretize::SampledSignal;
use crate::dual::DualWindowTable;
use crate::zak::ZakGrid;

/// `{:.16e}`: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `x,xi,re,im,abs2`, row-major in `x`.
pub fn write_zak_grid<W: Write>(out: &mut W, grid: &ZakGrid) -> io::Result<()> {
    writeln!(out, "x,xi,re,im,abs2")?;
    for p in 0..grid.nx {
        for q in 0..grid.nxi {
            let z = grid.get(p, q);
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_f64(grid.x(p)),
                fmt_f64(grid.xi(q)),
                fmt_f64(z.re),
                fmt_f64(z.im),
                fmt_f64(z.norm_sqr())
            )?;
        }
    }
    Ok(())
}

/// `index,value`
pub fn write_signal<W: Write>(out: &mut W, s: &SampledSignal) -> io::Result<()> {
    writeln!(out, "index,value")?;
    for (n, v) in s.indexed() {
        writeln!(out, "{n},{}", fmt_f64(v))?;
    }
    Ok(())
}

/// `index,re,im`
pub fn write_complex_signal<W: Write>(out: &mut W, values: &[Complex64]) -> io::Result<()> {
    writeln!(out, "index,re,im")?;
    for (n, v) in values.iter().enumerate() {
        writeln!(out, "{n},{},{}", fmt_f64(v.re), fmt_f64(v.im))?;
    }
    Ok(())
}

/// `x_offset,i,support_point,value`
pub fn write_dual_table<W: Write>(out: &mut W, table: &DualWindowTable) -> io::Result<()> {
    writeln!(out, "x_offset,i,support_point,value")?;
    for (x, i, t, v) in table.rows() {
        writeln!(out, "{},{i},{},{}", fmt_f64(x), fmt_f64(t), fmt_f64(v))?;
    }
    Ok(())
}

/// `row,col,re,im`, row-major.
pub fn write_matrix<W: Write>(out: &mut W, m: &DMatrix<Complex64>) -> io::Result<()> {
    writeln!(out, "row,col,re,im")?;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            writeln!(out, "{r},{c},{},{}", fmt_f64(z.re), fmt_f64(z.im))?;
        }
    }
    Ok(())
}

/// `x,value`
pub fn write_curve<W: Write>(out: &mut W, points: &[(f64, f64)]) -> io::Result<()> {
    writeln!(out, "x,value")?;
    for &(x, v) in points {
        writeln!(out, "{},{}", fmt_f64(x), fmt_f64(v))?;
    }
    Ok(())
}
