//! Data payloads written to `--out`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde_json::{json, Value};
use tpgabor::export::{
    fmt_f64, write_curve, write_dual_table, write_matrix, write_signal, write_zak_grid,
};
use tpgabor::{DualWindowTable, FiniteGaborSystem, SampledSignal, ZakGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub enum Payload {
    /// `x,value`
    Curve(Vec<(f64, f64)>),
    /// `index,value`
    Signal(SampledSignal),
    /// `x,xi,re,im,abs2`
    Zak(ZakGrid),
    /// `x_offset,i,support_point,value`
    Dual(DualWindowTable),
    /// `row,col,re,im` of the synthesis matrix
    Synthesis(FiniteGaborSystem),
    /// `trial,rel_error`
    Trials(Vec<f64>),
}

impl Payload {
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        match self {
            Payload::Curve(points) => write_curve(out, points),
            Payload::Signal(s) => write_signal(out, s),
            Payload::Zak(grid) => write_zak_grid(out, grid),
            Payload::Dual(table) => write_dual_table(out, table),
            Payload::Synthesis(sys) => write_matrix(out, &sys.synthesis_matrix()),
            Payload::Trials(errs) => {
                writeln!(out, "trial,rel_error")?;
                for (t, e) in errs.iter().enumerate() {
                    writeln!(out, "{t},{}", fmt_f64(*e))?;
                }
                Ok(())
            }
        }
    }

    /// Same rows as the CSV form, as `{"columns": [...], "rows": [[...], ...]}`.
    pub fn to_json(&self) -> Value {
        let (columns, rows): (&[&str], Vec<Value>) = match self {
            Payload::Curve(points) => (
                &["x", "value"],
                points.iter().map(|&(x, v)| json!([x, v])).collect(),
            ),
            Payload::Signal(s) => (
                &["index", "value"],
                s.indexed().map(|(n, v)| json!([n, v])).collect(),
            ),
            Payload::Zak(grid) => (
                &["x", "xi", "re", "im", "abs2"],
                (0..grid.nx)
                    .flat_map(|p| (0..grid.nxi).map(move |q| (p, q)))
                    .map(|(p, q)| {
                        let z = grid.get(p, q);
                        json!([grid.x(p), grid.xi(q), z.re, z.im, z.norm_sqr()])
                    })
                    .collect(),
            ),
            Payload::Dual(table) => (
                &["x_offset", "i", "support_point", "value"],
                table
                    .rows()
                    .map(|(x, i, t, v)| json!([x, i, t, v]))
                    .collect(),
            ),
            Payload::Synthesis(sys) => {
                let m = sys.synthesis_matrix();
                (
                    &["row", "col", "re", "im"],
                    (0..m.nrows())
                        .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
                        .map(|(r, c)| json!([r, c, m[(r, c)].re, m[(r, c)].im]))
                        .collect(),
                )
            }
            Payload::Trials(errs) => (
                &["trial", "rel_error"],
                errs.iter()
                    .enumerate()
                    .map(|(t, e)| json!([t, e]))
                    .collect(),
            ),
        };
        json!({ "columns": columns, "rows": rows })
    }

    pub fn save(&self, path: &Path, format: Format) -> io::Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        match format {
            Format::Csv => self.write_csv(&mut out)?,
            Format::Json => {
                serde_json::to_writer(&mut out, &self.to_json())?;
                writeln!(out)?;
            }
        }
        out.flush()
    }
}
