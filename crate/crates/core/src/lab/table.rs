//! CSV output. Floats are written with 17 significant digits so that every
//! value reads back bit-exactly; rows use `\n` and `,`.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::lab::sweep::{DivergenceRecord, SweepRecord};
use crate::minima::MinimumReport;

/// Product relation bound checked on every written sweep row.
pub const PRODUCT_TOL: f64 = 1e-10;
/// Boundary relation bound checked on every written sweep row.
pub const BOUNDARY_TOL: f64 = 1e-9;

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn write_rows<W: Write, const N: usize>(
    out: W,
    header: &[&str; N],
    rows: impl IntoIterator<Item = [f64; N]>,
) -> Result<()> {
    let mut w = writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| format_float(x)))?;
    }
    w.flush()?;
    Ok(())
}

/// Rejects a row whose lengths are not positive, whose gaps are negative, or
/// whose stored fields no longer satisfy the product and boundary relations.
pub fn check_record(r: &SweepRecord) -> Result<()> {
    let lengths = [
        r.l_alpha_star,
        r.l_beta_star,
        r.l_beta_plus,
        r.l_alpha_minus,
    ];
    if !lengths.iter().all(|&l| l > 0.0) {
        return Err(Error::InvariantViolated(format!(
            "nonpositive length at theta {}",
            r.theta
        )));
    }
    if !(r.gap_alpha >= 0.0 && r.gap_beta >= 0.0) {
        return Err(Error::InvariantViolated(format!(
            "negative gap at theta {}",
            r.theta
        )));
    }
    let (product, boundary) = r.residuals()?;
    if !(product <= PRODUCT_TOL && boundary <= BOUNDARY_TOL) {
        return Err(Error::InvariantViolated(format!(
            "relations fail at theta {}: product {product:.3e}, boundary {boundary:.3e}",
            r.theta
        )));
    }
    Ok(())
}

pub fn write_sweep_csv<W: Write>(out: W, records: &[SweepRecord]) -> Result<()> {
    records.iter().try_for_each(check_record)?;
    write_rows(
        out,
        &SweepRecord::HEADER,
        records.iter().map(SweepRecord::values),
    )
}

pub fn write_divergence_csv<W: Write>(out: W, records: &[DivergenceRecord]) -> Result<()> {
    write_rows(
        out,
        &DivergenceRecord::HEADER,
        records.iter().map(DivergenceRecord::values),
    )
}

pub const MINIMUM_HEADER: [&str; 6] = ["a", "b", "l_alpha", "l_beta", "value", "criticality"];

/// Rows of `(a, b, report)`.
pub fn write_minima_csv<W: Write>(out: W, rows: &[(f64, f64, MinimumReport)]) -> Result<()> {
    write_rows(
        out,
        &MINIMUM_HEADER,
        rows.iter()
            .map(|(a, b, m)| [*a, *b, m.l_alpha, m.l_beta, m.value, m.criticality]),
    )
}

/// Reads a table written by this module: the header and the float rows.
pub fn read_table<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::ReaderBuilder::new().from_reader(input);
    let header = r.headers()?.iter().map(str::to_owned).collect();
    let rows = r
        .records()
        .map(|rec| {
            rec?.iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| Error::Io(format!("bad number {f:?}: {e}")))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((header, rows))
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let (header, rows) = read_table(input)?;
    if header != SweepRecord::HEADER {
        return Err(Error::Io(format!("unexpected sweep header {header:?}")));
    }
    rows.into_iter()
        .map(|v| {
            let v: [f64; 15] = v
                .try_into()
                .map_err(|_| Error::Io("sweep row has wrong width".into()))?;
            Ok(SweepRecord {
                theta: v[0],
                theta_alpha: v[1],
                theta_beta: v[2],
                l_alpha_star: v[3],
                l_beta_star: v[4],
                d: v[5],
                l_beta_plus: v[6],
                l_alpha_minus: v[7],
                gap_alpha: v[8],
                gap_beta: v[9],
                dist_to_minimum: v[10],
                x: v[11],
                y: v[12],
                re_z: v[13],
                im_z: v[14],
            })
        })
        .collect()
}
