//! CSV/JSON exchange formats.
//!
//! Sample files carry `attempt_index,tau,side,normalized_time`; comparison
//! tables carry `x,exact,limit,abs_error`. Reals are written with 17
//! significant digits so they round-trip bit-exactly.

use std::io::{Read, Write};

use serde::Serialize;

use crate::distributions::GridCurve;
use crate::error::{Error, Result};
use crate::exitsim::{ExitRecord, Side};

/// One row of a conditioned-exit sample file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRow {
    pub attempt_index: u64,
    pub tau: f64,
    pub side: Side,
    pub normalized_time: f64,
}

impl SampleRow {
    pub fn new(attempt_index: u64, record: &ExitRecord) -> Self {
        SampleRow {
            attempt_index,
            tau: record.tau,
            side: record.side,
            normalized_time: record.normalized_time,
        }
    }
}

/// `v` in scientific notation with 17 significant digits.
pub fn format_sig17(v: f64) -> String {
    format!("{v:.16e}")
}

const SAMPLE_HEADER: [&str; 4] = ["attempt_index", "tau", "side", "normalized_time"];

pub fn write_samples<W: Write>(writer: W, rows: &[SampleRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(SAMPLE_HEADER)?;
    for row in rows {
        out.write_record([
            row.attempt_index.to_string(),
            format_sig17(row.tau),
            row.side.as_str().to_string(),
            format_sig17(row.normalized_time),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_samples<R: Read>(reader: R) -> Result<Vec<SampleRow>> {
    let mut input = csv::Reader::from_reader(reader);
    let header = input.headers()?.clone();
    if header.iter().ne(SAMPLE_HEADER) {
        return Err(Error::Format(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (line, record) in input.records().enumerate() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let bad = |what: &str| Error::Format(format!("row {}: bad {what}", line + 1));
        rows.push(SampleRow {
            attempt_index: field(0).parse().map_err(|_| bad("attempt_index"))?,
            tau: field(1).parse().map_err(|_| bad("tau"))?,
            side: field(2).parse().map_err(|_| bad("side"))?,
            normalized_time: field(3).parse().map_err(|_| bad("normalized_time"))?,
        });
    }
    Ok(rows)
}

fn check_same_grid(exact: &GridCurve, limit: &GridCurve) -> Result<()> {
    if exact.xs() != limit.xs() {
        return Err(Error::GridMismatch("comparison curves on different grids".into()));
    }
    Ok(())
}

/// Writes `x,exact,limit,abs_error` rows for two curves on a common grid.
pub fn write_comparison_csv<W: Write>(writer: W, exact: &GridCurve, limit: &GridCurve) -> Result<()> {
    check_same_grid(exact, limit)?;
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["x", "exact", "limit", "abs_error"])?;
    for ((x, e), l) in exact.xs().iter().zip(exact.ys()).zip(limit.ys()) {
        out.write_record([
            format_sig17(*x),
            format_sig17(*e),
            format_sig17(*l),
            format_sig17((e - l).abs()),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ComparisonJson<'a> {
    x: &'a [f64],
    exact: &'a [f64],
    limit: &'a [f64],
    abs_error: Vec<f64>,
}

/// JSON counterpart of [`write_comparison_csv`]: one object of parallel arrays.
pub fn write_comparison_json<W: Write>(writer: W, exact: &GridCurve, limit: &GridCurve) -> Result<()> {
    check_same_grid(exact, limit)?;
    let doc = ComparisonJson {
        x: exact.xs(),
        exact: exact.ys(),
        limit: limit.ys(),
        abs_error: exact.ys().iter().zip(limit.ys()).map(|(e, l)| (e - l).abs()).collect(),
    };
    serde_json::to_writer(writer, &doc).map_err(|e| Error::Io(e.to_string()))
}
