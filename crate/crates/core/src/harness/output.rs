use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::{HarnessError, PointResult, RunResult};

/// One row of the long-format table. Curve metrics carry the symbol index.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub value: f64,
    pub metric: String,
    pub index: Option<usize>,
    pub estimate: f64,
}

pub const CSV_HEADER: [&str; 6] = ["estimator", "axis", "value", "metric", "index", "estimate"];

fn point_rows(p: &PointResult) -> Vec<Row> {
    let scalar = |metric: &str, estimate: f64| Row { value: p.value, metric: metric.into(), index: None, estimate };
    let mut rows = vec![
        scalar("ber", p.ber),
        scalar("ber_half_width", p.half_width),
        scalar("runs", p.runs as f64),
        scalar("failed_runs", p.failed_runs as f64),
    ];
    let mut curve = |metric: &str, c: &[f64]| {
        rows.extend(c.iter().enumerate().map(|(i, &estimate)| Row {
            value: p.value,
            metric: metric.into(),
            index: Some(i),
            estimate,
        }));
    };
    curve("ber_curve", &p.ber_curve);
    curve("ses_curve", &p.ses_curve);
    if let Some(r) = &p.rank_curve {
        curve("rank_curve", r);
    }
    rows
}

impl RunResult {
    /// The numeric content, one row per (sweep value, metric, index).
    pub fn table(&self) -> Vec<Row> {
        self.points.iter().flat_map(point_rows).collect()
    }
}

pub fn write_csv<W: Write>(result: &RunResult, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let (est, axis) = (result.estimator.to_string(), result.axis.to_string());
    for row in result.table() {
        let index = row.index.map(|i| i.to_string()).unwrap_or_default();
        w.write_record([&est, &axis, &row.value.to_string(), &row.metric, &index, &row.estimate.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(result: &RunResult, path: &Path) -> Result<(), HarnessError> {
    write_csv(result, BufWriter::new(File::create(path)?))
}

/// Reads back what [`write_csv`] wrote.
pub fn parse_csv<R: Read>(input: R) -> Result<Vec<Row>, HarnessError> {
    let mut rd = csv::Reader::from_reader(input);
    let bad = |m: String| HarnessError::Parse(m);
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        if rec.len() != CSV_HEADER.len() {
            return Err(bad(format!("expected {} fields, found {}", CSV_HEADER.len(), rec.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("`{s}`: {e}")));
        let index = match &rec[4] {
            "" => None,
            s => Some(s.parse().map_err(|e| bad(format!("index `{s}`: {e}")))?),
        };
        rows.push(Row { value: num(&rec[2])?, metric: rec[3].to_string(), index, estimate: num(&rec[5])? });
    }
    Ok(rows)
}

/// Whitespace-separated columns for gnuplot and friends: a summary block
/// (`value ber half_width runs failed_runs`), then one block per sweep value
/// (`index ber ses [rank]`), blocks separated by two blank lines.
pub fn write_plotdata<W: Write>(result: &RunResult, mut out: W) -> Result<(), HarnessError> {
    writeln!(out, "# {} vs {}", result.estimator, result.axis)?;
    writeln!(out, "# {} ber half_width runs failed_runs", result.axis)?;
    for p in &result.points {
        writeln!(out, "{} {} {} {} {}", p.value, p.ber, p.half_width, p.runs, p.failed_runs)?;
    }
    for p in &result.points {
        write!(out, "\n\n# {} = {}\n# index ber ses", result.axis, p.value)?;
        writeln!(out, "{}", if p.rank_curve.is_some() { " rank" } else { "" })?;
        for i in 0..p.ber_curve.len() {
            write!(out, "{} {} {}", i, p.ber_curve[i], p.ses_curve[i])?;
            if let Some(r) = &p.rank_curve {
                write!(out, " {}", r[i])?;
            }
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn emit_plotdata(result: &RunResult, path: &Path) -> Result<(), HarnessError> {
    write_plotdata(result, BufWriter::new(File::create(path)?))
}
