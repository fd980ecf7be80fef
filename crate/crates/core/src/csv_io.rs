//! Time series as CSV: a header `t,<channel>[,<channel>_stderr]…` followed by
//! one row per sample, numbers written in their shortest round-trip form.

use std::path::Path;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

const STDERR_SUFFIX: &str = "_stderr";

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Renders a series as CSV text.
pub fn to_csv_string(series: &TimeSeries) -> Result<String> {
    let mut buf = Vec::new();
    write_csv_to(series, &mut buf, Path::new("<memory>"))?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

pub fn write_csv(series: &TimeSeries, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(series, std::io::BufWriter::new(file), path)
}

fn write_csv_to(series: &TimeSeries, out: impl std::io::Write, path: &Path) -> Result<()> {
    series.validate()?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header = vec!["t".to_string()];
    for c in &series.channels {
        header.push(c.name.clone());
        if c.stderr.is_some() {
            header.push(format!("{}{STDERR_SUFFIX}", c.name));
        }
    }
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    let mut row = Vec::with_capacity(header.len());
    for i in 0..series.len() {
        row.clear();
        row.push(format!("{:?}", series.t[i]));
        for c in &series.channels {
            row.push(format!("{:?}", c.values[i]));
            if let Some(s) = &c.stderr {
                row.push(format!("{:?}", s[i]));
            }
        }
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_csv(path: &Path) -> Result<TimeSeries> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text, path)
}

/// Parses CSV text; a column `<name>_stderr` directly after `<name>` becomes
/// that channel's standard error.
pub fn parse_csv(text: &str, origin: &Path) -> Result<TimeSeries> {
    let fmt_err = |message: String| Error::Format {
        path: origin.to_path_buf(),
        message,
    };
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header: Vec<String> = r
        .headers()
        .map_err(|e| csv_err(origin, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.first().map(String::as_str) != Some("t") {
        return Err(fmt_err("first column must be `t`".into()));
    }
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for (row, record) in r.records().enumerate() {
        let record = record.map_err(|e| csv_err(origin, e))?;
        for (col, field) in record.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| {
                fmt_err(format!("row {}, column `{}`: `{field}` is not a number", row + 2, header[col]))
            })?;
            columns[col].push(v);
        }
    }
    let mut columns = columns.into_iter();
    let mut series = TimeSeries::new(columns.next().unwrap_or_default());
    let mut pending: Vec<(String, Vec<f64>)> = header.into_iter().skip(1).zip(columns).collect();
    pending.reverse();
    while let Some((name, values)) = pending.pop() {
        let paired = pending
            .last()
            .is_some_and(|(next, _)| next.strip_suffix(STDERR_SUFFIX) == Some(name.as_str()));
        let stderr = if paired { pending.pop().map(|(_, s)| s) } else { None };
        series.push_channel_with_stderr(name, values, stderr)?;
    }
    Ok(series)
}

/// Per-channel sup-norm differences between two series.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// `(channel, max |a − b|)` in the order of the first series; the time
    /// column is listed as `t`.
    pub channels: Vec<(String, f64)>,
    pub tol: f64,
}

impl Comparison {
    pub fn max_diff(&self) -> f64 {
        self.channels.iter().map(|(_, d)| *d).fold(0.0, f64::max)
    }

    /// True when every channel agrees within the tolerance (NaN never agrees).
    pub fn passed(&self) -> bool {
        self.channels.iter().all(|(_, d)| *d <= self.tol)
    }
}

/// Compares the values (not the standard errors) of two series that must
/// have the same length and channel set.
pub fn compare(a: &TimeSeries, b: &TimeSeries, tol: f64) -> Result<Comparison> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!("series lengths differ: {} vs {}", a.len(), b.len())));
    }
    let names_a: Vec<&str> = a.channel_names().collect();
    let mut names_b: Vec<&str> = b.channel_names().collect();
    let mut sorted_a = names_a.clone();
    sorted_a.sort_unstable();
    names_b.sort_unstable();
    if sorted_a != names_b {
        return Err(Error::Shape(format!(
            "channel sets differ: [{}] vs [{}]",
            sorted_a.join(","),
            names_b.join(",")
        )));
    }
    let sup = |x: &[f64], y: &[f64]| {
        x.iter()
            .zip(y)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, |m: f64, d| if d.is_nan() || m.is_nan() { f64::NAN } else { m.max(d) })
    };
    let mut channels = vec![("t".to_string(), sup(&a.t, &b.t))];
    for name in names_a {
        let d = sup(a.channel(name).unwrap(), b.channel(name).unwrap());
        channels.push((name.to_string(), d));
    }
    Ok(Comparison { channels, tol })
}
