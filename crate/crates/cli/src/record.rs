//! Experiment records and their CSV / JSON-lines encodings.

use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// One solver run. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentRecord {
    pub instance_id: String,
    pub mode: String,
    pub solver: String,
    pub value: f64,
    pub opt: Option<f64>,
    pub ratio: Option<f64>,
    pub oracle_calls: u64,
    pub wall_ms: Option<f64>,
    pub seed: Option<u64>,
}

pub const CSV_HEADER: [&str; 9] = [
    "instance_id",
    "mode",
    "solver",
    "value",
    "opt",
    "ratio",
    "oracle_calls",
    "wall_ms",
    "seed",
];

impl ExperimentRecord {
    /// Sets `opt` and derives `ratio = value / opt` (absent when `opt` is zero).
    pub fn with_opt(mut self, opt: Option<f64>) -> Self {
        self.opt = opt;
        self.ratio = opt.filter(|o| *o != 0.0).map(|o| self.value / o);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

fn check_finite(r: &ExperimentRecord) -> CliResult<()> {
    let floats = [Some(r.value), r.opt, r.ratio, r.wall_ms];
    if floats.iter().flatten().any(|v| !v.is_finite()) {
        return Err(CliError::Output(format!(
            "record for {} has a non-finite number",
            r.instance_id
        )));
    }
    Ok(())
}

/// Writes records with a header row (CSV) or one object per line (JSONL).
pub fn write_records<W: Write>(out: W, records: &[ExperimentRecord], format: Format) -> CliResult<()> {
    for r in records {
        check_finite(r)?;
    }
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_HEADER)?;
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, r).map_err(|e| CliError::Output(e.to_string()))?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

pub fn records_to_string(records: &[ExperimentRecord], format: Format) -> CliResult<String> {
    let mut buf = Vec::new();
    write_records(&mut buf, records, format)?;
    Ok(String::from_utf8(buf).expect("encoders emit UTF-8"))
}

/// Parses CSV with the mandatory header in the fixed column order.
pub fn parse_csv<R: Read>(input: R) -> CliResult<Vec<ExperimentRecord>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r.headers().map_err(|e| CliError::Parse(e.to_string()))?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(CliError::Parse(format!(
            "expected header {}, found {}",
            CSV_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| CliError::Parse(e.to_string())))
        .collect()
}

/// Parses one JSON object per non-blank line.
pub fn parse_jsonl<R: BufRead>(input: R) -> CliResult<Vec<ExperimentRecord>> {
    let mut records = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r = serde_json::from_str(&line).map_err(|e| CliError::Parse(format!("line {}: {e}", n + 1)))?;
        records.push(r);
    }
    Ok(records)
}

pub fn parse_records(text: &str, format: Format) -> CliResult<Vec<ExperimentRecord>> {
    match format {
        Format::Csv => parse_csv(text.as_bytes()),
        Format::Jsonl => parse_jsonl(text.as_bytes()),
    }
}
