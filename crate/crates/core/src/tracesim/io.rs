use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::record::{PacketRecord, Trace, FRAME_HEADER_BYTES};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceFormat {
    Jsonl,
    Csv,
}

impl TraceFormat {
    /// Guesses from the file extension; anything but `.csv` is JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => TraceFormat::Csv,
            _ => TraceFormat::Jsonl,
        }
    }
}

impl FromStr for TraceFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(TraceFormat::Jsonl),
            "csv" => Ok(TraceFormat::Csv),
            other => Err(Error::invalid(format!("unknown trace format `{other}`"))),
        }
    }
}

/// Reads a trace with the MAC-level frame header.
pub fn ingest_trace(path: impl AsRef<Path>, format: TraceFormat) -> Result<Trace> {
    ingest_trace_with_header(path, format, FRAME_HEADER_BYTES)
}

pub fn ingest_trace_with_header(
    path: impl AsRef<Path>,
    format: TraceFormat,
    header_bytes: u32,
) -> Result<Trace> {
    let path = path.as_ref();
    let records = match format {
        TraceFormat::Jsonl => read_jsonl(path)?,
        TraceFormat::Csv => read_csv(path)?,
    };
    let device = match records.first() {
        Some(r) => r.device.clone(),
        None => path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("unknown")
            .to_string(),
    };
    Trace::new(device, header_bytes, records)
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn check_row(path: &Path, line: usize, r: &PacketRecord) -> Result<()> {
    if r.signed_size == 0 {
        return Err(parse_error(path, line, "signed_size must be nonzero"));
    }
    Ok(())
}

fn read_jsonl(path: &Path) -> Result<Vec<PacketRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r: PacketRecord =
            serde_json::from_str(&line).map_err(|e| parse_error(path, i + 1, e.to_string()))?;
        check_row(path, i + 1, &r)?;
        records.push(r);
    }
    Ok(records)
}

fn read_csv(path: &Path) -> Result<Vec<PacketRecord>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| parse_error(path, 0, e.to_string()))?;
    let mut records = Vec::new();
    for (i, row) in reader.deserialize::<PacketRecord>().enumerate() {
        // line 1 is the header
        let line = i + 2;
        let r = row.map_err(|e| parse_error(path, line, e.to_string()))?;
        check_row(path, line, &r)?;
        records.push(r);
    }
    Ok(records)
}

pub fn write_trace(trace: &Trace, path: impl AsRef<Path>, format: TraceFormat) -> Result<()> {
    let path = path.as_ref();
    match format {
        TraceFormat::Jsonl => {
            let mut out = BufWriter::new(File::create(path)?);
            for r in &trace.records {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
        TraceFormat::Csv => {
            let mut w = csv::Writer::from_path(path).map_err(|e| parse_error(path, 0, e.to_string()))?;
            for r in &trace.records {
                w.serialize(r).map_err(|e| parse_error(path, 0, e.to_string()))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
