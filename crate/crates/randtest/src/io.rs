//! CSV formats for paired and censored paired observations.
//!
//! Both formats require a header row. Parse errors carry the 1-based line
//! number of the offending row.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use randtest_core::{CensoredPairedObservation, PairedObservation};

pub const PAIRED_HEADER: [&str; 2] = ["x", "y"];
pub const CENSORED_HEADER: [&str; 4] = ["time1", "status1", "time2", "status2"];

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Open {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("expected header `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("no observations")]
    Empty,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Write(#[from] std::io::Error),
}

fn parse_error(line: u64, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}

fn reader<R: Read>(input: R, expected: &[&str]) -> Result<csv::Reader<R>, IoError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(input);
    let header = rdr.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(IoError::Header {
            expected: expected.join(","),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    Ok(rdr)
}

fn records<R: Read>(
    input: R,
    expected: &[&str],
) -> Result<impl Iterator<Item = Result<(u64, csv::StringRecord), IoError>>, IoError> {
    let width = expected.len();
    Ok(reader(input, expected)?.into_records().map(move |record| {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != width {
            return Err(parse_error(line, format!("expected {width} fields, found {}", record.len())));
        }
        Ok((line, record))
    }))
}

fn real(line: u64, name: &str, field: &str) -> Result<f64, IoError> {
    let value: f64 = field
        .parse()
        .map_err(|_| parse_error(line, format!("{name}: `{field}` is not a number")))?;
    if !value.is_finite() {
        return Err(parse_error(line, format!("{name}: `{field}` is not finite")));
    }
    Ok(value)
}

fn time(line: u64, name: &str, field: &str) -> Result<f64, IoError> {
    let value = real(line, name, field)?;
    if value < 0.0 {
        return Err(parse_error(line, format!("{name}: negative time {field}")));
    }
    Ok(value)
}

fn status(line: u64, name: &str, field: &str) -> Result<bool, IoError> {
    match field {
        "1" => Ok(true),
        "0" => Ok(false),
        _ => Err(parse_error(line, format!("{name}: status must be 0 or 1, found `{field}`"))),
    }
}

fn open(path: &Path) -> Result<File, IoError> {
    File::open(path).map_err(|source| IoError::Open {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_paired<R: Read>(input: R) -> Result<Vec<PairedObservation>, IoError> {
    let mut out = Vec::new();
    for row in records(input, &PAIRED_HEADER)? {
        let (line, r) = row?;
        out.push(PairedObservation::new(real(line, "x", &r[0])?, real(line, "y", &r[1])?));
    }
    if out.is_empty() {
        return Err(IoError::Empty);
    }
    Ok(out)
}

pub fn parse_censored<R: Read>(input: R) -> Result<Vec<CensoredPairedObservation>, IoError> {
    let mut out = Vec::new();
    for row in records(input, &CENSORED_HEADER)? {
        let (line, r) = row?;
        out.push(CensoredPairedObservation::new(
            time(line, "time1", &r[0])?,
            status(line, "status1", &r[1])?,
            time(line, "time2", &r[2])?,
            status(line, "status2", &r[3])?,
        ));
    }
    if out.is_empty() {
        return Err(IoError::Empty);
    }
    Ok(out)
}

pub fn read_paired(path: &Path) -> Result<Vec<PairedObservation>, IoError> {
    parse_paired(open(path)?)
}

pub fn read_censored(path: &Path) -> Result<Vec<CensoredPairedObservation>, IoError> {
    parse_censored(open(path)?)
}

/// Writes with shortest round-trip float formatting.
pub fn write_paired<W: Write>(output: W, data: &[PairedObservation]) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(output);
    w.write_record(PAIRED_HEADER)?;
    for p in data {
        w.write_record([p.x.to_string(), p.y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_censored<W: Write>(output: W, data: &[CensoredPairedObservation]) -> Result<(), IoError> {
    let flag = |d: bool| if d { "1" } else { "0" };
    let mut w = csv::Writer::from_writer(output);
    w.write_record(CENSORED_HEADER)?;
    for o in data {
        w.write_record([
            o.time1.to_string(),
            flag(o.event1).to_string(),
            o.time2.to_string(),
            flag(o.event2).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
