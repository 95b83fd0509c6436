//! CSV event files.
//!
//! Layout: a header row naming `tag` (+1/−1), `weight`, optionally
//! `process`, and any number of variable columns. Rows are events in file
//! order. Columns not requested by the caller are ignored.

use std::io::{Read, Write};
use std::path::Path;

use super::event::{Dataset, Event, Process, Tag};
use crate::error::{Error, Result};

const RESERVED: [&str; 3] = ["tag", "weight", "process"];

/// Reads the events of `path`, keeping the variables named in `schema`.
pub fn load_events(path: impl AsRef<Path>, schema: &[String]) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    read_events(file, Some(schema))
}

/// Reads the events of `path`, keeping every non-reserved column.
pub fn load_events_all(path: impl AsRef<Path>) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    read_events(file, None)
}

pub(crate) fn read_events<R: Read>(reader: R, schema: Option<&[String]>) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let find = |name: &str| header.iter().position(|h| h == name);

    let tag_col = find("tag").ok_or_else(|| Error::MissingColumn("tag".into()))?;
    let weight_col = find("weight").ok_or_else(|| Error::MissingColumn("weight".into()))?;
    let process_col = find("process");

    let schema: Vec<String> = match schema {
        Some(s) => s.to_vec(),
        None => header.iter().filter(|h| !RESERVED.contains(&h.as_str())).cloned().collect(),
    };
    let value_cols = schema
        .iter()
        .map(|name| find(name).ok_or_else(|| Error::MissingColumn(name.clone())))
        .collect::<Result<Vec<_>>>()?;

    let mut dataset = Dataset::new(schema);
    for (k, record) in rdr.records().enumerate() {
        let row = k + 1;
        let record = record?;
        let cell = |col: usize| record.get(col).unwrap_or("");
        let number = |col: usize| -> Result<f64> {
            let raw = cell(col);
            let v: f64 = raw.parse().map_err(|_| Error::Parse {
                row,
                column: header[col].clone(),
                message: format!("`{raw}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse { row, column: header[col].clone(), message: "value is not finite".into() });
            }
            Ok(v)
        };

        let tag_value = number(tag_col)?;
        let tag = if tag_value == 1.0 {
            Tag::Signal
        } else if tag_value == -1.0 {
            Tag::Background
        } else {
            return Err(Error::Parse { row, column: "tag".into(), message: format!("tag must be +1 or -1, got {}", cell(tag_col)) });
        };
        let weight = number(weight_col)?;
        if weight < 0.0 {
            return Err(Error::Parse { row, column: "weight".into(), message: "weight must be non-negative".into() });
        }
        let process = match process_col {
            Some(col) => cell(col).parse::<Process>().map_err(|m| Error::Parse { row, column: "process".into(), message: m })?,
            None => match tag {
                Tag::Signal => Process::Signal,
                Tag::Background => Process::Other,
            },
        };
        let values = value_cols.iter().map(|&c| number(c)).collect::<Result<Vec<_>>>()?;
        dataset.events.push(Event::new(values, tag, weight, process));
    }
    Ok(dataset)
}

/// Writes `d` as CSV. Floats use the shortest representation that parses
/// back to the same value, so a write/read cycle is lossless.
pub fn write_events<W: Write>(writer: W, d: &Dataset) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["tag".to_string(), "weight".into(), "process".into()];
    header.extend(d.schema.iter().cloned());
    w.write_record(&header)?;
    for e in &d.events {
        let mut row = Vec::with_capacity(header.len());
        row.push(i8::from(e.tag).to_string());
        row.push(e.weight.to_string());
        row.push(e.process.to_string());
        row.extend(e.values.iter().map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
