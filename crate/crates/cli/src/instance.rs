//! Instance files: `center,length` with an optional `color` column.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use oblivious_stacking::{Coloring, Interval64};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    center: f64,
    length: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    color: Option<u32>,
}

/// Intervals read from a file, with colors when every row carries one.
#[derive(Debug)]
pub struct Instance {
    pub intervals: Vec<Interval64>,
    pub colors: Option<Vec<u32>>,
}

pub fn open_input(path: &Path) -> Result<Box<dyn Read>, CliError> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(io::stdin()));
    }
    File::open(path)
        .map(|f| Box::new(f) as Box<dyn Read>)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        None => Ok(Box::new(io::stdout())),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(io::stdout())),
        Some(p) => File::create(p)
            .map(|f| Box::new(io::BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
    }
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let mut reader = csv::Reader::from_reader(open_input(path)?);
    let mut intervals = Vec::new();
    let mut colors = Vec::new();
    let mut all_colored = true;
    for (line, row) in reader.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let iv = Interval64::new(row.center, row.length)
            .map_err(|e| CliError::Usage(format!("{} row {}: {e}", path.display(), line + 1)))?;
        intervals.push(iv);
        match row.color {
            Some(c) => colors.push(c),
            None => all_colored = false,
        }
    }
    Ok(Instance {
        intervals,
        colors: (all_colored && !colors.is_empty()).then_some(colors),
    })
}

pub fn write_instance<W: Write>(out: W, intervals: &[Interval64], coloring: Option<&Coloring>) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(out);
    let io_err = |e: csv::Error| CliError::Io(e.to_string());
    if intervals.is_empty() {
        // serde-driven headers need a first record
        let header: &[&str] = if coloring.is_some() {
            &["center", "length", "color"]
        } else {
            &["center", "length"]
        };
        writer.write_record(header).map_err(io_err)?;
    }
    for (i, iv) in intervals.iter().enumerate() {
        let row = Row {
            center: iv.center,
            length: iv.length,
            color: coloring.map(|c| c.colors()[i]),
        };
        writer.serialize(row).map_err(io_err)?;
    }
    writer.flush().map_err(|e| CliError::Io(e.to_string()))
}
