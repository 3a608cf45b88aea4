use std::io::Write;

use serde::Serialize;

use crate::error::Result;

/// One row of an estimate-versus-reference report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    /// Empty for checks that do not depend on `k`.
    pub k: Option<u32>,
    #[serde(rename = "L")]
    pub max_len: f64,
    pub mode: String,
    pub n_or_trials: u64,
    pub seed: u64,
    pub estimate: f64,
    pub reference: f64,
    pub relative_difference: f64,
    pub stderr: f64,
}

/// Writes rows as CSV with the header
/// `k,L,mode,n_or_trials,seed,estimate,reference,relative_difference,stderr`.
pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}
