use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use super::ExperimentConfig;
use crate::error::{Error, Result};
use crate::primes::DensityReport;

/// One summary line; the same rows appear in JSON and CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub experiment: String,
    pub field: String,
    #[serde(rename = "L_or_M")]
    pub scale: f64,
    pub count: u64,
    pub reference: Option<f64>,
    pub ratio: Option<f64>,
    #[serde(skip)]
    pub seconds: f64,
}

impl From<&DensityReport> for Row {
    fn from(r: &DensityReport) -> Row {
        Row {
            experiment: r.experiment.clone(),
            field: r.field.clone(),
            scale: r.scale,
            count: r.count,
            reference: Some(r.reference),
            ratio: Some(r.ratio),
            seconds: r.seconds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Data {
    pub rows: Vec<Row>,
    pub details: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Meta {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub version: String,
    pub seconds: f64,
    pub row_seconds: Vec<f64>,
    pub workers: usize,
}

/// `data` is a pure function of the config; timing lives in `meta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub meta: Meta,
    pub data: Data,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::invalid(format!("unknown format '{other}' (json or csv)"))),
        }
    }
}

pub const CSV_HEADER: [&str; 7] = ["experiment", "field", "L_or_M", "count", "reference", "ratio", "seconds"];

impl Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn data_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.data)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(CSV_HEADER).map_err(io)?;
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.data.rows {
            w.write_record([
                r.experiment.clone(),
                r.field.clone(),
                r.scale.to_string(),
                r.count.to_string(),
                opt(r.reference),
                opt(r.ratio),
                r.seconds.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    /// Writes to the path, or to stdout when none is given.
    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<()> {
        let text = self.render(format)?;
        match path {
            Some(p) => std::fs::write(p, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}
