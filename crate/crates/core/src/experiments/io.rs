//! Record export: CSV and a JSON document. Floats are written in shortest
//! round-trip form, so reading back gives bit-identical values.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::OverlapRecord;

pub const CSV_HEADER: [&str; 5] = ["preset", "order", "sigma_nm", "pm_fwhm_nm", "overlap"];

#[derive(Debug, Error)]
pub enum RecordIoError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("unexpected CSV header {0:?}")]
    Header(Vec<String>),
}

/// Writes records with a header row. A missing phasematching width is an
/// empty field.
pub fn write_csv<W: Write>(records: &[OverlapRecord], writer: W) -> Result<(), RecordIoError> {
    let mut w = csv::Writer::from_writer(writer);
    if records.is_empty() {
        w.write_record(CSV_HEADER)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(reader: R) -> Result<Vec<OverlapRecord>, RecordIoError> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers()?;
    if header.iter().ne(CSV_HEADER) {
        return Err(RecordIoError::Header(header.iter().map(String::from).collect()));
    }
    r.deserialize().map(|row| Ok(row?)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RecordDocument {
    records: Vec<OverlapRecord>,
}

/// Pretty-printed JSON: `{"records": [...]}`.
pub fn write_json<W: Write>(records: &[OverlapRecord], mut writer: W) -> Result<(), RecordIoError> {
    let doc = RecordDocument {
        records: records.to_vec(),
    };
    serde_json::to_writer_pretty(&mut writer, &doc)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn read_json<R: Read>(reader: R) -> Result<Vec<OverlapRecord>, RecordIoError> {
    let doc: RecordDocument = serde_json::from_reader(reader)?;
    Ok(doc.records)
}
