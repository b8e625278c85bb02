//! Run directories: `config.json`, `record.json`, `series.csv`, `aux.csv`,
//! `snapshots/`, `checks.json` and the `DONE` marker.
//!
//! A snapshot file is one line of JSON header terminated by `\n`, followed by
//! the fields as little-endian `f64`, each row-major (`x1` slow, `x2` fast),
//! in the order listed in the header.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{AuxPoint, CheckReport, RunRecord, SeriesPoint};
use crate::error::{Error, Result};
use crate::spectral::ScalarField2D;

pub const DONE_MARKER: &str = "DONE";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub t: f64,
    pub step: usize,
    pub n: usize,
    pub fields: Vec<String>,
    pub dtype: String,
    pub order: String,
}

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

pub(crate) fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn read_series(dir: &Path) -> Result<Vec<SeriesPoint>> {
    read_csv(&dir.join("series.csv"))
}

pub fn read_aux(dir: &Path) -> Result<Vec<AuxPoint>> {
    read_csv(&dir.join("aux.csv"))
}

/// Writes one snapshot file and returns its path.
pub fn write_snapshot(dir: &Path, index: usize, header: &SnapshotHeader, fields: &[&ScalarField2D]) -> Result<PathBuf> {
    let path = dir.join(format!("snap_{index:05}.bin"));
    let mut buf = serde_json::to_vec(header)?;
    buf.push(b'\n');
    for f in fields {
        for v in f.physical().iter() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    fs::write(&path, buf).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Reads a snapshot back as its header and one value vector per field.
pub fn read_snapshot(path: &Path) -> Result<(SnapshotHeader, Vec<Vec<f64>>)> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let mut line = String::new();
    r.read_line(&mut line).map_err(|e| Error::io(path, e))?;
    let header: SnapshotHeader = serde_json::from_str(line.trim_end())?;
    let count = header.n * header.n;
    let mut fields = Vec::with_capacity(header.fields.len());
    let mut bytes = vec![0u8; count * 8];
    for _ in &header.fields {
        r.read_exact(&mut bytes).map_err(|e| Error::io(path, e))?;
        fields.push(
            bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect(),
        );
    }
    Ok((header, fields))
}

/// Everything but the series and snapshots.
#[derive(Serialize)]
struct RecordMeta<'a> {
    profile_hash: &'a str,
    wall_clock_s: f64,
    samples: usize,
    c: f64,
}

pub fn write_run_dir(dir: &Path, record: &RunRecord, checks: &[CheckReport]) -> Result<()> {
    create_dir(dir)?;
    write_json(&dir.join("config.json"), &record.config)?;
    write_json(
        &dir.join("record.json"),
        &RecordMeta {
            profile_hash: &record.profile_hash,
            wall_clock_s: record.wall_clock_s,
            samples: record.series.len(),
            c: record.c,
        },
    )?;
    write_csv(&dir.join("series.csv"), &record.series)?;
    write_csv(&dir.join("aux.csv"), &record.aux)?;
    write_json(&dir.join("checks.json"), &checks)?;
    let marker = dir.join(DONE_MARKER);
    let mut f = fs::File::create(&marker).map_err(|e| Error::io(&marker, e))?;
    writeln!(f, "ok").map_err(|e| Error::io(&marker, e))
}
