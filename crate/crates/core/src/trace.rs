//! CSV files: session traces and spectra.
//!
//! Floats are written in scientific notation with 17 significant digits so a
//! trace reloads to the exact values it was written from.

use std::path::Path;

use crate::analysis::Spectrum;
use crate::error::HarnessError;
use crate::sync::SlotRecord;

pub const TRACE_COLUMNS: [&str; 11] = [
    "slot", "v_a", "v_b", "s1_a", "s1_b", "q_a", "q_b", "det_a", "det_b", "bit_a", "bit_b",
];

pub const SPECTRUM_COLUMNS: [&str; 3] = ["bin", "frequency_fraction", "magnitude"];

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(path: &Path, e: csv::Error) -> HarnessError {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => HarnessError::Write {
            path: path.to_path_buf(),
            source,
        },
        other => HarnessError::Csv {
            path: path.to_path_buf(),
            message: format!("{other:?}"),
        },
    }
}

pub fn write_trace(path: &Path, trace: &[SlotRecord]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(TRACE_COLUMNS)
        .map_err(|e| csv_err(path, e))?;
    for r in trace {
        w.write_record([
            r.slot.to_string(),
            float(r.v_a),
            float(r.v_b),
            float(r.s1_a),
            float(r.s1_b),
            float(r.q_a),
            float(r.q_b),
            u8::from(r.det_a).to_string(),
            u8::from(r.det_b).to_string(),
            r.bit_a.to_string(),
            r.bit_b.to_string(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|source| HarnessError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_spectrum(path: &Path, spectrum: &Spectrum) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(SPECTRUM_COLUMNS)
        .map_err(|e| csv_err(path, e))?;
    for (k, &m) in spectrum.magnitudes.iter().enumerate() {
        w.write_record([
            k.to_string(),
            float(spectrum.frequency_fraction(k)),
            float(m),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|source| HarnessError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads one numeric column of a CSV file with a header row.
pub fn read_column(path: &Path, column: &str) -> Result<Vec<f64>, HarnessError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => HarnessError::Read {
            path: path.to_path_buf(),
            source,
        },
        other => HarnessError::Csv {
            path: path.to_path_buf(),
            message: format!("{other:?}"),
        },
    })?;
    let headers = r.headers().map_err(|e| HarnessError::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let idx =
        headers
            .iter()
            .position(|h| h == column)
            .ok_or_else(|| HarnessError::MissingColumn {
                path: path.to_path_buf(),
                column: column.to_string(),
            })?;

    let mut out = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record.map_err(|e| HarnessError::Csv {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let field = record.get(idx).unwrap_or("");
        let value = field.parse::<f64>().map_err(|_| HarnessError::Csv {
            path: path.to_path_buf(),
            message: format!(
                "row {}: `{field}` in column `{column}` is not a number",
                line + 2
            ),
        })?;
        out.push(value);
    }
    Ok(out)
}
