//! CSV serialization of arrays, spectra and trajectories.
//!
//! All files are UTF-8 with LF line endings, '.' decimal separator, no
//! thousands separators; floats print as the shortest decimal that
//! round-trips, so re-reading reproduces the exact bits.

use std::path::Path;

use dyson_edge_core::{Error as CoreError, GtArray, SpacingVector};

use crate::CliError;

/// Render an interlacing array: one line per row, comma-separated values.
pub fn render_array_csv(a: &GtArray) -> String {
    let mut out = String::new();
    for row in a.levels() {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn write_array_csv(a: &GtArray, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, render_array_csv(a))
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Parse an interlacing array; row lengths and the interlacing
/// inequalities are both validated.
pub fn parse_array_csv(text: &str) -> Result<GtArray, CliError> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|tok| {
                tok.trim().parse::<f64>().map_err(|e| {
                    CliError::Io(format!("line {}: bad number '{tok}': {e}", lineno + 1))
                })
            })
            .collect::<Result<_, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Io("structural error: empty array file".into()));
    }
    let array = GtArray::from_levels(rows).map_err(|e| CliError::Core(e.to_string()))?;
    if let Some((level, index)) = array.first_interlacing_violation() {
        return Err(CliError::Core(
            CoreError::Interlacing { level, index }.to_string(),
        ));
    }
    Ok(array)
}

pub fn read_array_csv(path: &Path) -> Result<GtArray, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_array_csv(&text)
}

/// Render a spacing trajectory with header `time,r_1..r_k`.
pub fn render_trajectory_csv(times: &[f64], spacings: &[SpacingVector]) -> String {
    let k = spacings.first().map_or(0, |s| s.k());
    let mut out = String::from("time");
    for i in 1..=k {
        out.push_str(&format!(",r_{i}"));
    }
    out.push('\n');
    for (t, s) in times.iter().zip(spacings) {
        out.push_str(&format!("{t}"));
        for v in s.values() {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

/// Render coordinate paths with header `time,x_1..x_k`.
pub fn render_path_csv(times: &[f64], coords: &[Vec<f64>]) -> String {
    let k = coords.first().map_or(0, |c| c.len());
    let mut out = String::from("time");
    for i in 1..=k {
        out.push_str(&format!(",x_{i}"));
    }
    out.push('\n');
    for (t, c) in times.iter().zip(coords) {
        out.push_str(&format!("{t}"));
        for v in c {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

/// Render one spectrum per line, prefixed by its unit index.
pub fn render_spectra_csv(n: usize, units: &[(usize, Vec<f64>)]) -> String {
    let mut out = String::from("unit");
    for i in 1..=n {
        out.push_str(&format!(",x_{i}"));
    }
    out.push('\n');
    for (unit, xs) in units {
        out.push_str(&format!("{unit}"));
        for v in xs {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}
