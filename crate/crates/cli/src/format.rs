//! Matrix files and their validation.
//!
//! ```json
//! {
//!   "basis": "up-up, up-down, down-up, down-down",
//!   "matrices": [
//!     { "label": "singlet", "matrix": [[[0, 0], [0, 0], [0, 0], [0, 0]], ...] }
//!   ]
//! }
//! ```
//!
//! Each matrix is four rows of four `[re, im]` pairs. Entries are validated
//! independently so one bad matrix does not hide the others.

use std::fmt;

use serde::Deserialize;
use serde_json::Value;
use tangle_core::quantum::{BASIS, DENSITY_TOL};
use tangle_core::{Complex64, ComplexMatrix, DensityMatrix};

/// Accepted trace window for `--normalize`.
pub const NORMALIZE_WINDOW: (f64, f64) = (0.9, 1.1);

/// A problem with one matrix of a file (or with the file itself when
/// `entry` is `None`). Rows and columns are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub entry: Option<usize>,
    pub label: Option<String>,
    pub location: Option<(usize, usize)>,
    pub message: String,
}

impl Diagnostic {
    fn file(message: impl Into<String>) -> Self {
        Self { entry: None, label: None, location: None, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.entry {
            write!(f, "matrix {i}")?;
            if let Some(label) = &self.label {
                write!(f, " ({label})")?;
            }
            write!(f, ": ")?;
        }
        if let Some((r, c)) = self.location {
            write!(f, "row {r}, column {c}: ")?;
        }
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone)]
pub struct LabeledState {
    pub index: usize,
    pub label: String,
    pub rho: DensityMatrix,
}

/// Outcome of reading a file: the valid states in input order and one
/// diagnostic per rejected entry.
#[derive(Debug, Clone, Default)]
pub struct ParsedFile {
    pub states: Vec<LabeledState>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParsedFile {
    pub fn is_clean(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

#[derive(Deserialize)]
struct RawFile {
    basis: Option<String>,
    matrices: Vec<RawEntry>,
}

#[derive(Deserialize)]
struct RawEntry {
    label: Option<String>,
    matrix: Value,
}

pub fn parse_matrix_file(text: &str, normalize: bool) -> ParsedFile {
    let raw: RawFile = match serde_json::from_str(text) {
        Ok(raw) => raw,
        Err(e) => {
            return ParsedFile { states: Vec::new(), diagnostics: vec![Diagnostic::file(format!("malformed matrix file: {e}"))] }
        }
    };
    let mut out = ParsedFile::default();
    match raw.basis.as_deref() {
        Some(b) if normalize_basis(b) == normalize_basis(BASIS) => {}
        Some(b) => {
            out.diagnostics.push(Diagnostic::file(format!("unsupported basis {b:?}; expected {BASIS:?}")));
            return out;
        }
        None => {
            out.diagnostics.push(Diagnostic::file(format!("missing basis declaration; expected {BASIS:?}")));
            return out;
        }
    }
    for (index, entry) in raw.matrices.into_iter().enumerate() {
        let label = entry.label.unwrap_or_else(|| format!("#{index}"));
        match parse_entry(&entry.matrix, normalize) {
            Ok(rho) => out.states.push(LabeledState { index, label, rho }),
            Err((location, message)) => out.diagnostics.push(Diagnostic {
                entry: Some(index),
                label: Some(label),
                location,
                message,
            }),
        }
    }
    out
}

fn normalize_basis(b: &str) -> String {
    b.split(',').map(str::trim).collect::<Vec<_>>().join(",")
}

type EntryError = (Option<(usize, usize)>, String);

fn parse_entry(value: &Value, normalize: bool) -> Result<DensityMatrix, EntryError> {
    let m = read_matrix(value)?;

    let mut worst = (0.0, 0, 0);
    for i in 0..4 {
        for j in i..4 {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst.0 {
                worst = (d, i, j);
            }
        }
    }
    if worst.0 > DENSITY_TOL {
        let (d, i, j) = worst;
        let message = if i == j {
            format!("diagonal entry has imaginary part {:.3e}", m[(i, i)].im)
        } else {
            format!("not Hermitian: differs from the conjugate of row {}, column {} by {d:.3e}", j + 1, i + 1)
        };
        return Err((Some((i + 1, j + 1)), message));
    }

    let m = if normalize {
        let trace = m.trace().re;
        let (lo, hi) = NORMALIZE_WINDOW;
        if !(lo..=hi).contains(&trace) {
            return Err((None, format!("trace {trace} outside the --normalize window [{lo}, {hi}]")));
        }
        m.scale(Complex64::new(1.0 / trace, 0.0))
    } else {
        m
    };

    DensityMatrix::new(m).map_err(|e| (None, e.to_string()))
}

fn read_matrix(value: &Value) -> Result<ComplexMatrix, EntryError> {
    let rows = value
        .as_array()
        .ok_or((None, "matrix must be an array of 4 rows".to_string()))?;
    if rows.len() != 4 {
        return Err((None, format!("expected 4 rows, got {}", rows.len())));
    }
    let mut m = ComplexMatrix::zeros(4, 4);
    for (i, row) in rows.iter().enumerate() {
        let cells = match row.as_array() {
            Some(cells) if cells.len() == 4 => cells,
            Some(cells) => return Err((Some((i + 1, cells.len().min(4) + 1)), format!("expected 4 entries in row, got {}", cells.len()))),
            None => return Err((Some((i + 1, 1)), "row must be an array of 4 [re, im] pairs".into())),
        };
        for (j, cell) in cells.iter().enumerate() {
            m[(i, j)] = read_complex(cell).ok_or((Some((i + 1, j + 1)), format!("expected a [re, im] pair of numbers, got {cell}")))?;
        }
    }
    Ok(m)
}

fn read_complex(cell: &Value) -> Option<Complex64> {
    match cell.as_array()?.as_slice() {
        [re, im] => {
            let z = Complex64::new(re.as_f64()?, im.as_f64()?);
            (z.re.is_finite() && z.im.is_finite()).then_some(z)
        }
        _ => None,
    }
}

/// Serializes labeled matrices, one matrix row per line. Numbers use the
/// shortest representation that reads back to the same `f64`.
pub fn write_matrix_file<'a>(entries: impl IntoIterator<Item = (&'a str, &'a ComplexMatrix)>) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"basis\": {},\n", json_string(BASIS)));
    out.push_str("  \"matrices\": [");
    let mut first = true;
    for (label, m) in entries {
        out.push_str(if first { "\n" } else { ",\n" });
        first = false;
        out.push_str(&format!("    {{\n      \"label\": {},\n      \"matrix\": [\n", json_string(label)));
        for i in 0..m.rows() {
            let cells: Vec<String> = m
                .row(i)
                .iter()
                .map(|z| format!("[{}, {}]", json_number(z.re), json_number(z.im)))
                .collect();
            let sep = if i + 1 < m.rows() { "," } else { "" };
            out.push_str(&format!("        [{}]{sep}\n", cells.join(", ")));
        }
        out.push_str("      ]\n    }");
    }
    out.push_str(if first { "]\n}\n" } else { "\n  ]\n}\n" });
    out
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn json_number(x: f64) -> String {
    serde_json::to_string(&x).expect("finite numbers serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(matrix: &str) -> String {
        format!(r#"{{"basis": "up-up, up-down, down-up, down-down", "matrices": [{{"label": "m", "matrix": {matrix}}}]}}"#)
    }

    const IDENTITY_QUARTER: &str = "[[[0.25,0],[0,0],[0,0],[0,0]],[[0,0],[0.25,0],[0,0],[0,0]],[[0,0],[0,0],[0.25,0],[0,0]],[[0,0],[0,0],[0,0],[0.25,0]]]";

    #[test]
    fn parses_identity() {
        let parsed = parse_matrix_file(&file(IDENTITY_QUARTER), false);
        assert!(parsed.is_clean());
        assert_eq!(parsed.states[0].label, "m");
    }

    #[test]
    fn reports_bad_cell_location() {
        let bad = IDENTITY_QUARTER.replacen("[0,0],[0.25,0],[0,0]", "[0,0],[0.25],[0,0]", 1);
        let parsed = parse_matrix_file(&file(&bad), false);
        assert_eq!(parsed.diagnostics[0].location, Some((2, 2)));
    }

    #[test]
    fn reports_non_hermitian_location() {
        let bad = IDENTITY_QUARTER.replacen("[[0.25,0],[0,0]", "[[0.25,0],[0.1,0]", 1);
        let parsed = parse_matrix_file(&file(&bad), false);
        assert_eq!(parsed.diagnostics[0].location, Some((1, 2)));
    }

    #[test]
    fn normalize_window() {
        let scaled = IDENTITY_QUARTER.replace("0.25", "0.24");
        assert!(!parse_matrix_file(&file(&scaled), false).is_clean());
        assert!(parse_matrix_file(&file(&scaled), true).is_clean());
        let far = IDENTITY_QUARTER.replace("0.25", "0.2");
        assert!(!parse_matrix_file(&file(&far), true).is_clean());
    }

    #[test]
    fn rejects_wrong_basis() {
        let text = file(IDENTITY_QUARTER).replace("up-up, up-down", "up-down, up-up");
        let parsed = parse_matrix_file(&text, false);
        assert!(parsed.states.is_empty());
        assert_eq!(parsed.diagnostics[0].entry, None);
    }

    #[test]
    fn write_then_parse_round_trips() {
        let rho = DensityMatrix::werner(0.3).unwrap();
        let text = write_matrix_file([("w", rho.matrix())]);
        let parsed = parse_matrix_file(&text, false);
        assert_eq!(parsed.states[0].rho.matrix(), rho.matrix());
        assert_eq!(write_matrix_file([("w", parsed.states[0].rho.matrix())]), text);
    }
}
