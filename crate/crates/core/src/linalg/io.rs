//! Matrix files: JSON `{ "n": int, "re": [[...]], "im": [[...]] }` and a
//! CSV fallback for real matrices (one row per line).

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            n: m.n(),
            re: m.real_part(),
            im: m.imag_part(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.re.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.re.len(),
            });
        }
        ComplexMatrix::from_parts(&self.re, &self.im)
    }
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let file: MatrixFile = serde_json::from_str(text)?;
    file.to_matrix()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(m)).expect("matrix serializes")
}

/// Parses comma-separated rows; blank lines and `#` comments are skipped.
pub fn matrix_from_csv(text: &str) -> Result<ComplexMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        let mut column = 1;
        for field in line.split(',') {
            let value: f64 = field.trim().parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                column,
                message: format!("not a number: `{}`", field.trim()),
            })?;
            row.push(value);
            column += field.len() + 1;
        }
        rows.push(row);
    }
    let m = ComplexMatrix::from_parts(&rows, &[])?;
    Ok(m)
}

/// Loads by extension: `.csv` as CSV, anything else as JSON.
pub fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        matrix_from_csv(&text)
    } else {
        matrix_from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn json_round_trip() {
        let mut m = ComplexMatrix::from_diag(&[1.0, -2.5]);
        m[(0, 1)] = C64::new(0.25, -1.0);
        let back = matrix_from_json(&matrix_to_json(&m)).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn imaginary_part_optional() {
        let m = matrix_from_json(r#"{"n":2,"re":[[1,0],[0,4]]}"#).unwrap();
        assert_eq!(m, ComplexMatrix::from_diag(&[1.0, 4.0]));
    }

    #[test]
    fn json_error_has_position() {
        let err = matrix_from_json("{\"n\": 2,\n \"re\": [[1, x]]}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn csv_parses_and_reports_position() {
        let m = matrix_from_csv("3,0\n0,1\n").unwrap();
        assert_eq!(m, ComplexMatrix::from_diag(&[3.0, 1.0]));
        let err = matrix_from_csv("1,2\n3,abc\n").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(matrix_from_csv("1,2\n3\n").is_err());
        assert!(matrix_from_json(r#"{"n":3,"re":[[1,0],[0,4]]}"#).is_err());
    }
}
