//! Matrix CSV: plain rows of comma-separated decimal floats, no header.
//! The reader rejects ragged rows; the writer emits shortest round-trip
//! representations so read(write(m)) is bit-exact.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

pub fn parse_matrix_csv(text: &str) -> Result<DenseMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (j, field) in line.split(',').enumerate() {
            let trimmed = field.trim();
            let value: f64 = trimmed.parse().map_err(|_| Error::CsvParse {
                row: i + 1,
                col: j + 1,
                text: trimmed.to_string(),
            })?;
            row.push(value);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::RaggedCsv {
                    row: i + 1,
                    expected: first.len(),
                    got: row.len(),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyCsv);
    }
    DenseMatrix::from_rows(&rows)
}

pub fn matrix_to_csv(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{}", m.get(i, j)));
        }
        out.push('\n');
    }
    out
}

pub fn read_matrix_csv(path: &Path) -> Result<DenseMatrix> {
    parse_matrix_csv(&fs::read_to_string(path)?)
}

pub fn write_matrix_csv(path: &Path, m: &DenseMatrix) -> Result<()> {
    fs::write(path, matrix_to_csv(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_gaussian, RngStream};

    #[test]
    fn rejects_ragged_rows() {
        let err = parse_matrix_csv("1,2,3\n4,5\n").unwrap_err();
        assert!(matches!(
            err,
            Error::RaggedCsv {
                row: 2,
                expected: 3,
                got: 2
            }
        ));
    }

    #[test]
    fn rejects_garbage_and_empty() {
        assert!(matches!(
            parse_matrix_csv("1,abc\n"),
            Err(Error::CsvParse { row: 1, col: 2, .. })
        ));
        assert!(matches!(parse_matrix_csv("\n\n"), Err(Error::EmptyCsv)));
        assert!(matches!(
            parse_matrix_csv("1,nan\n"),
            Err(Error::CsvParse { .. }) | Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let m = random_gaussian(7, 4, &mut RngStream::new(6, 0));
        let back = parse_matrix_csv(&matrix_to_csv(&m)).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn accepts_whitespace_padding() {
        let m = parse_matrix_csv(" 1.5 , -2\n 0, 3e-2\n").unwrap();
        assert_eq!(m.get(0, 0), 1.5);
        assert_eq!(m.get(1, 1), 0.03);
    }
}
