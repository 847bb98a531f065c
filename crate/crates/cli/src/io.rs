//! Matrix files: JSON objects `{"n": n, "re": [[..]], "im": [[..]]}`.
//!
//! Floats are written in shortest round-trip form, so a write followed by a
//! read reproduces every entry bit for bit.

use std::fs;
use std::path::Path;

use abscomp::linalg::ComplexMatrix;
use abscomp::{Contraction, Matrix, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &Matrix) -> Self {
        let n = m.n();
        let grid = |f: fn(num_complex::Complex<f64>) -> f64| -> Vec<Vec<f64>> {
            (0..n).map(|i| (0..n).map(|j| f(m[(i, j)])).collect()).collect()
        };
        Self { n, re: grid(|z| z.re), im: grid(|z| z.im) }
    }

    /// Checks the shape and finiteness of both arrays before building the matrix.
    pub fn to_matrix(&self) -> Result<Matrix, String> {
        let n = self.n;
        if n == 0 {
            return Err("n must be at least 1".into());
        }
        for (name, arr) in [("re", &self.re), ("im", &self.im)] {
            if arr.len() != n || arr.iter().any(|row| row.len() != n) {
                return Err(format!("array '{name}' is not {n}x{n}"));
            }
            if arr.iter().flatten().any(|x| !x.is_finite()) {
                return Err(format!("array '{name}' contains NaN or infinity"));
            }
        }
        ComplexMatrix::from_parts(&self.re, &self.im).map_err(|e| e.to_string())
    }
}

pub fn parse_matrix(text: &str) -> Result<Matrix, String> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    file.to_matrix()
}

pub fn render_matrix(m: &Matrix) -> String {
    let mut s = serde_json::to_string_pretty(&MatrixFile::from_matrix(m)).expect("finite floats serialize");
    s.push('\n');
    s
}

pub fn read_matrix(path: &Path) -> CliResult<Matrix> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_matrix(&text).map_err(|reason| CliError::Parse { path: path.to_path_buf(), reason })
}

pub fn read_contraction(path: &Path, pol: &Tolerances) -> CliResult<Contraction> {
    let m = read_matrix(path)?;
    Contraction::from_matrix(m, pol).map_err(|e| CliError::Parse { path: path.to_path_buf(), reason: e.to_string() })
}

pub fn write_matrix(path: &Path, m: &Matrix) -> CliResult<()> {
    fs::write(path, render_matrix(m)).map_err(|e| CliError::io(path, e))
}
