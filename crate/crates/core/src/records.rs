//! JSON record types shared by the state, channel and report schemas.
//!
//! Complex numbers are written as `{"re": .., "im": ..}` and matrices as
//! arrays of rows.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matstack::{ComplexMatrix, ComplexVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<Complex64> for ComplexRecord {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexRecord> for Complex64 {
    fn from(r: ComplexRecord) -> Self {
        Complex64::new(r.re, r.im)
    }
}

pub type MatrixRecord = Vec<Vec<ComplexRecord>>;

pub fn matrix_to_record(m: &ComplexMatrix) -> MatrixRecord {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

/// Parses a row-major matrix record with the expected shape.
pub fn matrix_from_record(rows: &MatrixRecord, nrows: usize, ncols: usize, what: &str) -> Result<ComplexMatrix> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::ShapeMismatch(format!(
            "{what}: expected {nrows}x{ncols} matrix"
        )));
    }
    Ok(ComplexMatrix::from_fn(nrows, ncols, |i, j| rows[i][j].into()))
}

pub fn vector_to_record(v: &ComplexVector) -> Vec<ComplexRecord> {
    v.iter().map(|&z| z.into()).collect()
}

pub fn vector_from_record(v: &[ComplexRecord]) -> ComplexVector {
    ComplexVector::from_iterator(v.len(), v.iter().map(|&r| r.into()))
}
