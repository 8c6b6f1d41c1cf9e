//! Complex numbers travel as two-element `[re, im]` arrays.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub fn encode(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn encode_vec(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().copied().map(encode).collect()
}

pub fn decode_vec(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|z| Complex64::new(z[0], z[1])).collect()
}

/// Row-major nested arrays.
pub fn encode_matrix(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| encode(m[(i, j)])).collect())
        .collect()
}

pub fn decode_matrix(rows: &[Vec<[f64; 2]>], nrows: usize, ncols: usize) -> Result<DMatrix<Complex64>> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse(format!("expected a {nrows} x {ncols} complex matrix")));
    }
    let mut m = DMatrix::zeros(nrows, ncols);
    for (i, r) in rows.iter().enumerate() {
        for (j, z) in r.iter().enumerate() {
            if !(z[0].is_finite() && z[1].is_finite()) {
                return Err(Error::Parse("non-finite matrix entry".into()));
            }
            m[(i, j)] = Complex64::new(z[0], z[1]);
        }
    }
    Ok(m)
}
