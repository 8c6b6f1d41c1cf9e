//! Thin helpers over nalgebra for the small dense complex systems that appear
//! in Newton steps and rank tests.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Solve `a * x = b` by LU with partial pivoting. `None` when the factorization
/// breaks down or produces non-finite values.
pub fn solve(a: &DMatrix<Complex64>, b: &[Complex64]) -> Option<Vec<Complex64>> {
    if a.nrows() != a.ncols() || a.nrows() != b.len() {
        return None;
    }
    let rhs = DVector::from_column_slice(b);
    let x = a.clone().lu().solve(&rhs)?;
    if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Some(x.iter().copied().collect())
    } else {
        None
    }
}

/// Singular values in decreasing order.
pub fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// 2-norm condition number; infinite for a numerically rank-deficient matrix.
pub fn condition(a: &DMatrix<Complex64>) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 && lo.is_finite() => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Numerical rank with threshold `tol * sigma_max`.
pub fn rank(a: &DMatrix<Complex64>, tol: f64) -> usize {
    let s = singular_values(a);
    let Some(&hi) = s.first() else { return 0 };
    if hi == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol * hi).count()
}

/// Unit right singular vector for the smallest singular value of a matrix
/// with at least as many rows as columns.
pub fn null_vector(a: &DMatrix<Complex64>) -> Vec<Complex64> {
    assert!(a.nrows() >= a.ncols(), "null_vector needs a tall matrix");
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .map(|(k, _)| k)
        .expect("non-empty matrix");
    v_t.row(k).iter().map(|z| z.conj()).collect()
}

pub fn mat_vec(a: &DMatrix<Complex64>, x: &[Complex64]) -> Vec<Complex64> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)] * x[j]).sum())
        .collect()
}

/// Unconjugated bilinear form `xᵀ A y`.
pub fn bilinear(a: &DMatrix<Complex64>, x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let ay = mat_vec(a, y);
    x.iter().zip(&ay).map(|(u, v)| u * v).sum()
}

pub fn column(a: &DMatrix<Complex64>, j: usize) -> Vec<Complex64> {
    a.column(j).iter().copied().collect()
}

pub fn normalize(v: &[Complex64]) -> Vec<Complex64> {
    let n = norm(v);
    v.iter().map(|z| z / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn solve_rejects_singular() {
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(2.0), c(4.0)]);
        assert!(solve(&a, &[c(1.0), c(1.0)]).is_none());
    }

    #[test]
    fn null_vector_of_rank_deficient() {
        let a = DMatrix::from_row_slice(3, 2, &[c(1.0), c(2.0), c(2.0), c(4.0), c(-1.0), c(-2.0)]);
        let v = null_vector(&a);
        assert!(norm(&mat_vec(&a, &v)) < 1e-14);
        assert!((norm(&v) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_and_condition() {
        let a = DMatrix::from_row_slice(2, 3, &[c(1.0), c(0.0), c(0.0), c(2.0), c(0.0), c(0.0)]);
        assert_eq!(rank(&a, 1e-12), 1);
        let id = DMatrix::<Complex64>::identity(3, 3);
        assert!((condition(&id) - 1.0).abs() < 1e-14);
    }
}
