//! Lines in P⁴: the Schubert poset of `G(1, P⁴)`, flags, Plücker coordinates,
//! Schubert witness sets for the lines on a quadric threefold, and the lines
//! on the intersection of two quadrics.

mod duality;
mod geometry;
mod poset;
mod quartic;
mod witness;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::polysys::Polynomial;

pub use duality::{expected_pairing_count, schubert_pairing_lines};
pub use geometry::{
    dedup_lines, line_in_schubert, pluecker_cmp, pluecker_distance, Flag, Line, LineDoc, Quadric, AMBIENT,
    FLAG_CONDITION_LIMIT, LINE_DEDUP_TOL, PLUECKER_PAIRS, RANK_TOL,
};
pub use poset::{SchubertIndex, SchubertPoset};
pub use quartic::lines_on_two_quadrics;
pub use witness::{
    adapted_flag, class_of_variety, lines_on_quadric_witness, schubert_membership, schubert_membership_with, schubert_move_report,
    schubert_sample, schubert_witness_move, SchubertMoveReport, SchubertWitnessDoc, SchubertWitnessSet,
    LINE_MATCH_TOL, LINE_RESIDUAL_TOL,
};

/// `xᵀ A y` for vectors of polynomials.
pub(crate) fn quadratic_form(a: &DMatrix<Complex64>, x: &[Polynomial], y: &[Polynomial]) -> Polynomial {
    let n = x[0].num_vars();
    let mut total = Polynomial::zero(n);
    for (k, xk) in x.iter().enumerate() {
        let mut ay = Polynomial::zero(n);
        for (l, yl) in y.iter().enumerate() {
            ay = &ay + &yl.scale(a[(k, l)]);
        }
        total = &total + &(xk * &ay);
    }
    total
}

/// `v₀ + Σ x_var·v` coordinate-wise, for `(var, v)` in `linear`.
pub(crate) fn affine_vector(num_vars: usize, constant: &[Complex64], linear: &[(usize, &[Complex64])]) -> Vec<Polynomial> {
    (0..constant.len())
        .map(|c| {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); num_vars + 1];
            coeffs[0] = constant[c];
            for &(var, v) in linear {
                coeffs[var + 1] += v[c];
            }
            Polynomial::affine(&coeffs)
        })
        .collect()
}
