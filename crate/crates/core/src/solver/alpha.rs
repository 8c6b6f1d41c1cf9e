use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::polysys::{PolySystem, Polynomial};

/// Smale's threshold `(13 − 3√17)/4`.
pub fn alpha_threshold() -> f64 {
    (13.0 - 3.0 * 17f64.sqrt()) / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_bound: f64,
    pub certified: bool,
}

impl Certificate {
    fn from_parts(beta: f64, gamma_bound: f64) -> Self {
        let alpha = beta * gamma_bound;
        Certificate {
            alpha,
            beta,
            gamma_bound,
            certified: alpha < alpha_threshold(),
        }
    }
}

/// Sum over all ordered k-tuples of |∂^k p| at `x`, with each partial bounded by
/// its absolute-value evaluation.
fn derivative_mass(p: &Polynomial, x: &[Complex64], k: u32) -> f64 {
    if p.is_zero() {
        return 0.0;
    }
    if k == 0 {
        return p.abs_eval(x);
    }
    (0..p.num_vars())
        .map(|j| derivative_mass(&p.partial(j), x, k - 1))
        .sum()
}

/// Conservative alpha-theory certificate at `x`. `certified` implies
/// quadratic convergence of Newton from `x`; an uncertified result is
/// inconclusive.
pub fn alpha_number(sys: &PolySystem, x: &[Complex64]) -> Result<Certificate> {
    if !sys.is_square() {
        return Err(Error::DimensionMismatch {
            expected: sys.num_vars(),
            got: sys.num_eqs(),
        });
    }
    let f = sys.evaluate(x)?;
    let jac = sys.jacobian(x)?;
    let dx = linalg::solve(&jac, &f).ok_or(Error::SingularJacobian)?;
    let sv = linalg::singular_values(&jac);
    let smin = *sv.last().ok_or(Error::SingularJacobian)?;
    if !(smin > 0.0) {
        return Err(Error::SingularJacobian);
    }
    let inv_norm = 1.0 / smin;
    // F(x) is only known up to rounding; inflate beta by the worst case.
    let eval_err: f64 = sys
        .polys()
        .iter()
        .map(|p| {
            let m = 4.0 * (p.degree() as f64 + 2.0) * f64::EPSILON;
            m / (1.0 - m) * p.abs_eval(x)
        })
        .sum();
    let beta = linalg::norm(&dx) + inv_norm * eval_err;
    let max_deg = sys.degrees().into_iter().max().unwrap_or(0);
    let mut gamma: f64 = 0.0;
    let mut factorial = 1.0;
    for k in 2..=max_deg {
        factorial *= k as f64;
        let bk: f64 = sys.polys().iter().map(|p| derivative_mass(p, x, k)).sum();
        if bk > 0.0 {
            gamma = gamma.max((inv_norm * bk / factorial).powf(1.0 / (k as f64 - 1.0)));
        }
    }
    Ok(Certificate::from_parts(beta, gamma))
}
