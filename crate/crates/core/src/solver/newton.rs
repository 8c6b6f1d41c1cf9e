use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::polysys::PolySystem;

fn require_square(sys: &PolySystem) -> Result<()> {
    if !sys.is_square() {
        return Err(Error::DimensionMismatch {
            expected: sys.num_vars(),
            got: sys.num_eqs(),
        });
    }
    Ok(())
}

/// The Newton correction `DF(x)⁻¹ F(x)`, computed by a linear solve.
pub fn newton_update(sys: &PolySystem, x: &[Complex64]) -> Result<Vec<Complex64>> {
    require_square(sys)?;
    let f = sys.evaluate(x)?;
    let jac = sys.jacobian(x)?;
    linalg::solve(&jac, &f).ok_or(Error::SingularJacobian)
}

/// One Newton iterate `x − DF(x)⁻¹F(x)`.
pub fn newton_step(sys: &PolySystem, x: &[Complex64]) -> Result<Vec<Complex64>> {
    let dx = newton_update(sys, x)?;
    Ok(x.iter().zip(&dx).map(|(a, b)| a - b).collect())
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub point: Vec<Complex64>,
    pub converged: bool,
    pub iterations: usize,
    /// Norm of every update applied, in order.
    pub updates: Vec<f64>,
}

/// Iterate Newton until an update has norm below `tol` or `max_iters` updates
/// have been applied.
pub fn newton_refine(
    sys: &PolySystem,
    x: &[Complex64],
    tol: f64,
    max_iters: usize,
) -> Result<NewtonOutcome> {
    let mut point = x.to_vec();
    let mut updates = Vec::new();
    for _ in 0..max_iters {
        let dx = newton_update(sys, &point)?;
        let u = linalg::norm(&dx);
        for (p, d) in point.iter_mut().zip(&dx) {
            *p -= d;
        }
        updates.push(u);
        if u < tol {
            return Ok(NewtonOutcome {
                point,
                converged: true,
                iterations: updates.len(),
                updates,
            });
        }
    }
    Ok(NewtonOutcome {
        point,
        converged: false,
        iterations: updates.len(),
        updates,
    })
}
