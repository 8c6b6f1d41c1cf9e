use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::polysys::PolySystem;

/// Value and first derivatives of a homotopy at `(x, t)`.
#[derive(Debug, Clone)]
pub struct HomotopyEval {
    pub value: Vec<Complex64>,
    pub jac_x: DMatrix<Complex64>,
    pub d_t: Vec<Complex64>,
}

/// A square family `H(x; t)` tracked from `t = 1` down to `t_end`.
pub trait PathHomotopy: Sync {
    fn dim(&self) -> usize;

    fn evaluate(&self, x: &[Complex64], t: f64) -> HomotopyEval;

    fn value(&self, x: &[Complex64], t: f64) -> Vec<Complex64> {
        self.evaluate(x, t).value
    }

    /// Norm of the point in affine coordinates; infinite at infinity.
    fn affine_norm(&self, x: &[Complex64]) -> f64 {
        linalg::norm(x)
    }
}

/// `H(x; t) = (1 − t)·target(x) + t·γ·start(x)`.
#[derive(Debug, Clone)]
pub struct Homotopy {
    target: PolySystem,
    start: PolySystem,
    gamma: Complex64,
}

impl Homotopy {
    pub fn new(target: PolySystem, start: PolySystem, gamma: Complex64) -> Result<Self> {
        for s in [&target, &start] {
            if !s.is_square() {
                return Err(Error::DimensionMismatch {
                    expected: s.num_vars(),
                    got: s.num_eqs(),
                });
            }
        }
        if target.num_vars() != start.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: target.num_vars(),
                got: start.num_vars(),
            });
        }
        Ok(Homotopy {
            target,
            start,
            gamma,
        })
    }

    pub fn target(&self) -> &PolySystem {
        &self.target
    }

    pub fn start(&self) -> &PolySystem {
        &self.start
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }
}

fn blend(
    target: &PolySystem,
    start: &PolySystem,
    gamma: Complex64,
    x: &[Complex64],
    t: f64,
) -> HomotopyEval {
    let f = target.evaluate(x).expect("dimension checked");
    let g = start.evaluate(x).expect("dimension checked");
    let jf = target.jacobian(x).expect("dimension checked");
    let jg = start.jacobian(x).expect("dimension checked");
    let a = Complex64::new(1.0 - t, 0.0);
    let b = gamma * t;
    let value = f.iter().zip(&g).map(|(fi, gi)| a * fi + b * gi).collect();
    let d_t = f.iter().zip(&g).map(|(fi, gi)| -fi + gamma * gi).collect();
    let jac_x = jf * a + jg * b;
    HomotopyEval { value, jac_x, d_t }
}

impl PathHomotopy for Homotopy {
    fn dim(&self) -> usize {
        self.target.num_vars()
    }

    fn evaluate(&self, x: &[Complex64], t: f64) -> HomotopyEval {
        blend(&self.target, &self.start, self.gamma, x, t)
    }
}

/// The same blend on homogenized systems in `ℂⁿ⁺¹`, with a random affine
/// patch `a·X = 1` appended. Paths that run to infinity in affine space stay
/// bounded here and end with `X₀ → 0`.
#[derive(Debug, Clone)]
pub struct ProjectiveHomotopy {
    target: PolySystem,
    start: PolySystem,
    gamma: Complex64,
    patch: Vec<Complex64>,
}

impl ProjectiveHomotopy {
    pub fn new(affine: &Homotopy, patch: Vec<Complex64>) -> Result<Self> {
        let n = affine.dim();
        if patch.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                got: patch.len(),
            });
        }
        let degs: Vec<u32> = affine
            .target
            .degrees()
            .into_iter()
            .zip(affine.start.degrees())
            .map(|(a, b)| a.max(b))
            .collect();
        let mut vars = vec!["x0".to_string()];
        vars.extend(affine.target.vars().iter().cloned());
        let hom = |s: &PolySystem| {
            PolySystem::with_vars(
                vars.clone(),
                s.polys()
                    .iter()
                    .zip(&degs)
                    .map(|(p, &d)| p.homogenize(d))
                    .collect(),
            )
        };
        Ok(ProjectiveHomotopy {
            target: hom(&affine.target)?,
            start: hom(&affine.start)?,
            gamma: affine.gamma,
            patch,
        })
    }

    /// Lift an affine point onto the patch.
    pub fn lift(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(x.len() + 1);
        v.push(Complex64::new(1.0, 0.0));
        v.extend_from_slice(x);
        let s: Complex64 = self.patch.iter().zip(&v).map(|(a, b)| a * b).sum();
        v.iter().map(|z| z / s).collect()
    }

    /// Dehomogenize; `None` when the point lies at infinity.
    pub fn to_affine(&self, x: &[Complex64]) -> Option<Vec<Complex64>> {
        let x0 = x[0];
        if x0.norm() == 0.0 {
            return None;
        }
        Some(x[1..].iter().map(|z| z / x0).collect())
    }
}

impl PathHomotopy for ProjectiveHomotopy {
    fn dim(&self) -> usize {
        self.patch.len()
    }

    fn evaluate(&self, x: &[Complex64], t: f64) -> HomotopyEval {
        let n = self.dim();
        let inner = blend(&self.target, &self.start, self.gamma, x, t);
        let mut value = inner.value;
        value.push(self.patch.iter().zip(x).map(|(a, b)| a * b).sum::<Complex64>() - 1.0);
        let mut d_t = inner.d_t;
        d_t.push(Complex64::new(0.0, 0.0));
        let mut jac_x = DMatrix::zeros(n, n);
        jac_x.view_mut((0, 0), (n - 1, n)).copy_from(&inner.jac_x);
        for j in 0..n {
            jac_x[(n - 1, j)] = self.patch[j];
        }
        HomotopyEval { value, jac_x, d_t }
    }

    fn affine_norm(&self, x: &[Complex64]) -> f64 {
        let tail = linalg::norm(&x[1..]);
        let x0 = x[0].norm();
        if x0 == 0.0 {
            f64::INFINITY
        } else {
            tail / x0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::Polynomial;
    use crate::rng::{gaussian, substream};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn quad_pair(seed: u64) -> PolySystem {
        let mut rng = substream(seed, "h");
        let exps = [[2, 0], [1, 1], [0, 2], [1, 0], [0, 1], [0, 0]];
        let polys = (0..2)
            .map(|_| Polynomial::new(2, exps.iter().map(|e| (gaussian(&mut rng), e.to_vec()))).unwrap())
            .collect();
        PolySystem::new(2, polys).unwrap()
    }

    /// Central differences in t and in each x_j against the analytic derivatives.
    fn check_derivatives<H: PathHomotopy>(h: &H, x: &[Complex64], t: f64) {
        let e = h.evaluate(x, t);
        let step = 1e-6;
        let vp = h.value(x, t + step);
        let vm = h.value(x, t - step);
        for i in 0..h.dim() {
            let fd = (vp[i] - vm[i]) / (2.0 * step);
            assert!((fd - e.d_t[i]).norm() < 1e-6 * (1.0 + fd.norm()));
        }
        for j in 0..h.dim() {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += step;
            xm[j] -= step;
            let vp = h.value(&xp, t);
            let vm = h.value(&xm, t);
            for i in 0..h.dim() {
                let fd = (vp[i] - vm[i]) / (2.0 * step);
                assert!((fd - e.jac_x[(i, j)]).norm() < 1e-6 * (1.0 + fd.norm()));
            }
        }
    }

    #[test]
    fn affine_and_projective_derivatives() {
        let target = quad_pair(1);
        let start = quad_pair(2);
        let h = Homotopy::new(target, start, Complex64::from_polar(1.0, 0.7)).unwrap();
        let x = vec![c(0.3), Complex64::new(-0.2, 0.5)];
        check_derivatives(&h, &x, 0.4);
        let mut rng = substream(3, "patch");
        let p = ProjectiveHomotopy::new(&h, (0..3).map(|_| gaussian(&mut rng)).collect()).unwrap();
        let lifted = p.lift(&x);
        check_derivatives(&p, &lifted, 0.4);
        let back = p.to_affine(&lifted).unwrap();
        assert!(linalg::distance(&back, &x) < 1e-14);
        assert!((p.affine_norm(&lifted) - linalg::norm(&x)).abs() < 1e-14);
    }

    #[test]
    fn endpoints_of_the_blend() {
        let target = quad_pair(1);
        let start = quad_pair(2);
        let gamma = Complex64::from_polar(1.0, 0.7);
        let h = Homotopy::new(target.clone(), start.clone(), gamma).unwrap();
        let x = vec![c(0.3), c(0.1)];
        let v0 = h.value(&x, 0.0);
        let v1 = h.value(&x, 1.0);
        let f = target.evaluate(&x).unwrap();
        let g = start.evaluate(&x).unwrap();
        for i in 0..2 {
            assert!((v0[i] - f[i]).norm() < 1e-15);
            assert!((v1[i] - gamma * g[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_square() {
        let p = Polynomial::var(2, 0);
        let s = PolySystem::new(2, vec![p]).unwrap();
        assert!(Homotopy::new(s.clone(), s, c(1.0)).is_err());
    }
}
