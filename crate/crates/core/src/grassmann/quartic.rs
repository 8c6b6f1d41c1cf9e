//! The sixteen lines on the quartic surface `Q₁ ∩ Q₂ ⊂ P⁴`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::geometry::{dedup_lines, Flag, Line, Quadric, LINE_DEDUP_TOL};
use super::witness::LINE_RESIDUAL_TOL;
use super::{affine_vector, quadratic_form};
use crate::error::{Error, Result};
use crate::linalg;
use crate::polysys::{PolySystem, Polynomial};
use crate::rng;
use crate::solver::solve_total_degree;

const EXPECTED_LINES: usize = 16;
const ATTEMPTS: usize = 3;

/// Lines as row spans `[[1,0,a,b,c],[0,1,d,e,f]]` after a random coordinate
/// change `T`: the two basis points are `T·(1,0,a,b,c)` and `T·(0,1,d,e,f)`.
pub(crate) struct LineChart {
    pub(crate) transform: DMatrix<Complex64>,
}

impl LineChart {
    pub(crate) fn random(rng: &mut rng::SeededRng) -> Self {
        LineChart {
            transform: Flag::random(rng).frame().clone(),
        }
    }

    /// Polynomial vectors for the two basis points over `num_vars ≥ 6`
    /// variables, the first six being `a..f`.
    pub(crate) fn points(&self, num_vars: usize) -> (Vec<Polynomial>, Vec<Polynomial>) {
        let t = &self.transform;
        let col = |k: usize| linalg::column(t, k);
        let (c2, c3, c4) = (col(2), col(3), col(4));
        let p = affine_vector(num_vars, &col(0), &[(0, &c2), (1, &c3), (2, &c4)]);
        let q = affine_vector(num_vars, &col(1), &[(3, &c2), (4, &c3), (5, &c4)]);
        (p, q)
    }

    pub(crate) fn line(&self, x: &[Complex64]) -> Result<Line> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let p = linalg::mat_vec(&self.transform, &[one, zero, x[0], x[1], x[2]]);
        let q = linalg::mat_vec(&self.transform, &[zero, one, x[3], x[4], x[5]]);
        Line::through(&p, &q)
    }
}

pub(crate) fn chart_vars(extra: usize) -> Vec<String> {
    ["a", "b", "c", "d", "e", "f"]
        .iter()
        .map(|s| s.to_string())
        .chain((0..extra).map(|k| format!("lambda{k}")))
        .collect()
}

/// The lines on `Q₁ ∩ Q₂`: six quadrics in six chart unknowns, 64 paths,
/// sixteen lines for a general pair. A different count after three random
/// charts is reported as a genericity warning.
pub fn lines_on_two_quadrics(q1: &Quadric, q2: &Quadric, seed: u64) -> Result<Vec<Line>> {
    let mut rng = rng::substream(seed, "quartic-lines");
    let mut found = Vec::new();
    for _ in 0..ATTEMPTS {
        let chart = LineChart::random(&mut rng);
        let (p, q) = chart.points(6);
        let mut polys = Vec::with_capacity(6);
        for quadric in [q1, q2] {
            let a = quadric.matrix();
            polys.push(quadratic_form(a, &p, &p));
            polys.push(quadratic_form(a, &p, &q));
            polys.push(quadratic_form(a, &q, &q));
        }
        let system = PolySystem::with_vars(chart_vars(0), polys)?;
        let report = solve_total_degree(&system, rng::child_seed(&mut rng))?;
        let lines: Vec<Line> = report
            .solutions
            .iter()
            .filter_map(|s| chart.line(&s.point).ok())
            .filter(|l| q1.contains_line(l, LINE_RESIDUAL_TOL) && q2.contains_line(l, LINE_RESIDUAL_TOL))
            .collect();
        let lines = dedup_lines(lines, LINE_DEDUP_TOL);
        if lines.len() == EXPECTED_LINES {
            return Ok(lines);
        }
        found.push((lines.len(), report.summary));
    }
    let count = found.iter().map(|f| f.0).max().unwrap_or(0);
    Err(Error::GenericityWarning {
        expected: EXPECTED_LINES,
        found: count,
        detail: found
            .iter()
            .map(|(n, s)| format!("{n} lines, paths {s:?}"))
            .collect::<Vec<_>>()
            .join("; "),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::AMBIENT;

    #[test]
    fn chart_line_matches_points() {
        let mut rng = rng::substream(9, "test");
        let chart = LineChart::random(&mut rng);
        let x = rng::gaussian_vec(&mut rng, 6);
        let (p, q) = chart.points(6);
        let pv: Vec<Complex64> = p.iter().map(|f| f.eval(&x)).collect();
        let qv: Vec<Complex64> = q.iter().map(|f| f.eval(&x)).collect();
        let direct = Line::through(&pv, &qv).unwrap();
        let via = chart.line(&x).unwrap();
        assert!(super::super::pluecker_distance(&direct, &via) < 1e-12);
        assert_eq!(pv.len(), AMBIENT);
    }
}
