use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::alpha::{alpha_number, Certificate};
use super::homotopy::{Homotopy, ProjectiveHomotopy};
use super::newton::newton_refine;
use super::tracker::{track_path, PathResult, PathStatus, TrackerSettings};
use crate::error::{Error, Result};
use crate::linalg;
use crate::par;
use crate::polysys::{PolySystem, Polynomial};
use crate::rng;

/// Start system `x_i^{d_i} − 1` and its full grid of roots of unity, in
/// mixed-radix order with the first coordinate varying slowest.
pub fn bezout_start(degrees: &[u32]) -> Result<(PolySystem, Vec<Vec<Complex64>>)> {
    if degrees.is_empty() || degrees.contains(&0) {
        return Err(Error::InvalidParameter(format!("degrees must be positive: {degrees:?}")));
    }
    let n = degrees.len();
    let polys = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut e = vec![0; n];
            e[i] = d;
            Polynomial::new(
                n,
                vec![(Complex64::new(1.0, 0.0), e), (Complex64::new(-1.0, 0.0), vec![0; n])],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let roots: Vec<Vec<Complex64>> = degrees
        .iter()
        .map(|&d| {
            (0..d)
                .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64))
                .collect()
        })
        .collect();
    let mut points = vec![Vec::with_capacity(n)];
    for r in &roots {
        points = points
            .into_iter()
            .flat_map(|p| {
                r.iter().map(move |z| {
                    let mut q = p.clone();
                    q.push(*z);
                    q
                })
            })
            .collect();
    }
    Ok((PolySystem::new(n, polys)?, points))
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tracker: TrackerSettings,
    /// Normalized distance under which two endpoints are merged.
    pub dedup_tol: f64,
    pub refine_tol: f64,
    pub refine_iters: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tracker: TrackerSettings::default(),
            dedup_tol: 1e-6,
            refine_tol: 1e-14,
            refine_iters: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub point: Vec<Complex64>,
    pub certificate: Certificate,
    /// Number of successful paths merged into this point.
    pub multiplicity: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSummary {
    pub paths: usize,
    pub success: usize,
    pub diverged: usize,
    pub singular: usize,
    pub step_limit: usize,
    pub seed: u64,
}

impl PathSummary {
    pub fn from_results<'a>(results: impl IntoIterator<Item = &'a PathResult>, seed: u64) -> Self {
        let mut s = PathSummary {
            paths: 0,
            success: 0,
            diverged: 0,
            singular: 0,
            step_limit: 0,
            seed,
        };
        for r in results {
            s.paths += 1;
            match r.status {
                PathStatus::Success => s.success += 1,
                PathStatus::Diverged => s.diverged += 1,
                PathStatus::SingularEndpoint => s.singular += 1,
                PathStatus::StepLimit => s.step_limit += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solutions: Vec<Solution>,
    pub summary: PathSummary,
    pub paths: Vec<PathResult>,
}

/// Lexicographic order on coordinates, real part before imaginary part.
pub fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

pub fn normalized_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = 1f64.max(linalg::norm(a)).max(linalg::norm(b));
    linalg::distance(a, b) / scale
}

/// Merge points closer than `tol`, keeping the smaller-residual representative
/// and counting merges.
pub fn dedup_points(points: Vec<(Vec<Complex64>, f64)>, tol: f64) -> Vec<(Vec<Complex64>, f64, usize)> {
    let mut out: Vec<(Vec<Complex64>, f64, usize)> = Vec::new();
    for (p, r) in points {
        match out.iter_mut().find(|(q, _, _)| normalized_distance(&p, q) < tol) {
            Some(slot) => {
                slot.2 += 1;
                if r < slot.1 {
                    slot.0 = p;
                    slot.1 = r;
                }
            }
            None => out.push((p, r, 1)),
        }
    }
    out
}

/// Track every path of the total-degree homotopy for a square `target`.
///
/// Paths are tracked in a random projective patch so that paths with no
/// finite limit stay bounded and end at infinity.
pub fn track_total_degree(target: &PolySystem, seed: u64, options: &SolveOptions) -> Result<(Vec<PathResult>, ProjectiveHomotopy)> {
    if !target.is_square() {
        return Err(Error::DimensionMismatch {
            expected: target.num_vars(),
            got: target.num_eqs(),
        });
    }
    let degrees: Vec<u32> = target.degrees().into_iter().map(|d| d.max(1)).collect();
    let (start, starts) = bezout_start(&degrees)?;
    let mut rng = rng::substream(seed, "total-degree");
    let gamma = rng::unit_gamma(&mut rng);
    let patch = rng::gaussian_vec(&mut rng, target.num_vars() + 1);
    let affine = Homotopy::new(target.clone(), start, gamma)?;
    let proj = ProjectiveHomotopy::new(&affine, patch)?;
    let lifted: Vec<Vec<Complex64>> = starts.iter().map(|s| proj.lift(s)).collect();
    let results = par::map(&lifted, |s| track_path(&proj, s, &options.tracker));
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok((results, proj))
}

/// Solve a square system by the total-degree homotopy with gamma trick.
/// Returns deduplicated refined solutions sorted lexicographically, plus a
/// per-status path summary.
pub fn solve_total_degree(target: &PolySystem, seed: u64) -> Result<SolveReport> {
    solve_total_degree_with(target, seed, &SolveOptions::default())
}

pub fn solve_total_degree_with(target: &PolySystem, seed: u64, options: &SolveOptions) -> Result<SolveReport> {
    let (mut paths, proj) = track_total_degree(target, seed, options)?;
    let mut finite = Vec::new();
    for r in paths.iter_mut() {
        if r.status != PathStatus::Success {
            continue;
        }
        let Some(x) = proj.to_affine(&r.endpoint) else {
            r.status = PathStatus::Diverged;
            continue;
        };
        let refined = match newton_refine(target, &x, options.refine_tol, options.refine_iters) {
            Ok(out) if out.point.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => out.point,
            _ => x,
        };
        let residual = linalg::norm(&target.evaluate(&refined)?);
        if residual < options.tracker.corrector_tol {
            finite.push((refined, residual));
        } else {
            r.status = PathStatus::StepLimit;
        }
    }
    let summary = PathSummary::from_results(paths.iter(), seed);
    let mut solutions = dedup_points(finite, options.dedup_tol)
        .into_iter()
        .map(|(point, residual, multiplicity)| {
            let certificate = alpha_number(target, &point).unwrap_or(Certificate {
                alpha: f64::INFINITY,
                beta: f64::INFINITY,
                gamma_bound: f64::INFINITY,
                certified: false,
            });
            Solution {
                point,
                certificate,
                multiplicity,
                residual,
            }
        })
        .collect::<Vec<_>>();
    solutions.sort_by(|a, b| lex_cmp(&a.point, &b.point));
    Ok(SolveReport {
        solutions,
        summary,
        paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn start_roots() {
        let (sys, pts) = bezout_start(&[2]).unwrap();
        assert_eq!(pts.len(), 2);
        assert!((pts[0][0] - c(1.0)).norm() < 1e-15);
        assert!((pts[1][0] - c(-1.0)).norm() < 1e-15);
        for p in &pts {
            assert!(sys.evaluate(p).unwrap()[0].norm() < 1e-15);
        }
        let (_, cube) = bezout_start(&[3]).unwrap();
        for (k, p) in cube.iter().enumerate() {
            let want = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0);
            assert!((p[0] - want).norm() < 1e-15);
            assert!((p[0].powu(3) - c(1.0)).norm() < 1e-14);
        }
        let (_, grid) = bezout_start(&[2, 2]).unwrap();
        assert_eq!(grid.len(), 4);
        assert!(bezout_start(&[]).is_err());
    }

    #[test]
    fn dedup_keeps_smaller_residual() {
        let a = vec![c(1.0)];
        let b = vec![c(1.0 + 1e-9)];
        let out = dedup_points(vec![(a, 1e-10), (b.clone(), 1e-12), (vec![c(2.0)], 0.0)], 1e-6);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].0, b);
        assert_eq!(out[0].2, 2);
    }
}
