//! Classical witness sets `(F, Λ, W)` for affine varieties: compute, move,
//! sample, membership, and bidegrees in a product of two affine spaces.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::par;
use crate::polysys::{PolySystem, Polynomial, SystemDoc};
use crate::rng::{self, SeededRng};
use crate::solver::{
    alpha_number, dedup_points, lex_cmp, newton_refine, solve_total_degree_with, track_path, Certificate, HomotopyEval,
    PathHomotopy, PathResult, PathStatus, PathSummary, SolveOptions,
};

/// Residual bound for points kept after solving a squared-up system.
pub const FILTER_TOL: f64 = 1e-6;
/// Coordinate distance under which a moved endpoint matches a query point.
pub const MATCH_TOL: f64 = 1e-6;

/// `k` affine forms on `ℂⁿ`, row `i` being `a_{i0} + Σ_j a_{ij} x_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSlice {
    forms: DMatrix<Complex64>,
}

impl LinearSlice {
    pub fn new(forms: DMatrix<Complex64>) -> Result<Self> {
        let k = forms.nrows();
        if forms.ncols() == 0 {
            return Err(Error::InvalidParameter("slice needs n + 1 columns".into()));
        }
        let n = forms.ncols() - 1;
        if k > n {
            return Err(Error::InvalidParameter(format!("{k} forms on a {n}-dimensional space")));
        }
        if k > 0 && linalg::rank(&forms.columns(1, n).into_owned(), 1e-10) < k {
            return Err(Error::InvalidParameter("slice linear part is rank deficient".into()));
        }
        Ok(LinearSlice { forms })
    }

    /// Gaussian random forms.
    pub fn random(k: usize, n: usize, rng: &mut SeededRng) -> Self {
        LinearSlice {
            forms: rng::gaussian_matrix(rng, k, n + 1),
        }
    }

    /// Random forms whose constant terms are adjusted to vanish at `p`.
    pub fn random_through(p: &[Complex64], k: usize, rng: &mut SeededRng) -> Self {
        let mut s = Self::random(k, p.len(), rng);
        for i in 0..k {
            let v: Complex64 = (0..p.len()).map(|j| s.forms[(i, j + 1)] * p[j]).sum();
            s.forms[(i, 0)] = -v;
        }
        s
    }

    pub fn codim(&self) -> usize {
        self.forms.nrows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.forms.ncols() - 1
    }

    pub fn forms(&self) -> &DMatrix<Complex64> {
        &self.forms
    }

    pub fn eval(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.codim())
            .map(|i| self.forms[(i, 0)] + (0..x.len()).map(|j| self.forms[(i, j + 1)] * x[j]).sum::<Complex64>())
            .collect()
    }

    pub fn as_system(&self) -> Vec<Polynomial> {
        (0..self.codim())
            .map(|i| {
                let row: Vec<Complex64> = self.forms.row(i).iter().copied().collect();
                Polynomial::affine(&row)
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct WitnessSet {
    pub system: PolySystem,
    pub dim: usize,
    pub slice: LinearSlice,
    pub points: Vec<Vec<Complex64>>,
    pub certificates: Vec<Certificate>,
    /// Number of endpoints merged into each point (1 for transverse points).
    pub multiplicities: Vec<usize>,
}

impl WitnessSet {
    pub fn degree(&self) -> usize {
        self.points.len()
    }

    /// `(‖F(p)‖, ‖Λ(p)‖)` for every point.
    pub fn residuals(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .map(|p| {
                (
                    linalg::norm(&self.system.evaluate(p).expect("dimension checked")),
                    linalg::norm(&self.slice.eval(p)),
                )
            })
            .collect()
    }

    pub fn to_doc(&self) -> WitnessDoc {
        WitnessDoc {
            system: self.system.to_doc(),
            dim: self.dim,
            slice: (0..self.slice.codim())
                .map(|i| self.slice.forms.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            points: self.points.iter().map(|p| crate::json::encode_vec(p)).collect(),
        }
    }

    /// Rebuild from JSON; points are re-refined and certified against a fresh
    /// squaring-up of the system.
    pub fn from_doc(doc: &WitnessDoc, seed: u64) -> Result<Self> {
        let system = PolySystem::from_doc(&doc.system)?;
        let n = system.num_vars();
        let k = doc.dim;
        if doc.slice.len() != k || doc.slice.iter().any(|r| r.len() != n + 1) {
            return Err(Error::Parse(format!("slice must be {k} x {}", n + 1)));
        }
        let mut forms = DMatrix::zeros(k, n + 1);
        for (i, row) in doc.slice.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                forms[(i, j)] = Complex64::new(z[0], z[1]);
            }
        }
        let slice = LinearSlice::new(forms)?;
        let points = doc
            .points
            .iter()
            .map(|p| {
                let v = crate::json::decode_vec(p);
                if v.len() != n {
                    Err(Error::Parse(format!("point of length {} in {n} variables", v.len())))
                } else {
                    Ok(v)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let mut rng = rng::substream(seed, "witness-load");
        let square = squared_up(&system, &slice, &mut rng)?;
        let mut certificates = Vec::with_capacity(points.len());
        let mut refined = Vec::with_capacity(points.len());
        for p in points {
            let out = newton_refine(&square, &p, 1e-14, 5)?;
            certificates.push(alpha_number(&square, &out.point)?);
            refined.push(out.point);
        }
        let multiplicities = vec![1; refined.len()];
        Ok(WitnessSet {
            system,
            dim: k,
            slice,
            points: refined,
            certificates,
            multiplicities,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub system: SystemDoc,
    pub dim: usize,
    pub slice: Vec<Vec<[f64; 2]>>,
    pub points: Vec<Vec<[f64; 2]>>,
}

/// `[R·F; Λ]` with a random `(n − k) × N` matrix `R`.
fn squared_up(system: &PolySystem, slice: &LinearSlice, rng: &mut SeededRng) -> Result<PolySystem> {
    let n = system.num_vars();
    let k = slice.codim();
    let r = rng::gaussian_matrix(rng, n - k, system.num_eqs());
    let top = system.combine(&r)?;
    top.stack(&PolySystem::with_vars(system.vars().to_vec(), slice.as_system())?)
}

fn check_dim(system: &PolySystem, k: usize) -> Result<()> {
    let n = system.num_vars();
    if k >= n {
        return Err(Error::InvalidParameter(format!("dimension {k} must be below {n}")));
    }
    if n - k > system.num_eqs() {
        return Err(Error::WitnessDimension {
            dim: k,
            detail: format!(
                "{} equations cannot cut out a {k}-dimensional set in {n} variables",
                system.num_eqs()
            ),
        });
    }
    Ok(())
}

/// Witness set for the `k`-dimensional part of `V(F)` cut by a given slice.
pub fn witness_for_slice(system: &PolySystem, slice: LinearSlice, seed: u64) -> Result<WitnessSet> {
    let k = slice.codim();
    check_dim(system, k)?;
    if slice.ambient_dim() != system.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: system.num_vars(),
            got: slice.ambient_dim(),
        });
    }
    let mut rng = rng::substream(seed, "witness-square");
    let square = squared_up(system, &slice, &mut rng)?;
    let report = solve_total_degree_with(&square, rng::child_seed(&mut rng), &SolveOptions::default())?;
    let mut kept = Vec::new();
    let mut best_residual = f64::INFINITY;
    for s in report.solutions {
        let r = linalg::norm(&system.evaluate(&s.point)?);
        best_residual = best_residual.min(r);
        if r < FILTER_TOL {
            kept.push((s.point, s.certificate, s.multiplicity));
        }
    }
    if kept.is_empty() {
        return Err(Error::WitnessDimension {
            dim: k,
            detail: format!(
                "no slice point satisfies F (best residual {best_residual:.2e}; {} paths, {} successful)",
                report.summary.paths, report.summary.success
            ),
        });
    }
    kept.sort_by(|a, b| lex_cmp(&a.0, &b.0));
    Ok(WitnessSet {
        system: system.clone(),
        dim: k,
        slice,
        points: kept.iter().map(|k| k.0.clone()).collect(),
        certificates: kept.iter().map(|k| k.1).collect(),
        multiplicities: kept.iter().map(|k| k.2).collect(),
    })
}

/// Witness set for the `k`-dimensional part of `V(F)` using a random slice.
pub fn witness_compute(system: &PolySystem, k: usize, seed: u64) -> Result<WitnessSet> {
    check_dim(system, k)?;
    let mut rng = rng::substream(seed, "witness-slice");
    let slice = LinearSlice::random(k, system.num_vars(), &mut rng);
    witness_for_slice(system, slice, rng::child_seed(&mut rng))
}

/// `H(x; t) = [R·F(x); (1 − t)·Λ′(x) + t·γ·Λ(x)]`.
struct SliceHomotopy<'a> {
    system: &'a PolySystem,
    r: DMatrix<Complex64>,
    from: &'a LinearSlice,
    to: &'a LinearSlice,
    gamma: Complex64,
}

impl PathHomotopy for SliceHomotopy<'_> {
    fn dim(&self) -> usize {
        self.system.num_vars()
    }

    fn evaluate(&self, x: &[Complex64], t: f64) -> HomotopyEval {
        let n = self.dim();
        let k = self.from.codim();
        let f = self.system.evaluate(x).expect("dimension checked");
        let jf = self.system.jacobian(x).expect("dimension checked");
        let rf = linalg::mat_vec(&self.r, &f);
        let rj = &self.r * jf;
        let a = Complex64::new(1.0 - t, 0.0);
        let b = self.gamma * t;
        let lt = self.to.eval(x);
        let lf = self.from.eval(x);
        let mut value = rf;
        let mut d_t = vec![Complex64::new(0.0, 0.0); n - k];
        let mut jac_x = DMatrix::zeros(n, n);
        jac_x.view_mut((0, 0), (n - k, n)).copy_from(&rj);
        for i in 0..k {
            value.push(a * lt[i] + b * lf[i]);
            d_t.push(-lt[i] + self.gamma * lf[i]);
            for j in 0..n {
                jac_x[(n - k + i, j)] = a * self.to.forms[(i, j + 1)] + b * self.from.forms[(i, j + 1)];
            }
        }
        HomotopyEval { value, jac_x, d_t }
    }
}

/// Per-path outcome of a witness move, in the order of the source points.
#[derive(Debug, Clone)]
pub struct MoveReport {
    pub witness: WitnessSet,
    pub paths: Vec<PathResult>,
    pub summary: PathSummary,
}

pub fn witness_move_report(ws: &WitnessSet, new_slice: &LinearSlice, seed: u64) -> Result<MoveReport> {
    if new_slice.codim() != ws.dim || new_slice.ambient_dim() != ws.system.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: ws.dim,
            got: new_slice.codim(),
        });
    }
    let n = ws.system.num_vars();
    let mut rng = rng::substream(seed, "witness-move");
    let gamma = rng::unit_gamma(&mut rng);
    let r = rng::gaussian_matrix(&mut rng, n - ws.dim, ws.system.num_eqs());
    let h = SliceHomotopy {
        system: &ws.system,
        r: r.clone(),
        from: &ws.slice,
        to: new_slice,
        gamma,
    };
    let options = SolveOptions::default();
    let paths = par::map(&ws.points, |p| track_path(&h, p, &options.tracker))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let summary = PathSummary::from_results(paths.iter(), seed);
    if summary.step_limit > 0 {
        return Err(Error::TrackingFailure(format!(
            "{} of {} paths hit the step limit",
            summary.step_limit, summary.paths
        )));
    }
    let square = ws
        .system
        .combine(&r)?
        .stack(&PolySystem::with_vars(ws.system.vars().to_vec(), new_slice.as_system())?)?;
    let mut ends = Vec::new();
    for pr in &paths {
        if matches!(pr.status, PathStatus::Success | PathStatus::SingularEndpoint) {
            let point = match newton_refine(&square, &pr.endpoint, 1e-14, 5) {
                Ok(out) if pr.status == PathStatus::Success => out.point,
                _ => pr.endpoint.clone(),
            };
            ends.push((point, pr.residual));
        }
    }
    let mut merged = dedup_points(ends, 1e-6);
    merged.sort_by(|a, b| lex_cmp(&a.0, &b.0));
    let certificates = merged
        .iter()
        .map(|m| {
            alpha_number(&square, &m.0).unwrap_or(Certificate {
                alpha: f64::INFINITY,
                beta: f64::INFINITY,
                gamma_bound: f64::INFINITY,
                certified: false,
            })
        })
        .collect();
    let witness = WitnessSet {
        system: ws.system.clone(),
        dim: ws.dim,
        slice: new_slice.clone(),
        points: merged.iter().map(|m| m.0.clone()).collect(),
        certificates,
        multiplicities: merged.iter().map(|m| m.2).collect(),
    };
    Ok(MoveReport {
        witness,
        paths,
        summary,
    })
}

/// Track `W` along the convex combination of slices to a new slice.
pub fn witness_move(ws: &WitnessSet, new_slice: &LinearSlice, seed: u64) -> Result<WitnessSet> {
    witness_move_report(ws, new_slice, seed).map(|r| r.witness)
}

/// A point of `V` obtained by moving to a random slice.
pub fn witness_sample(ws: &WitnessSet, seed: u64) -> Result<Vec<Complex64>> {
    if ws.points.is_empty() {
        return Err(Error::Precondition("empty witness set".into()));
    }
    let mut rng = rng::substream(seed, "witness-sample");
    let slice = LinearSlice::random(ws.dim, ws.system.num_vars(), &mut rng);
    let moved = witness_move(ws, &slice, rng::child_seed(&mut rng))?;
    moved
        .points
        .into_iter()
        .next()
        .ok_or_else(|| Error::TrackingFailure("every path was lost while sampling".into()))
}

/// Decide `p ∈ V` by moving to a generic slice through `p`.
///
/// Returns `Err(Inconclusive)` when the nearest endpoint lies in
/// `[MATCH_TOL, 10·MATCH_TOL)`.
pub fn witness_membership(ws: &WitnessSet, p: &[Complex64], seed: u64) -> Result<bool> {
    witness_membership_with(ws, p, seed, MATCH_TOL)
}

/// Membership with an explicit match tolerance; distances in
/// `[match_tol, 10·match_tol)` are inconclusive.
pub fn witness_membership_with(ws: &WitnessSet, p: &[Complex64], seed: u64, match_tol: f64) -> Result<bool> {
    if p.len() != ws.system.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: ws.system.num_vars(),
            got: p.len(),
        });
    }
    let mut rng = rng::substream(seed, "witness-member");
    let slice = LinearSlice::random_through(p, ws.dim, &mut rng);
    let moved = witness_move(ws, &slice, rng::child_seed(&mut rng))?;
    let nearest = moved
        .points
        .iter()
        .map(|q| linalg::distance(p, q))
        .fold(f64::INFINITY, f64::min);
    if nearest < match_tol {
        Ok(true)
    } else if nearest < 10.0 * match_tol {
        Err(Error::Inconclusive(format!("nearest endpoint at distance {nearest:.3e}")))
    } else {
        Ok(false)
    }
}

/// Witness sets for every bidegree `(a, b)`, `a + b = k`, of a variety in
/// `ℂᵐ × ℂⁿ`: `a` random forms in the first block of variables and `b` in the
/// second. The point counts are the bidegrees `d_{a,b}`.
pub fn product_witness(
    system: &PolySystem,
    m: usize,
    n: usize,
    k: usize,
    seed: u64,
) -> Result<BTreeMap<(usize, usize), WitnessSet>> {
    if m + n != system.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: system.num_vars(),
            got: m + n,
        });
    }
    check_dim(system, k)?;
    let mut rng = rng::substream(seed, "product-witness");
    let mut out = BTreeMap::new();
    for a in 0..=k.min(m) {
        let b = k - a;
        if b > n {
            continue;
        }
        let mut forms = DMatrix::zeros(k, m + n + 1);
        for i in 0..k {
            forms[(i, 0)] = rng::gaussian(&mut rng);
            let cols = if i < a { 1..=m } else { m + 1..=m + n };
            for j in cols {
                forms[(i, j)] = rng::gaussian(&mut rng);
            }
        }
        let slice = LinearSlice::new(forms)?;
        let ws = match witness_for_slice(system, slice.clone(), rng::child_seed(&mut rng)) {
            Ok(ws) => ws,
            // a slice missing V entirely is bidegree zero
            Err(Error::WitnessDimension { .. }) => WitnessSet {
                system: system.clone(),
                dim: k,
                slice,
                points: Vec::new(),
                certificates: Vec::new(),
                multiplicities: Vec::new(),
            },
            Err(e) => return Err(e),
        };
        out.insert((a, b), ws);
    }
    Ok(out)
}
