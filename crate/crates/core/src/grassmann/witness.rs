//! Schubert witness sets `V_Q ∩ X₁₃(M_•)` and `V_Q ∩ X₀₄(M_•)` for the
//! threefold `V_Q ⊂ G(1, P⁴)` of lines on a smooth quadric, moved between
//! flags by a straight-line path of frames.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geometry::{dedup_lines, line_in_schubert, pluecker_distance, Flag, Line, LineDoc, Quadric, AMBIENT, LINE_DEDUP_TOL, RANK_TOL};
use super::poset::SchubertIndex;
use super::{affine_vector, quadratic_form};
use crate::cycle_algebra::{builtin_basis, class_from_degrees, CycleClass, DegreeVector, Space};
use crate::error::{Error, Result};
use crate::linalg;
use crate::par;
use crate::polysys::PolySystem;
use crate::rng::{self, SeededRng};
use crate::solver::{
    alpha_number, newton_refine, solve_total_degree, track_path, Certificate, HomotopyEval, PathHomotopy, PathResult,
    PathStatus, PathSummary, TrackerSettings,
};

/// Bound on each on-quadric residual of a witness line.
pub const LINE_RESIDUAL_TOL: f64 = 1e-8;
/// Plücker distance under which a moved line matches a query line.
pub const LINE_MATCH_TOL: f64 = 1e-6;
const ATTEMPTS: usize = 3;
/// Expected number of lines in `V_Q ∩ X₁₃(M_•)`.
const LINES_THROUGH_X13: usize = 4;

/// Affine chart on `X₁₃(M_•)`: `p = m₀ + s·m₁` runs over `M₁` and
/// `q = c₂ + u·c₀ + v·c₁` over a plane of `M₃` spanned by a rotated basis
/// `c = [m₀ m₁ m₂ m₃]·U`; the line is `span(p, q)`.
#[derive(Debug, Clone)]
struct Chart {
    p0: Vec<Complex64>,
    p1: Vec<Complex64>,
    q0: Vec<Complex64>,
    qu: Vec<Complex64>,
    qv: Vec<Complex64>,
}

impl Chart {
    fn new(flag: &Flag, rotation: &DMatrix<Complex64>) -> Self {
        let rotated = flag.frame().columns(0, 4) * rotation;
        Chart {
            p0: flag.column(0),
            p1: flag.column(1),
            q0: linalg::column(&rotated, 2),
            qu: linalg::column(&rotated, 0),
            qv: linalg::column(&rotated, 1),
        }
    }

    /// `a·self + b·other`, vector by vector.
    fn combine(&self, a: Complex64, other: &Chart, b: Complex64) -> Chart {
        let mix = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> { x.iter().zip(y).map(|(u, v)| a * u + b * v).collect() };
        Chart {
            p0: mix(&self.p0, &other.p0),
            p1: mix(&self.p1, &other.p1),
            q0: mix(&self.q0, &other.q0),
            qu: mix(&self.qu, &other.qu),
            qv: mix(&self.qv, &other.qv),
        }
    }

    fn p(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.p0.iter().zip(&self.p1).map(|(a, b)| a + x[0] * b).collect()
    }

    fn q(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..AMBIENT).map(|k| self.q0[k] + x[1] * self.qu[k] + x[2] * self.qv[k]).collect()
    }

    fn line(&self, x: &[Complex64]) -> Result<Line> {
        Line::through(&self.p(x), &self.q(x))
    }

    /// Chart coordinates `(s, u, v)` of a line in `X₁₃`; `None` if the line
    /// meets the excluded part of the chart.
    fn coords(&self, line: &Line) -> Option<Vec<Complex64>> {
        let (r0, r1) = line.orthonormal_rows();
        let cols = |vs: &[&Vec<Complex64>]| -> DMatrix<Complex64> {
            let mut m = DMatrix::zeros(AMBIENT, 2 + vs.len());
            for k in 0..AMBIENT {
                m[(k, 0)] = r0[k];
                m[(k, 1)] = r1[k];
                for (c, v) in vs.iter().enumerate() {
                    m[(k, c + 2)] = v[k] / linalg::norm(v);
                }
            }
            m
        };
        let a = linalg::null_vector(&cols(&[&self.p0, &self.p1]));
        let b = linalg::null_vector(&cols(&[&self.qu, &self.qv, &self.q0]));
        if a[2].norm() < 1e-10 || b[4].norm() < 1e-10 {
            return None;
        }
        let n = |v: &Vec<Complex64>| linalg::norm(v);
        let s = (a[3] / n(&self.p1)) / (a[2] / n(&self.p0));
        let w = b[4] / n(&self.q0);
        let u = (b[2] / n(&self.qu)) / w;
        let v = (b[3] / n(&self.qv)) / w;
        Some(vec![s, u, v])
    }

    /// `[pᵀAp, pᵀAq, qᵀAq]` in the variables `(s, u, v)`.
    fn system(&self, a: &DMatrix<Complex64>) -> PolySystem {
        let p = affine_vector(3, &self.p0, &[(0, &self.p1)]);
        let q = affine_vector(3, &self.q0, &[(1, &self.qu), (2, &self.qv)]);
        let polys = vec![quadratic_form(a, &p, &p), quadratic_form(a, &p, &q), quadratic_form(a, &q, &q)];
        PolySystem::with_vars(vec!["s".into(), "u".into(), "v".into()], polys).expect("three variables")
    }
}

/// The chart system with frame `t·G_start + (1 − t)·γ·G_target`.
struct FlagHomotopy<'a> {
    a: &'a DMatrix<Complex64>,
    start: Chart,
    /// Target chart already multiplied by γ.
    target: Chart,
    /// `d/dt` of every chart vector.
    velocity: Chart,
}

impl<'a> FlagHomotopy<'a> {
    fn new(a: &'a DMatrix<Complex64>, start: Chart, target: Chart, gamma: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let target = target.combine(gamma, &target, Complex64::new(0.0, 0.0));
        let velocity = start.combine(one, &target, -one);
        FlagHomotopy {
            a,
            start,
            target,
            velocity,
        }
    }

    fn chart_at(&self, t: f64) -> Chart {
        self.start.combine(Complex64::new(t, 0.0), &self.target, Complex64::new(1.0 - t, 0.0))
    }
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

impl PathHomotopy for FlagHomotopy<'_> {
    fn dim(&self) -> usize {
        3
    }

    fn evaluate(&self, x: &[Complex64], t: f64) -> HomotopyEval {
        let c = self.chart_at(t);
        let p = c.p(x);
        let q = c.q(x);
        let ap = linalg::mat_vec(self.a, &p);
        let aq = linalg::mat_vec(self.a, &q);
        let two = Complex64::new(2.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let value = vec![dot(&p, &ap), dot(&p, &aq), dot(&q, &aq)];
        let jac_x = DMatrix::from_row_slice(
            3,
            3,
            &[
                two * dot(&ap, &c.p1),
                zero,
                zero,
                dot(&c.p1, &aq),
                dot(&ap, &c.qu),
                dot(&ap, &c.qv),
                zero,
                two * dot(&aq, &c.qu),
                two * dot(&aq, &c.qv),
            ],
        );
        let pdot = self.velocity.p(x);
        let qdot = self.velocity.q(x);
        let d_t = vec![two * dot(&ap, &pdot), dot(&pdot, &aq) + dot(&ap, &qdot), two * dot(&aq, &qdot)];
        HomotopyEval { value, jac_x, d_t }
    }
}

#[derive(Debug, Clone)]
pub struct SchubertWitnessSet {
    pub quadric: Quadric,
    pub flag: Flag,
    /// `V_Q ∩ X₁₃(M_•)` in canonical Plücker order.
    pub w13: Vec<Line>,
    /// `V_Q ∩ X₀₄(M_•)`, empty whenever `M₀ ∉ Q`.
    pub w04: Vec<Line>,
    /// One certificate per line of `w13`, computed in a chart system.
    pub certificates: Vec<Certificate>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchubertWitnessDoc {
    pub quadric: Vec<Vec<[f64; 2]>>,
    pub flag: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "W13")]
    pub w13: Vec<LineDoc>,
    #[serde(rename = "W04")]
    pub w04: Vec<LineDoc>,
    pub certificates: Vec<Certificate>,
}

impl SchubertWitnessSet {
    /// `(deg W₁₃, deg W₀₄)`.
    pub fn degrees(&self) -> (usize, usize) {
        (self.w13.len(), self.w04.len())
    }

    /// Largest on-quadric residual over all witness lines.
    pub fn max_residual(&self) -> f64 {
        self.w13
            .iter()
            .chain(&self.w04)
            .flat_map(|l| self.quadric.line_residuals(l))
            .fold(0.0, f64::max)
    }

    pub fn to_doc(&self) -> SchubertWitnessDoc {
        SchubertWitnessDoc {
            quadric: self.quadric.to_doc(),
            flag: self.flag.to_doc(),
            w13: self.w13.iter().map(Line::to_doc).collect(),
            w04: self.w04.iter().map(Line::to_doc).collect(),
            certificates: self.certificates.clone(),
        }
    }

    /// Rebuild from JSON, checking every line against the quadric and the
    /// flag. Certificates are recomputed.
    pub fn from_doc(doc: &SchubertWitnessDoc, seed: u64) -> Result<Self> {
        let quadric = Quadric::from_doc(&doc.quadric)?;
        let flag = Flag::from_doc(&doc.flag)?;
        let w13 = doc.w13.iter().map(Line::from_doc).collect::<Result<Vec<_>>>()?;
        let w04 = doc.w04.iter().map(Line::from_doc).collect::<Result<Vec<_>>>()?;
        for (lines, idx) in [(&w13, "13"), (&w04, "04")] {
            let idx: SchubertIndex = idx.parse()?;
            for l in lines {
                if !quadric.contains_line(l, LINE_RESIDUAL_TOL) || !line_in_schubert(l, idx, &flag, RANK_TOL) {
                    return Err(Error::Precondition(format!("witness line is not in V_Q ∩ X_{idx}")));
                }
            }
        }
        let mut rng = rng::substream(seed, "schubert-load");
        let chart = Chart::new(&flag, &rng::random_unitary(&mut rng, 4));
        let (w13, certificates) = finalize(&quadric, &chart, w13.iter().map(|l| chart.coords(l)).collect())?;
        Ok(SchubertWitnessSet {
            quadric,
            flag,
            w13,
            w04,
            certificates,
        })
    }
}

/// Refine chart points on the chart system, certify them and convert them to
/// lines in canonical order.
fn finalize(quadric: &Quadric, chart: &Chart, points: Vec<Option<Vec<Complex64>>>) -> Result<(Vec<Line>, Vec<Certificate>)> {
    let system = chart.system(quadric.matrix());
    let mut out = Vec::with_capacity(points.len());
    for x in points {
        let x = x.ok_or_else(|| Error::TrackingFailure("witness line outside the chart".into()))?;
        let x = match newton_refine(&system, &x, 1e-15, 6) {
            Ok(r) if r.point.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => r.point,
            _ => x,
        };
        let cert = alpha_number(&system, &x).unwrap_or(Certificate {
            alpha: f64::INFINITY,
            beta: f64::INFINITY,
            gamma_bound: f64::INFINITY,
            certified: false,
        });
        out.push((chart.line(&x)?, cert));
    }
    out.sort_by(|a, b| super::geometry::pluecker_cmp(&a.0, &b.0));
    Ok(out.into_iter().unzip())
}

fn relative_form(a: &DMatrix<Complex64>, x: &[Complex64], y: &[Complex64]) -> f64 {
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    linalg::bilinear(a, x, y).norm() / (scale * linalg::norm(x) * linalg::norm(y))
}

/// Genericity of a flag for `Q`: `M₀ ∉ Q`, and `M₁` meets `Q` in two
/// distinct points neither of which is `m₁` (the point the `p` chart misses).
fn check_flag(quadric: &Quadric, flag: &Flag) -> Result<()> {
    let a = quadric.matrix();
    let m0 = flag.column(0);
    let m1 = flag.column(1);
    if relative_form(a, &m0, &m0) < 1e-8 {
        return Err(Error::DegenerateFlag("M0 lies on the quadric".into()));
    }
    if relative_form(a, &m1, &m1) < 1e-8 {
        return Err(Error::DegenerateFlag("M1 meets the quadric at m1, outside the chart".into()));
    }
    // (m0 + s m1)ᵀA(m0 + s m1) = c0 + 2 c1 s + c2 s²
    let c0 = linalg::bilinear(a, &m0, &m0);
    let c1 = linalg::bilinear(a, &m0, &m1);
    let c2 = linalg::bilinear(a, &m1, &m1);
    let disc = (c1 * c1 - c0 * c2).norm() / (c1.norm().powi(2) + (c0 * c2).norm());
    if disc < 1e-8 {
        return Err(Error::DegenerateFlag("M1 is tangent to the quadric".into()));
    }
    Ok(())
}

/// `W₁₃ = V_Q ∩ X₁₃(M_•)` by solving the chart system (8 paths, 4 finite
/// solutions), and `W₀₄ = ∅` since `M₀ ∉ Q`.
pub fn lines_on_quadric_witness(quadric: &Quadric, flag: &Flag, seed: u64) -> Result<SchubertWitnessSet> {
    check_flag(quadric, flag)?;
    let mut rng = rng::substream(seed, "schubert-witness");
    let mut attempts = Vec::new();
    let mut best = 0;
    for _ in 0..ATTEMPTS {
        let chart = Chart::new(flag, &rng::random_unitary(&mut rng, 4));
        let system = chart.system(quadric.matrix());
        let report = solve_total_degree(&system, rng::child_seed(&mut rng))?;
        let mut points = Vec::new();
        for sol in &report.solutions {
            let Ok(line) = chart.line(&sol.point) else { continue };
            if quadric.contains_line(&line, LINE_RESIDUAL_TOL) && line_in_schubert(&line, "13".parse()?, flag, RANK_TOL) {
                points.push((sol.point.clone(), line));
            }
        }
        let distinct = dedup_lines(points.iter().map(|p| p.1.clone()).collect(), LINE_DEDUP_TOL);
        if distinct.len() == LINES_THROUGH_X13 && points.len() == LINES_THROUGH_X13 {
            let (w13, certificates) = finalize(quadric, &chart, points.into_iter().map(|p| Some(p.0)).collect())?;
            return Ok(SchubertWitnessSet {
                quadric: quadric.clone(),
                flag: flag.clone(),
                w13,
                w04: Vec::new(),
                certificates,
            });
        }
        best = best.max(distinct.len());
        attempts.push(format!("{} lines from {:?}", distinct.len(), report.summary));
    }
    Err(Error::GenericityWarning {
        expected: LINES_THROUGH_X13,
        found: best,
        detail: attempts.join("; "),
    })
}

/// Per-path outcome of a flag move, in the order of the source lines.
#[derive(Debug, Clone)]
pub struct SchubertMoveReport {
    pub paths: Vec<PathResult>,
    /// Endpoint lines of the paths that ended at a finite solution.
    pub endpoints: Vec<Option<Line>>,
    pub summary: PathSummary,
    pub witness: Option<SchubertWitnessSet>,
}

/// Track `W₁₃` along `G(t) = t·G_start + (1 − t)·γ·G_target`, once.
pub fn schubert_move_report(ws: &SchubertWitnessSet, target: &Flag, seed: u64) -> Result<SchubertMoveReport> {
    let mut rng = rng::substream(seed, "schubert-move");
    let gamma = rng::unit_gamma(&mut rng);
    let rotation = rng::random_unitary(&mut rng, 4);
    let a = ws.quadric.matrix();
    let start = Chart::new(&ws.flag, &rotation);
    let target_chart = Chart::new(target, &rotation);
    let start_system = start.system(a);
    let starts = ws
        .w13
        .iter()
        .map(|l| {
            let x = start
                .coords(l)
                .ok_or_else(|| Error::TrackingFailure("witness line outside the start chart".into()))?;
            Ok(newton_refine(&start_system, &x, 1e-15, 6).map(|r| r.point).unwrap_or(x))
        })
        .collect::<Result<Vec<_>>>()?;
    let h = FlagHomotopy::new(a, start, target_chart.clone(), gamma);
    let settings = TrackerSettings::default();
    let paths = par::map(&starts, |x| track_path(&h, x, &settings))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let summary = PathSummary::from_results(paths.iter(), seed);
    let target_system = target_chart.system(a);
    let endpoints: Vec<Option<Line>> = paths
        .iter()
        .map(|r| match r.status {
            PathStatus::Success | PathStatus::SingularEndpoint => {
                let x = newton_refine(&target_system, &r.endpoint, 1e-15, 6)
                    .map(|o| o.point)
                    .unwrap_or_else(|_| r.endpoint.clone());
                target_chart.line(&x).ok()
            }
            _ => None,
        })
        .collect();
    let complete = paths.iter().all(|r| r.status == PathStatus::Success)
        && endpoints.iter().flatten().all(|l| ws.quadric.contains_line(l, LINE_RESIDUAL_TOL))
        && dedup_lines(endpoints.iter().flatten().cloned().collect(), LINE_DEDUP_TOL).len() == ws.w13.len();
    let witness = if complete {
        let points = paths.iter().map(|r| Some(r.endpoint.clone())).collect();
        let (w13, certificates) = finalize(&ws.quadric, &target_chart, points)?;
        Some(SchubertWitnessSet {
            quadric: ws.quadric.clone(),
            flag: target.clone(),
            w13,
            w04: Vec::new(),
            certificates,
        })
    } else {
        None
    };
    Ok(SchubertMoveReport {
        paths,
        endpoints,
        summary,
        witness,
    })
}

/// Move a Schubert witness set to a new flag, redrawing γ and the chart if
/// a path fails.
pub fn schubert_witness_move(ws: &SchubertWitnessSet, target: &Flag, seed: u64) -> Result<SchubertWitnessSet> {
    check_flag(&ws.quadric, target)?;
    let mut rng = rng::substream(seed, "schubert-move-attempts");
    let mut failures = Vec::new();
    for _ in 0..ATTEMPTS {
        let report = schubert_move_report(ws, target, rng::child_seed(&mut rng))?;
        match report.witness {
            Some(w) => return Ok(w),
            None => failures.push(format!("{:?}", report.summary)),
        }
    }
    Err(Error::TrackingFailure(format!("flag move failed: {}", failures.join("; "))))
}

/// A line of `V_Q` from a move to a random flag.
pub fn schubert_sample(ws: &SchubertWitnessSet, seed: u64) -> Result<Line> {
    if ws.w13.is_empty() {
        return Err(Error::Precondition("empty witness set".into()));
    }
    let mut rng = rng::substream(seed, "schubert-sample");
    let flag = random_generic_flag(&ws.quadric, &mut rng);
    let moved = schubert_witness_move(ws, &flag, rng::child_seed(&mut rng))?;
    Ok(moved.w13.into_iter().next().expect("moves preserve the line count"))
}

fn random_generic_flag(quadric: &Quadric, rng: &mut SeededRng) -> Flag {
    loop {
        let f = Flag::random(rng);
        if check_flag(quadric, &f).is_ok() {
            return f;
        }
    }
}

/// A random flag with `ℓ ∈ X₁₃`: `M₁` joins a random point `w` of `ℓ` to a
/// random point `r`, and `M₃ = span(ℓ, r, r′)`.
pub fn adapted_flag(line: &Line, quadric: &Quadric, rng: &mut SeededRng) -> Result<Flag> {
    let idx: SchubertIndex = "13".parse()?;
    for _ in 0..100 {
        let w = line.point(rng::gaussian(rng), rng::gaussian(rng));
        let r = rng::gaussian_vec(rng, AMBIENT);
        let r2 = rng::gaussian_vec(rng, AMBIENT);
        let (c, c2) = (rng::gaussian(rng), rng::gaussian(rng));
        let m0: Vec<Complex64> = w.iter().zip(&r).map(|(a, b)| a + c * b).collect();
        let m1: Vec<Complex64> = w.iter().zip(&r).map(|(a, b)| a + c2 * b).collect();
        let p = line.row(0);
        let q = line.row(1);
        let k = rng::gaussian_vec(rng, 4);
        let m3: Vec<Complex64> = (0..AMBIENT).map(|i| k[0] * p[i] + k[1] * q[i] + k[2] * r[i] + k[3] * r2[i]).collect();
        let m4 = rng::gaussian_vec(rng, AMBIENT);
        let mut frame = DMatrix::zeros(AMBIENT, AMBIENT);
        for (j, col) in [m0, m1, r2, m3, m4].iter().enumerate() {
            for i in 0..AMBIENT {
                frame[(i, j)] = col[i];
            }
        }
        let Ok(flag) = Flag::new(frame) else { continue };
        if check_flag(quadric, &flag).is_ok() && line_in_schubert(line, idx, &flag, RANK_TOL) {
            return Ok(flag);
        }
    }
    Err(Error::DegenerateFlag("could not adapt a flag to the line".into()))
}

/// Whether `ℓ₀ ∈ V_Q`: move `W₁₃` to a flag adapted to `ℓ₀` and look for
/// `ℓ₀` among the endpoints.
pub fn schubert_membership(ws: &SchubertWitnessSet, line: &Line, seed: u64) -> Result<bool> {
    schubert_membership_with(ws, line, seed, LINE_MATCH_TOL)
}

/// Membership with an explicit Plücker match tolerance; distances in
/// `[match_tol, 10·match_tol)` are inconclusive.
pub fn schubert_membership_with(ws: &SchubertWitnessSet, line: &Line, seed: u64, match_tol: f64) -> Result<bool> {
    if ws.w13.is_empty() {
        return Err(Error::Precondition("empty witness set".into()));
    }
    let mut rng = rng::substream(seed, "schubert-member");
    let mut last = String::new();
    for _ in 0..ATTEMPTS {
        let flag = adapted_flag(line, &ws.quadric, &mut rng)?;
        let report = schubert_move_report(ws, &flag, rng::child_seed(&mut rng))?;
        let best = report
            .endpoints
            .iter()
            .flatten()
            .map(|l| pluecker_distance(l, line))
            .fold(f64::INFINITY, f64::min);
        if best < match_tol {
            return Ok(true);
        }
        if best < 10.0 * match_tol {
            return Err(Error::Inconclusive(format!("closest endpoint at Plücker distance {best:.3e}")));
        }
        if report.paths.iter().all(|r| r.status == PathStatus::Success) {
            return Ok(false);
        }
        last = format!("{:?}", report.summary);
    }
    Err(Error::Inconclusive(format!("no match and failed paths: {last}")))
}

/// `[V_Q] = deg(W₁₃)·[X₁₃] + deg(W₀₄)·[X₀₄]`.
pub fn class_of_variety(ws: &SchubertWitnessSet) -> Result<CycleClass> {
    let basis = builtin_basis(Space::G14)?;
    let m = basis.matrix(3)?;
    let (d13, d04) = ws.degrees();
    class_from_degrees(
        m,
        &DegreeVector {
            grade: 3,
            degrees: vec![d13 as i64, d04 as i64],
        },
    )
}
