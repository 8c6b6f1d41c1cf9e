//! Flags, lines with Plücker coordinates, and quadrics in P⁴.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poset::SchubertIndex;
use crate::error::{Error, Result};
use crate::json;
use crate::linalg;
use crate::rng::{self, SeededRng};

pub const AMBIENT: usize = 5;
/// Flags whose frame condition number exceeds this are rejected.
pub const FLAG_CONDITION_LIMIT: f64 = 1e10;
/// Relative singular-value threshold for Schubert rank tests.
pub const RANK_TOL: f64 = 1e-8;
/// Plücker distance under which two computed lines are the same.
pub const LINE_DEDUP_TOL: f64 = 1e-6;

/// Complete flag `M₀ ⊂ M₁ ⊂ M₂ ⊂ M₃ ⊂ P⁴` with `M_i` spanned by the first
/// `i + 1` columns of an invertible frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    frame: DMatrix<Complex64>,
}

impl Flag {
    pub fn new(frame: DMatrix<Complex64>) -> Result<Self> {
        if frame.nrows() != AMBIENT || frame.ncols() != AMBIENT {
            return Err(Error::DimensionMismatch {
                expected: AMBIENT,
                got: frame.nrows().max(frame.ncols()),
            });
        }
        let cond = linalg::condition(&frame);
        if !(cond < FLAG_CONDITION_LIMIT) {
            return Err(Error::DegenerateFlag(format!("frame condition number {cond:.3e}")));
        }
        Ok(Flag { frame })
    }

    pub fn random(rng: &mut SeededRng) -> Self {
        loop {
            if let Ok(f) = Flag::new(rng::gaussian_matrix(rng, AMBIENT, AMBIENT)) {
                return f;
            }
        }
    }

    pub fn frame(&self) -> &DMatrix<Complex64> {
        &self.frame
    }

    pub fn column(&self, k: usize) -> Vec<Complex64> {
        linalg::column(&self.frame, k)
    }

    /// Rows of the inverse frame: `M_j` is cut out by rows `j + 1, …, 4`.
    pub fn dual_frame(&self) -> DMatrix<Complex64> {
        self.frame.clone().try_inverse().expect("flag frames are invertible")
    }

    pub fn to_doc(&self) -> Vec<Vec<[f64; 2]>> {
        json::encode_matrix(&self.frame)
    }

    pub fn from_doc(doc: &[Vec<[f64; 2]>]) -> Result<Self> {
        Flag::new(json::decode_matrix(doc, AMBIENT, AMBIENT)?)
    }
}

/// A line in P⁴ as the row span of a 2×5 matrix, with canonical Plücker
/// coordinates `p_ij = p_i q_j − p_j q_i` (`i < j`, lexicographic), scaled to
/// unit norm with the first nonzero entry real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    span: DMatrix<Complex64>,
    pluecker: Vec<Complex64>,
}

/// Index pairs of the Plücker coordinates in storage order.
pub const PLUECKER_PAIRS: [(usize, usize); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

fn pair_index(i: usize, j: usize) -> usize {
    PLUECKER_PAIRS.iter().position(|&p| p == (i, j)).expect("i < j <= 4")
}

impl Line {
    pub fn new(span: DMatrix<Complex64>) -> Result<Self> {
        if span.nrows() != 2 || span.ncols() != AMBIENT {
            return Err(Error::DimensionMismatch {
                expected: AMBIENT,
                got: span.ncols(),
            });
        }
        if span.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidParameter("non-finite line coordinates".into()));
        }
        let p: Vec<Complex64> = span.row(0).iter().copied().collect();
        let q: Vec<Complex64> = span.row(1).iter().copied().collect();
        let raw: Vec<Complex64> = PLUECKER_PAIRS.iter().map(|&(i, j)| p[i] * q[j] - p[j] * q[i]).collect();
        let scale = linalg::norm(&p) * linalg::norm(&q);
        let n = linalg::norm(&raw);
        if !(scale > 0.0) || n <= 1e-12 * scale {
            return Err(Error::InvalidParameter("line span has rank below 2".into()));
        }
        let mut pluecker: Vec<Complex64> = raw.iter().map(|z| z / n).collect();
        let lead = pluecker
            .iter()
            .copied()
            .find(|z| z.norm() > 1e-12)
            .expect("unit vector has a nonzero entry");
        let phase = lead.conj() / lead.norm();
        for z in pluecker.iter_mut() {
            *z *= phase;
        }
        Ok(Line { span, pluecker })
    }

    pub fn through(p: &[Complex64], q: &[Complex64]) -> Result<Self> {
        if p.len() != AMBIENT || q.len() != AMBIENT {
            return Err(Error::DimensionMismatch {
                expected: AMBIENT,
                got: p.len().min(q.len()),
            });
        }
        let mut span = DMatrix::zeros(2, AMBIENT);
        for k in 0..AMBIENT {
            span[(0, k)] = p[k];
            span[(1, k)] = q[k];
        }
        Line::new(span)
    }

    pub fn random(rng: &mut SeededRng) -> Self {
        loop {
            if let Ok(l) = Line::new(rng::gaussian_matrix(rng, 2, AMBIENT)) {
                return l;
            }
        }
    }

    pub fn span(&self) -> &DMatrix<Complex64> {
        &self.span
    }

    pub fn pluecker(&self) -> &[Complex64] {
        &self.pluecker
    }

    pub fn row(&self, k: usize) -> Vec<Complex64> {
        self.span.row(k).iter().copied().collect()
    }

    /// The point `a·p + b·q`.
    pub fn point(&self, a: Complex64, b: Complex64) -> Vec<Complex64> {
        (0..AMBIENT).map(|k| a * self.span[(0, k)] + b * self.span[(1, k)]).collect()
    }

    /// Orthonormal basis of the span, used for scale-free residuals.
    pub fn orthonormal_rows(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let p = linalg::normalize(&self.row(0));
        let q = self.row(1);
        let proj: Complex64 = p.iter().zip(&q).map(|(a, b)| a.conj() * b).sum();
        let q: Vec<Complex64> = q.iter().zip(&p).map(|(b, a)| b - proj * a).collect();
        (p, linalg::normalize(&q))
    }

    /// Largest absolute value among the five three-term Plücker relations
    /// `p_ab p_cd − p_ac p_bd + p_ad p_bc` over `a < b < c < d`.
    pub fn pluecker_relation_residual(&self) -> f64 {
        let p = |i: usize, j: usize| self.pluecker[pair_index(i, j)];
        let mut worst: f64 = 0.0;
        for skip in 0..AMBIENT {
            let idx: Vec<usize> = (0..AMBIENT).filter(|&k| k != skip).collect();
            let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
            let r = p(a, b) * p(c, d) - p(a, c) * p(b, d) + p(a, d) * p(b, c);
            worst = worst.max(r.norm());
        }
        worst
    }

    pub fn to_doc(&self) -> LineDoc {
        LineDoc {
            span: json::encode_matrix(&self.span),
            pluecker: json::encode_vec(&self.pluecker),
        }
    }

    /// The span is authoritative; the Plücker vector is recomputed.
    pub fn from_doc(doc: &LineDoc) -> Result<Self> {
        Line::new(json::decode_matrix(&doc.span, 2, AMBIENT)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineDoc {
    pub span: Vec<Vec<[f64; 2]>>,
    /// Derived; ignored on input.
    #[serde(default)]
    pub pluecker: Vec<[f64; 2]>,
}

/// Phase-invariant distance `min_θ ‖P − e^{iθ}Q‖` between unit Plücker vectors.
pub fn pluecker_distance(a: &Line, b: &Line) -> f64 {
    let inner: Complex64 = a.pluecker.iter().zip(&b.pluecker).map(|(x, y)| x.conj() * y).sum();
    let phase = if inner.norm() > 0.0 {
        inner.conj() / inner.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.pluecker
        .iter()
        .zip(&b.pluecker)
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Lexicographic order on canonical Plücker vectors.
pub fn pluecker_cmp(a: &Line, b: &Line) -> Ordering {
    crate::solver::lex_cmp(&a.pluecker, &b.pluecker)
}

/// Sort into canonical order and drop lines within `tol` of an earlier one.
pub fn dedup_lines(mut lines: Vec<Line>, tol: f64) -> Vec<Line> {
    lines.sort_by(pluecker_cmp);
    let mut out: Vec<Line> = Vec::with_capacity(lines.len());
    for l in lines {
        if !out.iter().any(|o| pluecker_distance(o, &l) < tol) {
            out.push(l);
        }
    }
    out
}

/// Quadric hypersurface `xᵀAx = 0` with `A` complex symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadric {
    matrix: DMatrix<Complex64>,
}

impl Quadric {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != AMBIENT || matrix.ncols() != AMBIENT {
            return Err(Error::DimensionMismatch {
                expected: AMBIENT,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::SingularQuadric("zero or non-finite matrix".into()));
        }
        let asym = (&matrix - matrix.transpose()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > 1e-12 * scale {
            return Err(Error::InvalidParameter(format!("quadric matrix is not symmetric ({asym:.2e})")));
        }
        let det = (&matrix / Complex64::new(scale, 0.0)).determinant().norm();
        if !(det > 1e-8) {
            return Err(Error::SingularQuadric(format!("normalized |det| = {det:.3e}")));
        }
        Ok(Quadric { matrix })
    }

    /// `B + Bᵀ` for a Gaussian `B`.
    pub fn random(rng: &mut SeededRng) -> Self {
        loop {
            let b = rng::gaussian_matrix(rng, AMBIENT, AMBIENT);
            if let Ok(q) = Quadric::new(&b + b.transpose()) {
                return q;
            }
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        linalg::bilinear(&self.matrix, x, x)
    }

    /// `(pᵀAp, pᵀAq, qᵀAq)` for an orthonormal basis of the line, relative
    /// to the largest entry of `A`: all three vanish iff the line lies on the
    /// quadric.
    pub fn line_residuals(&self, line: &Line) -> [f64; 3] {
        let (p, q) = line.orthonormal_rows();
        let scale = self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
        [
            linalg::bilinear(&self.matrix, &p, &p).norm() / scale,
            linalg::bilinear(&self.matrix, &p, &q).norm() / scale,
            linalg::bilinear(&self.matrix, &q, &q).norm() / scale,
        ]
    }

    pub fn contains_line(&self, line: &Line, tol: f64) -> bool {
        self.line_residuals(line).iter().all(|&r| r < tol)
    }

    pub fn to_doc(&self) -> Vec<Vec<[f64; 2]>> {
        json::encode_matrix(&self.matrix)
    }

    pub fn from_doc(doc: &[Vec<[f64; 2]>]) -> Result<Self> {
        Quadric::new(json::decode_matrix(doc, AMBIENT, AMBIENT)?)
    }
}

fn stacked_rank(line: &Line, flag: &Flag, upto: usize, tol: f64) -> usize {
    let mut m = DMatrix::zeros(upto + 3, AMBIENT);
    let (p, q) = line.orthonormal_rows();
    for k in 0..AMBIENT {
        m[(0, k)] = p[k];
        m[(1, k)] = q[k];
    }
    for c in 0..=upto {
        let col = linalg::normalize(&flag.column(c));
        for k in 0..AMBIENT {
            m[(c + 2, k)] = col[k];
        }
    }
    linalg::rank(&m, tol)
}

/// Whether `ℓ ∈ X_ij(M_•)`, i.e. `ℓ` meets `M_i` and lies in `M_j`, by
/// singular-value rank tests with relative threshold `tol`.
pub fn line_in_schubert(line: &Line, idx: SchubertIndex, flag: &Flag, tol: f64) -> bool {
    let (i, j) = (idx.i() as usize, idx.j() as usize);
    let meets = stacked_rank(line, flag, i, tol) <= i + 2;
    let inside = stacked_rank(line, flag, j, tol) <= j + 1;
    meets && inside
}
