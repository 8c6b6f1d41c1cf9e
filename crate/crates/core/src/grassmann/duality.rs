//! Numerical check of the duality pairing: for flags `g`, `h` in general
//! position and complementary indices, `X_α(g) ∩ X_β(h)` is one line when
//! `β = α̂` and empty otherwise.

use num_complex::Complex64;

use super::geometry::{dedup_lines, line_in_schubert, Flag, Line, AMBIENT, LINE_DEDUP_TOL};
use super::poset::SchubertIndex;
use super::quartic::{chart_vars, LineChart};
use crate::error::{Error, Result};
use crate::polysys::{PolySystem, Polynomial};
use crate::rng;
use crate::solver::solve_total_degree;

/// Rank-test tolerance for accepting a computed line in both Schubert varieties.
const MEMBERSHIP_TOL: f64 = 1e-6;

fn dot(row: &[Complex64], v: &[Polynomial], num_vars: usize) -> Polynomial {
    row.iter()
        .zip(v)
        .fold(Polynomial::zero(num_vars), |acc, (c, f)| &acc + &f.scale(*c))
}

fn needs_multiplier(idx: SchubertIndex) -> bool {
    idx.j() - idx.i() >= 3
}

/// Equations for `ℓ = span(p, q) ∈ X_ij(flag)` in terms of the dual frame
/// `n₀..n₄`: `ℓ ⊂ M_j` is `n_k·p = n_k·q = 0` for `k > j`; inside `M_j`,
/// `ℓ` meets `M_i` iff the vectors `(n_k·p)` and `(n_k·q)`, `i < k ≤ j`, are
/// dependent. That is one 2×2 minor when `j − i = 2` and, when `j − i ≥ 3`,
/// `λ·(n_k·p) + n_k·q = 0` with an extra unknown `λ`.
fn conditions(
    idx: SchubertIndex,
    flag: &Flag,
    p: &[Polynomial],
    q: &[Polynomial],
    num_vars: usize,
    multiplier: Option<usize>,
) -> Vec<Polynomial> {
    let dual = flag.dual_frame();
    let row = |k: usize| -> Vec<Complex64> { dual.row(k).iter().copied().collect() };
    let (i, j) = (idx.i() as usize, idx.j() as usize);
    let mut eqs = Vec::new();
    for k in j + 1..AMBIENT {
        eqs.push(dot(&row(k), p, num_vars));
        eqs.push(dot(&row(k), q, num_vars));
    }
    match (j - i, multiplier) {
        (2, _) => {
            let (a, b) = (row(i + 1), row(i + 2));
            let lhs = &dot(&a, p, num_vars) * &dot(&b, q, num_vars);
            let rhs = &dot(&b, p, num_vars) * &dot(&a, q, num_vars);
            eqs.push(&lhs - &rhs);
        }
        (m, Some(var)) if m >= 3 => {
            let lambda = Polynomial::var(num_vars, var);
            for k in i + 1..=j {
                let n = row(k);
                eqs.push(&(&lambda * &dot(&n, p, num_vars)) + &dot(&n, q, num_vars));
            }
        }
        _ => {}
    }
    eqs
}

/// Number of lines in `X_α(g) ∩ X_β(h)` for general flags.
pub fn expected_pairing_count(alpha: SchubertIndex, beta: SchubertIndex) -> Result<usize> {
    if alpha.rank() + beta.rank() != 6 {
        return Err(Error::InvalidParameter(format!(
            "ranks {} and {} are not complementary",
            alpha.rank(),
            beta.rank()
        )));
    }
    Ok(usize::from(beta == alpha.dual()))
}

/// Solve `X_α(g) ∩ X_β(h)` for complementary `α`, `β` in a random line chart.
pub fn schubert_pairing_lines(alpha: SchubertIndex, g: &Flag, beta: SchubertIndex, h: &Flag, seed: u64) -> Result<Vec<Line>> {
    expected_pairing_count(alpha, beta)?;
    let mut rng = rng::substream(seed, "schubert-pairing");
    let chart = LineChart::random(&mut rng);
    let extra = usize::from(needs_multiplier(alpha)) + usize::from(needs_multiplier(beta));
    let num_vars = 6 + extra;
    let (p, q) = chart.points(num_vars);
    let mut next = 6;
    let mut slot = |idx: SchubertIndex| {
        needs_multiplier(idx).then(|| {
            next += 1;
            next - 1
        })
    };
    let (sa, sb) = (slot(alpha), slot(beta));
    let mut polys = conditions(alpha, g, &p, &q, num_vars, sa);
    polys.extend(conditions(beta, h, &p, &q, num_vars, sb));
    let system = PolySystem::with_vars(chart_vars(extra), polys)?;
    let report = solve_total_degree(&system, rng::child_seed(&mut rng))?;
    let lines = report
        .solutions
        .iter()
        .filter_map(|s| chart.line(&s.point[..6]).ok())
        .filter(|l| line_in_schubert(l, alpha, g, MEMBERSHIP_TOL) && line_in_schubert(l, beta, h, MEMBERSHIP_TOL))
        .collect();
    Ok(dedup_lines(lines, LINE_DEDUP_TOL))
}
