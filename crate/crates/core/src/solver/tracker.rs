//! Euler-predictor / Newton-corrector path tracking in real time `t ∈ [t_end, 1]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::homotopy::PathHomotopy;
use crate::error::{Error, Result};
use crate::linalg;

/// Paths whose affine norm exceeds this are declared divergent.
pub const DIVERGENCE_RADIUS: f64 = 1e8;
/// Endpoints whose Jacobian condition exceeds this are declared singular.
pub const SINGULAR_CONDITION: f64 = 1e10;
/// Successful steps needed before the step size doubles.
const SUCCESSES_TO_GROW: u32 = 4;
/// A stalled path closer than this to `t_end` gets a direct Newton attempt at `t_end`.
const ENDGAME_ZONE: f64 = 1e-3;
const ENDGAME_ITERS: usize = 60;
const FINAL_ITERS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackerSettings {
    pub initial_step: f64,
    pub min_step: f64,
    pub corrector_tol: f64,
    pub newton_max_iters: usize,
    pub max_steps: usize,
    pub t_end: f64,
}

impl Default for TrackerSettings {
    fn default() -> Self {
        TrackerSettings {
            initial_step: 0.05,
            min_step: 1e-12,
            corrector_tol: 1e-9,
            newton_max_iters: 3,
            max_steps: 20_000,
            t_end: 0.0,
        }
    }
}

impl TrackerSettings {
    pub fn validate(&self) -> Result<()> {
        let ok = self.min_step > 0.0
            && self.min_step <= self.initial_step
            && self.initial_step < 1.0
            && self.corrector_tol > 0.0
            && self.newton_max_iters > 0
            && (0.0..1.0).contains(&self.t_end);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("tracker settings {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathStatus {
    Success,
    Diverged,
    StepLimit,
    SingularEndpoint,
}

#[derive(Debug, Clone)]
pub struct PathResult {
    pub status: PathStatus,
    /// Endpoint in the homotopy's own coordinates.
    pub endpoint: Vec<Complex64>,
    pub t_reached: f64,
    pub steps_taken: usize,
    pub endpoint_condition: f64,
    pub residual: f64,
}

/// Newton at fixed `t`. Returns the corrected point and whether the last
/// update fell below the relative tolerance.
fn correct<H: PathHomotopy + ?Sized>(
    h: &H,
    x: &[Complex64],
    t: f64,
    tol: f64,
    max_iters: usize,
) -> Option<(Vec<Complex64>, bool)> {
    let mut point = x.to_vec();
    let mut prev = f64::INFINITY;
    for _ in 0..max_iters {
        let e = h.evaluate(&point, t);
        let dx = linalg::solve(&e.jac_x, &e.value)?;
        let u = linalg::norm(&dx);
        if u > prev {
            return None;
        }
        for (p, d) in point.iter_mut().zip(&dx) {
            *p -= d;
        }
        if u <= tol * (1.0 + linalg::norm(&point)) {
            return Some((point, true));
        }
        prev = u;
    }
    Some((point, false))
}

/// Track one path of `h` from `start` at `t = 1` to `settings.t_end`.
///
/// Failures are reported through [`PathStatus`]; the only error is a start
/// point that does not lie on the start fiber.
pub fn track_path<H: PathHomotopy + ?Sized>(
    h: &H,
    start: &[Complex64],
    settings: &TrackerSettings,
) -> Result<PathResult> {
    settings.validate()?;
    if start.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: start.len(),
        });
    }
    let r0 = linalg::norm(&h.value(start, 1.0));
    if !(r0 < settings.corrector_tol) {
        return Err(Error::Precondition(format!(
            "start point residual {r0:.3e} exceeds corrector tolerance {:.1e}",
            settings.corrector_tol
        )));
    }

    let t_end = settings.t_end;
    let mut x = start.to_vec();
    let mut t = 1.0;
    let mut step = settings.initial_step;
    let mut streak = 0;
    let mut steps = 0;

    while t > t_end {
        if steps >= settings.max_steps {
            return Ok(finish_stalled(h, x, t, steps, settings));
        }
        let dt = step.min(t - t_end);
        let t_next = if t - dt <= t_end { t_end } else { t - dt };
        steps += 1;

        let e = h.evaluate(&x, t);
        let neg_dt: Vec<Complex64> = e.d_t.iter().map(|z| -z).collect();
        let accepted = linalg::solve(&e.jac_x, &neg_dt).and_then(|dxdt| {
            let delta = t_next - t;
            let predicted: Vec<Complex64> = x.iter().zip(&dxdt).map(|(a, v)| a + v * delta).collect();
            match correct(h, &predicted, t_next, settings.corrector_tol, settings.newton_max_iters) {
                Some((p, true)) => Some(p),
                _ => None,
            }
        });

        match accepted {
            Some(p) => {
                x = p;
                t = t_next;
                streak += 1;
                if streak >= SUCCESSES_TO_GROW {
                    step = (step * 2.0).min(settings.initial_step);
                    streak = 0;
                }
                if h.affine_norm(&x) > DIVERGENCE_RADIUS {
                    return Ok(PathResult {
                        status: PathStatus::Diverged,
                        endpoint: x,
                        t_reached: t,
                        steps_taken: steps,
                        endpoint_condition: f64::INFINITY,
                        residual: f64::NAN,
                    });
                }
            }
            None => {
                streak = 0;
                step /= 2.0;
                if step < settings.min_step {
                    return Ok(finish_stalled(h, x, t, steps, settings));
                }
            }
        }
    }
    Ok(finish_at_end(h, x, steps, settings))
}

fn classify_endpoint<H: PathHomotopy + ?Sized>(
    h: &H,
    x: Vec<Complex64>,
    steps: usize,
    settings: &TrackerSettings,
) -> PathResult {
    let t_end = settings.t_end;
    let e = h.evaluate(&x, t_end);
    let residual = linalg::norm(&e.value);
    let cond = linalg::condition(&e.jac_x);
    let status = if h.affine_norm(&x) > DIVERGENCE_RADIUS {
        PathStatus::Diverged
    } else if residual < settings.corrector_tol {
        if cond > SINGULAR_CONDITION {
            PathStatus::SingularEndpoint
        } else {
            PathStatus::Success
        }
    } else {
        PathStatus::StepLimit
    };
    PathResult {
        status,
        endpoint: x,
        t_reached: t_end,
        steps_taken: steps,
        endpoint_condition: cond,
        residual,
    }
}

/// Newton at `t` until the updates stop shrinking; keeps the last point
/// reached before any increase.
fn polish<H: PathHomotopy + ?Sized>(h: &H, x: &[Complex64], t: f64, max_iters: usize) -> Vec<Complex64> {
    let mut point = x.to_vec();
    let mut prev = f64::INFINITY;
    for _ in 0..max_iters {
        let e = h.evaluate(&point, t);
        let Some(dx) = linalg::solve(&e.jac_x, &e.value) else { break };
        let u = linalg::norm(&dx);
        if !(u < prev) {
            break;
        }
        for (p, d) in point.iter_mut().zip(&dx) {
            *p -= d;
        }
        if u <= f64::EPSILON * (1.0 + linalg::norm(&point)) {
            break;
        }
        prev = u;
    }
    point
}

fn finish_at_end<H: PathHomotopy + ?Sized>(
    h: &H,
    x: Vec<Complex64>,
    steps: usize,
    settings: &TrackerSettings,
) -> PathResult {
    let x = polish(h, &x, settings.t_end, FINAL_ITERS);
    classify_endpoint(h, x, steps, settings)
}

/// The tracker stalled at `t`. Near the end of the path, Newton at `t_end`
/// with a generous budget separates paths heading to infinity (the affine
/// norm blows up) from singular finite endpoints (slow convergence, large
/// condition number, small residual).
fn finish_stalled<H: PathHomotopy + ?Sized>(
    h: &H,
    x: Vec<Complex64>,
    t: f64,
    steps: usize,
    settings: &TrackerSettings,
) -> PathResult {
    if t - settings.t_end < ENDGAME_ZONE {
        let mut point = x.clone();
        for _ in 0..ENDGAME_ITERS {
            let e = h.evaluate(&point, settings.t_end);
            let Some(dx) = linalg::solve(&e.jac_x, &e.value) else { break };
            for (p, d) in point.iter_mut().zip(&dx) {
                *p -= d;
            }
            if linalg::norm(&dx) <= f64::EPSILON * (1.0 + linalg::norm(&point))
                || h.affine_norm(&point) > DIVERGENCE_RADIUS
            {
                break;
            }
        }
        if point.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            let end = classify_endpoint(h, point, steps, settings);
            if end.status != PathStatus::StepLimit {
                return end;
            }
        }
    }
    let e = h.evaluate(&x, t);
    let status = if h.affine_norm(&x) > DIVERGENCE_RADIUS {
        PathStatus::Diverged
    } else {
        PathStatus::StepLimit
    };
    PathResult {
        status,
        residual: linalg::norm(&e.value),
        endpoint_condition: linalg::condition(&e.jac_x),
        endpoint: x,
        t_reached: t,
        steps_taken: steps,
    }
}
