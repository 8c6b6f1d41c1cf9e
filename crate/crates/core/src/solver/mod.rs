//! Newton's method with alpha-theory certificates, and predictor-corrector
//! tracking of total-degree homotopies.

mod alpha;
mod homotopy;
mod newton;
mod total_degree;
mod tracker;

pub use alpha::{alpha_number, alpha_threshold, Certificate};
pub use homotopy::{Homotopy, HomotopyEval, PathHomotopy, ProjectiveHomotopy};
pub use newton::{newton_refine, newton_step, newton_update, NewtonOutcome};
pub use total_degree::{
    bezout_start, dedup_points, lex_cmp, normalized_distance, solve_total_degree, solve_total_degree_with,
    track_total_degree, PathSummary, SolveOptions, SolveReport, Solution,
};
pub use tracker::{track_path, PathResult, PathStatus, TrackerSettings, DIVERGENCE_RADIUS, SINGULAR_CONDITION};
