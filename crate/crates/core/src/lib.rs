//! Numerical algebraic geometry with witness sets: homotopy continuation,
//! classical witness sets, cycle classes from intersection matrices, and
//! Schubert witness sets for lines in P⁴.

// `!(x < tol)` guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod cycle_algebra;
pub mod error;
pub mod grassmann;
pub mod json;
pub mod linalg;
pub mod par;
pub mod polysys;
pub mod rng;
pub mod solver;
pub mod witness_classical;

pub use error::{Error, Result};
pub use num_complex::Complex64;
