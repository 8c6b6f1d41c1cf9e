//! Seeded randomness. Every invocation owns one 64-bit seed; subsystems draw
//! from independent ChaCha streams selected by a fixed label, so adding draws
//! in one subsystem never perturbs another.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SeededRng = ChaCha8Rng;

fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Independent stream for `label` under `seed`.
pub fn substream(seed: u64, label: &str) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(label));
    rng
}

/// Derive a child seed; used when an operation hands a seed to a nested one.
pub fn child_seed(rng: &mut SeededRng) -> u64 {
    rng.random()
}

/// Standard complex Gaussian (independent real and imaginary N(0, 1/2)).
pub fn gaussian(rng: &mut SeededRng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vec(rng: &mut SeededRng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

pub fn gaussian_matrix(rng: &mut SeededRng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    // row-major draw order so the stream does not depend on storage layout
    let mut m = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

/// Unit complex number for the gamma trick, kept away from the real axis.
pub fn unit_gamma(rng: &mut SeededRng) -> Complex64 {
    loop {
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        if theta.sin().abs() > 0.1 {
            return Complex64::from_polar(1.0, theta);
        }
    }
}

/// Haar-ish random unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary(rng: &mut SeededRng, n: usize) -> DMatrix<Complex64> {
    let g = gaussian_matrix(rng, n, n);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}
