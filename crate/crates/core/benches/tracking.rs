use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use witnesskit::par;
use witnesskit::polysys::{PolySystem, Polynomial};
use witnesskit::rng;
use witnesskit::solver::{bezout_start, track_path, Homotopy, ProjectiveHomotopy, TrackerSettings};

fn exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    (0..=d)
        .flat_map(|k| {
            exponents(n - 1, d - k).into_iter().map(move |mut e| {
                e.insert(0, k);
                e
            })
        })
        .collect()
}

/// Dense system with Gaussian coefficients: every path of the Bézout
/// homotopy ends at a finite regular root.
fn dense(degrees: &[u32], seed: u64) -> PolySystem {
    let n = degrees.len();
    let mut r = rng::substream(seed, "bench");
    let polys = degrees
        .iter()
        .map(|&d| Polynomial::new(n, exponents(n, d).into_iter().map(|e| (rng::gaussian(&mut r), e))).unwrap())
        .collect();
    PolySystem::new(n, polys).unwrap()
}

fn tracking(c: &mut Criterion) {
    let mut group = c.benchmark_group("track_all_paths");
    group.sample_size(10);
    for degrees in [vec![2u32; 6], vec![3, 3, 3]] {
        let target = dense(&degrees, 1);
        let (start, starts) = bezout_start(&degrees).unwrap();
        let mut r = rng::substream(1, "bench-homotopy");
        let affine = Homotopy::new(target.clone(), start, rng::unit_gamma(&mut r)).unwrap();
        let h = ProjectiveHomotopy::new(&affine, rng::gaussian_vec(&mut r, degrees.len() + 1)).unwrap();
        let lifted: Vec<_> = starts.iter().map(|s| h.lift(s)).collect();
        let settings = TrackerSettings::default();
        let label = format!("{}paths", lifted.len());
        group.bench_with_input(BenchmarkId::new("sequential", &label), &lifted, |b, pts| {
            b.iter(|| par::map_sequential(pts, |s| track_path(&h, s, &settings).unwrap()))
        });
        // with the `parallel` feature disabled this is the sequential path too
        group.bench_with_input(BenchmarkId::new("parallel", &label), &lifted, |b, pts| {
            b.iter(|| par::map(pts, |s| track_path(&h, s, &settings).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, tracking);
criterion_main!(benches);
