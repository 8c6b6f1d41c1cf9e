use witnesskit::linalg;
use witnesskit::polysys::{PolySystem, Polynomial};
use witnesskit::rng::{gaussian, substream};
use witnesskit::solver::*;
use witnesskit::Complex64;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn univariate(coeffs: &[(f64, u32)]) -> PolySystem {
    let p = Polynomial::new(1, coeffs.iter().map(|&(a, e)| (c(a), vec![e]))).unwrap();
    PolySystem::new(1, vec![p]).unwrap()
}

/// All monomials in `n` variables of total degree ≤ `d`.
fn exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for k in 0..=d {
        for mut rest in exponents(n - 1, d - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

fn dense_system(seed: u64, degrees: &[u32]) -> PolySystem {
    let n = degrees.len();
    let mut rng = substream(seed, "dense");
    let polys = degrees
        .iter()
        .map(|&d| Polynomial::new(n, exponents(n, d).into_iter().map(|e| (gaussian(&mut rng), e))).unwrap())
        .collect();
    PolySystem::new(n, polys).unwrap()
}

#[test]
fn affine_homotopy_tracks_to_factor_roots() {
    let target = univariate(&[(1.0, 2), (-3.0, 1), (2.0, 0)]);
    let (start, pts) = bezout_start(&[2]).unwrap();
    let h = Homotopy::new(target, start, Complex64::from_polar(1.0, 1.1)).unwrap();
    let mut ends: Vec<Complex64> = pts
        .iter()
        .map(|p| {
            let r = track_path(&h, p, &TrackerSettings::default()).unwrap();
            assert_eq!(r.status, PathStatus::Success);
            assert_eq!(r.t_reached, 0.0);
            r.endpoint[0]
        })
        .collect();
    ends.sort_by(|a, b| a.re.total_cmp(&b.re));
    assert!((ends[0] - c(1.0)).norm() < 1e-8);
    assert!((ends[1] - c(2.0)).norm() < 1e-8);
}

#[test]
fn start_off_fiber_is_a_precondition_error() {
    let target = univariate(&[(1.0, 2), (-3.0, 1), (2.0, 0)]);
    let (start, _) = bezout_start(&[2]).unwrap();
    let h = Homotopy::new(target, start, Complex64::from_polar(1.0, 1.1)).unwrap();
    let err = track_path(&h, &[c(0.5)], &TrackerSettings::default()).unwrap_err();
    assert_eq!(err.kind(), "Precondition");
}

#[test]
fn generic_quadric_pair_has_four_success_paths() {
    let target = dense_system(21, &[2, 2]);
    let (start, pts) = bezout_start(&[2, 2]).unwrap();
    let h = Homotopy::new(target.clone(), start, Complex64::from_polar(1.0, 2.3)).unwrap();
    let settings = TrackerSettings::default();
    let mut ends = Vec::new();
    for p in &pts {
        let r = track_path(&h, p, &settings).unwrap();
        assert_eq!(r.status, PathStatus::Success);
        assert!(linalg::norm(&target.evaluate(&r.endpoint).unwrap()) < 1e-8);
        assert!(linalg::norm(&h.value(&r.endpoint, 0.0)) < settings.corrector_tol);
        ends.push(r.endpoint);
    }
    for i in 0..4 {
        for j in 0..i {
            assert!(linalg::distance(&ends[i], &ends[j]) > 1e-6);
        }
    }
}

#[test]
fn solve_factorable_quadratic() {
    let target = univariate(&[(1.0, 2), (-3.0, 1), (2.0, 0)]);
    let rep = solve_total_degree(&target, 7).unwrap();
    assert_eq!(rep.solutions.len(), 2);
    assert!((rep.solutions[0].point[0] - c(1.0)).norm() < 1e-12);
    assert!((rep.solutions[1].point[0] - c(2.0)).norm() < 1e-12);
    assert!(rep.solutions.iter().all(|s| s.certificate.certified));
}

#[test]
fn solve_separable_system() {
    let x = Polynomial::new(2, vec![(c(1.0), vec![2, 0]), (c(-1.0), vec![0, 0])]).unwrap();
    let y = Polynomial::new(2, vec![(c(1.0), vec![0, 2]), (c(-1.0), vec![0, 0])]).unwrap();
    let s = PolySystem::new(2, vec![x, y]).unwrap();
    let rep = solve_total_degree(&s, 3).unwrap();
    let want = [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)];
    assert_eq!(rep.solutions.len(), 4);
    for (sol, (a, b)) in rep.solutions.iter().zip(want) {
        assert!((sol.point[0] - c(a)).norm() < 1e-12);
        assert!((sol.point[1] - c(b)).norm() < 1e-12);
    }
}

#[test]
fn paths_at_infinity_are_diverged() {
    // x*y - 1 = 0, x - 2 = 0: Bezout bound 2, one finite root (2, 1/2)
    let p = Polynomial::new(2, vec![(c(1.0), vec![1, 1]), (c(-1.0), vec![0, 0])]).unwrap();
    let q = Polynomial::new(2, vec![(c(1.0), vec![1, 0]), (c(-2.0), vec![0, 0])]).unwrap();
    let s = PolySystem::new(2, vec![p, q]).unwrap();
    let rep = solve_total_degree(&s, 1).unwrap();
    assert_eq!(rep.solutions.len(), 1);
    assert!((rep.solutions[0].point[1] - c(0.5)).norm() < 1e-12);
    assert_eq!(rep.summary.paths, 2);
    assert_eq!(rep.summary.diverged, 1);
}

#[test]
fn double_root_is_singular_endpoint() {
    // (x - 1)^2
    let s = univariate(&[(1.0, 2), (-2.0, 1), (1.0, 0)]);
    let rep = solve_total_degree(&s, 5).unwrap();
    let s_ = rep.summary;
    assert_eq!(s_.success + s_.diverged + s_.singular + s_.step_limit, 2);
    assert!(s_.singular + s_.step_limit >= 1, "{s_:?}");
    for sol in &rep.solutions {
        assert!((sol.point[0] - c(1.0)).norm() < 1e-6);
        assert!(!sol.certificate.certified, "{sol:?}");
    }
}

#[test]
fn dense_systems_meet_the_bezout_count() {
    for (seed, degs) in [(1u64, vec![3u32]), (2, vec![2, 3]), (3, vec![3, 3]), (4, vec![2, 2, 2]), (5, vec![2, 3, 2])] {
        let s = dense_system(seed, &degs);
        let rep = solve_total_degree(&s, seed).unwrap();
        let bezout: u32 = degs.iter().product();
        assert_eq!(rep.solutions.len() as u32, bezout, "degrees {degs:?}: {:?}", rep.summary);
        for sol in &rep.solutions {
            assert!(sol.certificate.certified);
            assert!(sol.certificate.alpha < alpha_threshold());
        }
        let sm = rep.summary;
        assert_eq!(sm.success + sm.diverged + sm.singular + sm.step_limit, sm.paths);
        for r in &rep.paths {
            if r.status == PathStatus::Success {
                assert!(r.residual < TrackerSettings::default().corrector_tol);
            }
        }
    }
}

#[test]
fn solving_is_reproducible() {
    let s = dense_system(9, &[2, 3]);
    let a = solve_total_degree(&s, 42).unwrap();
    let b = solve_total_degree(&s, 42).unwrap();
    assert_eq!(a.summary, b.summary);
    let sa: Vec<_> = a.paths.iter().map(|p| p.status).collect();
    let sb: Vec<_> = b.paths.iter().map(|p| p.status).collect();
    assert_eq!(sa, sb);
    for (x, y) in a.solutions.iter().zip(&b.solutions) {
        assert!(linalg::distance(&x.point, &y.point) < 1e-12);
    }
}


mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn generic_dense_systems(seed in any::<u64>(), shape in 0usize..4) {
            let degs = [vec![3u32], vec![2, 2], vec![2, 3], vec![2, 2, 2]][shape].clone();
            let s = dense_system(seed, &degs);
            let rep = solve_total_degree(&s, seed).unwrap();
            let sm = rep.summary;
            prop_assert_eq!(sm.success + sm.diverged + sm.singular + sm.step_limit, sm.paths);
            prop_assert_eq!(sm.paths as u32, degs.iter().product::<u32>());
            prop_assert_eq!(rep.solutions.len() as u32, degs.iter().product::<u32>());
            for r in &rep.paths {
                if r.status == PathStatus::Success {
                    prop_assert!(r.residual < TrackerSettings::default().corrector_tol);
                }
            }
            for sol in rep.solutions.iter().filter(|s| s.certificate.certified) {
                let jac = s.jacobian(&sol.point).unwrap();
                let floor = 8.0 * f64::EPSILON * linalg::condition(&jac) * (1.0 + linalg::norm(&sol.point));
                let mut x = sol.point.clone();
                let mut prev = f64::INFINITY;
                for _ in 0..3 {
                    let dx = newton_update(&s, &x).unwrap();
                    let u = linalg::norm(&dx);
                    prop_assert!(u <= prev.max(floor));
                    for (a, b) in x.iter_mut().zip(&dx) {
                        *a -= b;
                    }
                    prev = u;
                }
            }
            let again = solve_total_degree(&s, seed).unwrap();
            prop_assert_eq!(
                rep.paths.iter().map(|p| p.status).collect::<Vec<_>>(),
                again.paths.iter().map(|p| p.status).collect::<Vec<_>>()
            );
            for (a, b) in rep.paths.iter().zip(&again.paths) {
                prop_assert!(linalg::distance(&a.endpoint, &b.endpoint) < 1e-12);
            }
        }
    }
}
