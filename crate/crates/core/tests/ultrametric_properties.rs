use proptest::prelude::*;
use rand::Rng;
use umetric::synth::{naive_triangle_oracle, random_ultrametric_matrix, ultrametric_violation, DendrogramSpec};
use umetric::{
    alpha_exhaustive, alpha_sampled, classify_triangle, rammal_index, rng, subdominant_ultrametric, DistanceMatrix,
    DistanceSource, EmbeddedPointSet, TriangleConfig,
};

fn random_points(p: usize, dim: usize, seed: u64) -> EmbeddedPointSet {
    let mut r = rng::master(seed);
    let rows: Vec<Vec<f64>> = (0..p).map(|_| (0..dim).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
    EmbeddedPointSet::from_rows(&rows).unwrap()
}

/// Minimax path distances by Floyd–Warshall, independent of the MST route.
fn minimax_oracle(src: &DistanceSource) -> Vec<f64> {
    let p = src.len();
    let mut d: Vec<f64> = (0..p * p).map(|x| src.distance(x / p, x % p)).collect();
    for k in 0..p {
        for i in 0..p {
            for j in 0..p {
                let via = d[i * p + k].max(d[k * p + j]);
                if via < d[i * p + j] {
                    d[i * p + j] = via;
                }
            }
        }
    }
    d
}

#[test]
fn dendrograms_are_fixed_points() {
    for (seed, leaves) in [(1, 10), (2, 37), (3, 80), (4, 150), (5, 200)] {
        let m = random_ultrametric_matrix(DendrogramSpec { leaf_count: leaves, seed }).unwrap();
        let src = DistanceSource::from(m.clone());
        assert_eq!(alpha_exhaustive(&src, &TriangleConfig::default()).unwrap().mean, 1.0);
        assert!(rammal_index(&src).unwrap() <= 1e-12);
        assert_eq!(subdominant_ultrametric(&src).unwrap(), m);
    }
}

#[test]
fn subdominant_is_the_single_link_ultrametric() {
    for (p, seed) in [(5, 1), (40, 2), (120, 3)] {
        let src = DistanceSource::from(random_points(p, 4, seed));
        let sub = subdominant_ultrametric(&src).unwrap();
        assert!(ultrametric_violation(&sub) <= 0.0);
        let oracle = minimax_oracle(&src);
        for i in 0..p {
            for j in 0..p {
                assert!(sub.get(i, j) <= src.distance(i, j));
                assert_eq!(sub.get(i, j), oracle[i * p + j]);
            }
        }
        let index = rammal_index(&src).unwrap();
        assert!((0.0..=1.0).contains(&index));
    }
}

#[test]
fn rammal_hand_value() {
    let src = DistanceSource::from(DistanceMatrix::from_upper(3, &[3.0, 5.0, 4.0]).unwrap());
    assert!((rammal_index(&src).unwrap() - 1.0 / 12.0).abs() <= 1e-12);
}

#[test]
fn sampled_alpha_agrees_with_enumeration() {
    let src = DistanceSource::from(random_points(100, 10, 77));
    let exact = alpha_exhaustive(&src, &TriangleConfig::default()).unwrap();
    let mut hits = 0;
    for seed in 0..20 {
        let est = alpha_sampled(&src, &TriangleConfig::with_seed(seed)).unwrap();
        if (est.mean - exact.mean).abs() <= 3.0 * est.sdev {
            hits += 1;
        }
        assert!((0.0..=1.0).contains(&est.mean));
        assert_eq!(est.evaluated_count + est.degenerate_count, 40_000);
    }
    assert!(hits >= 19, "{hits}/20 seeds within 3 sdev");
}

#[test]
fn sampling_is_independent_of_thread_count() {
    let src = DistanceSource::from(random_points(60, 5, 4));
    let cfg = TriangleConfig::with_seed(1234);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| alpha_sampled(&src, &cfg).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(8));
    assert_eq!(one, run(3));
    assert_ne!(one, alpha_sampled(&src, &TriangleConfig::with_seed(1235)).unwrap());
}

#[test]
fn classifier_matches_oracle_on_random_triples() {
    let cfg = TriangleConfig::default();
    let mut r = rng::master(2024);
    let mut by_status = std::collections::HashMap::new();
    for n in 0..10_000 {
        let (a, b, c) = match n % 4 {
            // arbitrary triples, including triangle-inequality violations
            0 => (r.random_range(0.0..2.0), r.random_range(0.0..2.0), r.random_range(0.0..2.0)),
            // near-isosceles with a small base: straddles the angle tolerance
            1 => {
                let long = r.random_range(0.5..5.0);
                (r.random_range(0.01..1.0) * long, long, long * (1.0 + r.random_range(-0.01..0.01)))
            }
            // nearly equilateral
            2 => {
                let s = r.random_range(0.1..3.0);
                (s, s * (1.0 + r.random_range(-0.03..0.03)), s * (1.0 + r.random_range(-0.03..0.03)))
            }
            // tiny and collinear cases
            _ => {
                let x: f64 = r.random_range(0.0..1.0);
                let y: f64 = r.random_range(0.0..1.0);
                if r.random_bool(0.5) {
                    (x, y, x + y)
                } else {
                    (x * 1e-9, y, y)
                }
            }
        };
        let fast = classify_triangle(a, b, c, &cfg);
        let slow = naive_triangle_oracle(a, b, c, &cfg);
        assert_eq!(fast.status, slow.status, "({a}, {b}, {c})");
        assert_eq!(fast.metric_violation, slow.metric_violation, "({a}, {b}, {c})");
        *by_status.entry(fast.status).or_insert(0) += 1;
    }
    assert_eq!(by_status.len(), 3, "all three outcomes exercised: {by_status:?}");
}

#[test]
fn collinear_points_are_all_degenerate() {
    // Integer positions keep every cosine exact, so each triangle hits c = 1.
    let xs = [0.0f64, 1.0, 3.0, 7.0, 15.0];
    let src = DistanceSource::from(DistanceMatrix::from_fn(5, |i, j| (xs[i] - xs[j]).abs()).unwrap());
    assert!(matches!(
        alpha_exhaustive(&src, &TriangleConfig::default()),
        Err(umetric::Error::DegeneratePointSet { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_dendrograms_have_alpha_one(leaves in 10usize..=60, seed in any::<u64>()) {
        let m = random_ultrametric_matrix(DendrogramSpec { leaf_count: leaves, seed }).unwrap();
        let src = DistanceSource::from(m);
        prop_assert_eq!(alpha_exhaustive(&src, &TriangleConfig::default()).unwrap().mean, 1.0);
        prop_assert_eq!(rammal_index(&src).unwrap(), 0.0);
    }

    #[test]
    fn alpha_and_index_stay_in_range(p in 3usize..25, dim in 2usize..6, seed in any::<u64>()) {
        let src = DistanceSource::from(random_points(p, dim, seed));
        let est = alpha_exhaustive(&src, &TriangleConfig::default()).unwrap();
        prop_assert!((0.0..=1.0).contains(&est.mean));
        prop_assert_eq!(est.evaluated_count + est.degenerate_count, umetric::choose3(p));
        prop_assert!(rammal_index(&src).unwrap() >= 0.0);
    }
}
