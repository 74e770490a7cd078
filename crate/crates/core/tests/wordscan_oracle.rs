use std::collections::HashSet;

use rand::Rng;
use umetric::{rng, scan_all_words, word_triangle_count, EmbeddedPointSet, TriangleConfig};

/// Points on a coarse lattice, so exact isosceles triangles and repeated
/// points both occur.
fn lattice_points(p: usize, dim: usize, seed: u64) -> EmbeddedPointSet {
    let mut r = rng::master(seed);
    let rows: Vec<Vec<f64>> = (0..p).map(|_| (0..dim).map(|_| r.random_range(0..3) as f64).collect()).collect();
    EmbeddedPointSet::from_rows(&rows).unwrap()
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Triple loop over ordered anchors, straight from the definition.
fn naive_counts(pts: &EmbeddedPointSet, cfg: &TriangleConfig) -> (Vec<u64>, Vec<u64>, HashSet<[usize; 3]>) {
    let p = pts.len();
    let mut ultra = vec![0; p];
    let mut nonzero = vec![0; p];
    let mut triangles = HashSet::new();
    for a in 0..p {
        for x in 0..p {
            for y in (x + 1)..p {
                if x == a || y == a {
                    continue;
                }
                let (dax, day, dxy) = (
                    euclid(pts.point(a), pts.point(x)),
                    euclid(pts.point(a), pts.point(y)),
                    euclid(pts.point(x), pts.point(y)),
                );
                if dax <= cfg.epsilon || day <= cfg.epsilon || dxy <= cfg.epsilon {
                    continue;
                }
                nonzero[a] += 1;
                if umetric::synth::naive_triangle_oracle(dax, dxy, day, cfg).is_ultrametric() {
                    ultra[a] += 1;
                    let mut t = [a, x, y];
                    t.sort();
                    triangles.insert(t);
                }
            }
        }
    }
    (ultra, nonzero, triangles)
}

#[test]
fn full_scan_matches_triple_loop() {
    let cfg = TriangleConfig::default();
    for (p, dim, seed) in [(3, 2, 1), (12, 3, 2), (35, 4, 3), (60, 5, 4), (60, 30, 5)] {
        let pts = lattice_points(p, dim, seed);
        let dist = scan_all_words(&pts, &cfg).unwrap();
        let (ultra, nonzero, triangles) = naive_counts(&pts, &cfg);
        let total: u64 = dist.reports.iter().map(|r| r.ultrametric_count).sum();
        assert_eq!(total, 3 * triangles.len() as u64);
        for (w, r) in dist.reports.iter().enumerate() {
            assert_eq!(r.ultrametric_count, ultra[w]);
            assert_eq!(r.triangles_nonzero, nonzero[w]);
            assert_eq!(r.triangles_total, umetric::choose2(p - 1));
        }
        assert_eq!(dist.min, *ultra.iter().min().unwrap());
        assert_eq!(dist.max, *ultra.iter().max().unwrap());
    }
}

#[test]
fn anchored_count_matches_full_scan_when_candidates_are_everything() {
    let cfg = TriangleConfig::default();
    let pts = lattice_points(25, 4, 9);
    let dist = scan_all_words(&pts, &cfg).unwrap();
    for w in [0usize, 7, 24] {
        let r = word_triangle_count(&pts, &pts.labels[w], &pts.labels, &cfg).unwrap();
        assert_eq!(&r, &dist.reports[w]);
    }
}

#[test]
fn restricted_scan_counts_only_the_subset() {
    let cfg = TriangleConfig::default();
    let pts = lattice_points(50, 6, 12);
    let subset: Vec<String> = pts.labels.iter().step_by(5).cloned().collect();
    assert_eq!(subset.len(), 10);
    let r = word_triangle_count(&pts, &subset[3], &subset, &cfg).unwrap();
    assert_eq!(r.triangles_total, 36);
    assert!(r.ultrametric_count <= r.triangles_nonzero && r.triangles_nonzero <= r.triangles_total);
}

#[test]
fn percentile_is_monotone_in_count() {
    let pts = lattice_points(40, 3, 21);
    let dist = scan_all_words(&pts, &TriangleConfig::default()).unwrap();
    let mut by_count: Vec<(u64, f64)> =
        dist.reports.iter().map(|r| (r.ultrametric_count, umetric::percentile(&dist, &r.word).unwrap())).collect();
    by_count.sort_by_key(|a| a.0);
    assert!(by_count.windows(2).all(|w| w[0].1 <= w[1].1));
    assert!(by_count.iter().all(|&(_, pct)| (0.0..=100.0).contains(&pct)));
}
