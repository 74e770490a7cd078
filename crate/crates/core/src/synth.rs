//! Seeded synthetic data and independent oracles for validation.

use std::collections::HashSet;

use rand::Rng;

use crate::ca::{EmbeddedPointSet, PointKind};
use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::rng;
use crate::triangle::{TriangleConfig, TriangleStatus, TriangleVerdict, COSINE_SLACK};

/// A random binary dendrogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DendrogramSpec {
    pub leaf_count: usize,
    pub seed: u64,
}

/// Cophenetic distances of a random binary dendrogram.
///
/// Merge heights are sorted uniform draws on `(0, 1]`, strictly
/// increasing; each merge joins two uniformly chosen active clusters.
pub fn random_ultrametric_matrix(spec: DendrogramSpec) -> Result<DistanceMatrix> {
    let n = spec.leaf_count;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("a dendrogram needs at least 2 leaves, got {n}")));
    }
    let mut rng = rng::master(spec.seed);
    let heights = loop {
        let mut h: Vec<f64> = (0..n - 1).map(|_| 1.0 - rng.random::<f64>()).collect();
        h.sort_by(f64::total_cmp);
        if h.windows(2).all(|w| w[0] < w[1]) {
            break h;
        }
    };

    let mut values = vec![0.0; n * n];
    let mut active: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for &height in &heights {
        let a = rng::index(&mut rng, active.len());
        let mut b = rng::index(&mut rng, active.len() - 1);
        if b >= a {
            b += 1;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let merged = active.swap_remove(hi);
        for &x in &active[lo] {
            for &y in &merged {
                values[x * n + y] = height;
                values[y * n + x] = height;
            }
        }
        active[lo].extend(merged);
    }
    DistanceMatrix::from_full(n, values)
}

/// Largest violation of `d(x,z) <= max(d(x,y), d(y,z))` over all ordered
/// triples; `<= 0` means the matrix is an ultrametric.
pub fn ultrametric_violation(m: &DistanceMatrix) -> f64 {
    let p = m.len();
    let mut worst = f64::NEG_INFINITY;
    for x in 0..p {
        for y in 0..p {
            for z in 0..p {
                let excess = m.get(x, z) - m.get(x, y).max(m.get(y, z));
                worst = worst.max(excess);
            }
        }
    }
    worst
}

const DISTINCT_ROW_RETRIES: usize = 10_000;

/// `n` distinct random 0/1 vectors of length `dim`, each entry 1 with
/// probability `density`.
pub fn sparse_hypercube_points(n: usize, dim: usize, density: f64, seed: u64) -> Result<Vec<Vec<u8>>> {
    if n < 3 || dim < 1 {
        return Err(Error::InvalidParameter(format!("need n >= 3 and dim >= 1, got n={n}, dim={dim}")));
    }
    if !(density > 0.0 && density < 1.0) {
        return Err(Error::InvalidParameter(format!("density must lie in (0, 1), got {density}")));
    }
    if dim < 64 && (1u64 << dim) < n as u64 {
        return Err(Error::InvalidParameter(format!("only {} distinct vertices in dimension {dim}", 1u64 << dim)));
    }
    let mut rng = rng::master(seed);
    let mut seen: HashSet<Vec<u8>> = HashSet::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    while rows.len() < n {
        let mut attempts = 0;
        let row = loop {
            let row: Vec<u8> = (0..dim).map(|_| u8::from(rng.random_bool(density))).collect();
            if !seen.contains(&row) {
                break row;
            }
            attempts += 1;
            if attempts >= DISTINCT_ROW_RETRIES {
                return Err(Error::InvalidParameter(format!(
                    "could not draw {n} distinct rows at density {density} in dimension {dim}"
                )));
            }
        };
        seen.insert(row.clone());
        rows.push(row);
    }
    Ok(rows)
}

/// 0/1 rows as a point cloud.
pub fn hypercube_point_set(rows: &[Vec<u8>]) -> Result<EmbeddedPointSet> {
    let dim = rows.first().map_or(0, Vec::len);
    let coords: Vec<f64> = rows.iter().flat_map(|r| r.iter().map(|&b| f64::from(b))).collect();
    let labels = (0..rows.len()).map(|i| i.to_string()).collect();
    EmbeddedPointSet::new(coords, dim, labels, PointKind::Rows)
}

/// Straight re-derivation of the triangle test, kept apart from
/// [`crate::triangle::classify_triangle`] so the two can check each other.
///
/// Works from the vertex angles: the angle facing side `x` has cosine
/// `(y² + z² - x²) / 2yz`. The vertex with the largest cosine is the apex;
/// the other two are the base.
pub fn naive_triangle_oracle(d1: f64, d2: f64, d3: f64, cfg: &TriangleConfig) -> TriangleVerdict {
    let degenerate = TriangleVerdict {
        status: TriangleStatus::Degenerate,
        cosines: None,
        base_angle_gap_rad: None,
        metric_violation: false,
    };
    let sides = [d1, d2, d3];
    for s in sides {
        if s.is_nan() || s <= cfg.epsilon {
            return degenerate;
        }
    }

    let facing = |x: f64, y: f64, z: f64| (y * y + z * z - x * x) / (2.0 * y * z);
    let raw = [facing(d3, d1, d2), facing(d1, d2, d3), facing(d2, d3, d1)];
    let violation = raw.iter().any(|c| c.abs() > 1.0 + COSINE_SLACK);
    let cos: Vec<f64> = raw.iter().map(|&c| c.clamp(-1.0, 1.0)).collect();

    let mut apex = 0;
    if cos[1] > cos[apex] {
        apex = 1;
    }
    if cos[2] > cos[apex] {
        apex = 2;
    }
    let base: Vec<f64> = (0..3).filter(|&v| v != apex).map(|v| cos[v]).collect();
    let (lo, hi) = if base[0] <= base[1] { (base[0], base[1]) } else { (base[1], base[0]) };
    let sorted = [lo, hi, cos[apex]];

    let mut verdict = TriangleVerdict {
        status: TriangleStatus::NonUltrametric,
        cosines: Some(sorted),
        base_angle_gap_rad: None,
        metric_violation: violation,
    };
    if violation {
        return verdict;
    }
    let apex_cos = cos[apex];
    if apex_cos >= 1.0 {
        verdict.status = TriangleStatus::Degenerate;
        return verdict;
    }
    if apex_cos < 0.5 {
        return verdict;
    }
    let gap = (base[0].acos() - base[1].acos()).abs();
    verdict.base_angle_gap_rad = Some(gap);
    if gap < cfg.angle_tolerance_rad {
        verdict.status = TriangleStatus::Ultrametric;
    }
    verdict
}
