//! Point-cloud ultrametricity measures: the α coefficient (sampled and
//! exhaustive), the subdominant ultrametric with its index, and triangle
//! shape ratios.

use crate::distance::{DistanceMatrix, DistanceSource};
use crate::error::{Error, Result};
use crate::rng;
use crate::triangle::{classify_triangle, TriangleConfig, TriangleStatus, TriangleVerdict};

/// Share of ultrametric triangles among the non-degenerate ones.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaEstimate {
    pub mean: f64,
    /// Sample standard deviation of the per-repetition values (0 for a
    /// single repetition).
    pub sdev: f64,
    pub per_rep_alphas: Vec<f64>,
    pub ultrametric_count: u64,
    pub evaluated_count: u64,
    pub degenerate_count: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    ultrametric: u64,
    evaluated: u64,
    degenerate: u64,
}

impl Tally {
    fn add(&mut self, status: TriangleStatus) {
        match status {
            TriangleStatus::Degenerate => self.degenerate += 1,
            TriangleStatus::Ultrametric => {
                self.ultrametric += 1;
                self.evaluated += 1;
            }
            TriangleStatus::NonUltrametric => self.evaluated += 1,
        }
    }

    fn merge(self, other: Tally) -> Tally {
        Tally {
            ultrametric: self.ultrametric + other.ultrametric,
            evaluated: self.evaluated + other.evaluated,
            degenerate: self.degenerate + other.degenerate,
        }
    }
}

fn check_points(src: &DistanceSource, needed: usize) -> Result<usize> {
    let p = src.len();
    if p < needed {
        return Err(Error::TooFewPoints { needed, found: p });
    }
    Ok(p)
}

/// Verdict for points `i`, `j`, `k` with sides `d(i,j)`, `d(j,k)`, `d(i,k)`.
#[inline]
fn judge(dist: &impl Fn(usize, usize) -> f64, i: usize, j: usize, k: usize, cfg: &TriangleConfig) -> TriangleVerdict {
    classify_triangle(dist(i, j), dist(j, k), dist(i, k), cfg)
}

/// Run `f` with a distance lookup, dense when the source allows it.
fn with_lookup<T>(src: &DistanceSource, f: impl FnOnce(&(dyn Fn(usize, usize) -> f64 + Sync)) -> T) -> T {
    match src.dense() {
        Some(m) => {
            let m: &DistanceMatrix = &m;
            f(&|i, j| m.get(i, j))
        }
        None => f(&|i, j| src.distance(i, j)),
    }
}

/// Monte Carlo α: `repetitions` independent draws of `sample_size`
/// triangles with distinct vertices.
///
/// Repetition `r` uses substream `r` of `cfg.seed`, so the estimate does not
/// depend on how many threads run it.
pub fn alpha_sampled(src: &DistanceSource, cfg: &TriangleConfig) -> Result<AlphaEstimate> {
    cfg.validate()?;
    let p = check_points(src, 3)?;
    let streams = rng::substreams(cfg.seed, cfg.repetitions);
    let tallies = with_lookup(src, |dist| {
        crate::par::map_indices(cfg.repetitions, |r| {
            let mut rng = streams[r].clone();
            let mut tally = Tally::default();
            for _ in 0..cfg.sample_size {
                let (i, j, k) = rng::distinct_triple(&mut rng, p);
                tally.add(judge(&dist, i, j, k, cfg).status);
            }
            tally
        })
    });
    summarize(&tallies)
}

fn summarize(tallies: &[Tally]) -> Result<AlphaEstimate> {
    let mut alphas = Vec::with_capacity(tallies.len());
    for (r, t) in tallies.iter().enumerate() {
        if t.evaluated == 0 {
            return Err(Error::DegeneratePointSet { repetition: r });
        }
        alphas.push(t.ultrametric as f64 / t.evaluated as f64);
    }
    let total = tallies.iter().copied().fold(Tally::default(), Tally::merge);
    let (mean, sdev) = mean_sdev(&alphas);
    Ok(AlphaEstimate {
        mean,
        sdev,
        per_rep_alphas: alphas,
        ultrametric_count: total.ultrametric,
        evaluated_count: total.evaluated,
        degenerate_count: total.degenerate,
    })
}

/// Mean and sample (n - 1) standard deviation.
pub(crate) fn mean_sdev(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// α over every triangle of the point set.
pub fn alpha_exhaustive(src: &DistanceSource, cfg: &TriangleConfig) -> Result<AlphaEstimate> {
    cfg.validate()?;
    let p = check_points(src, 3)?;
    if p > cfg.exhaustive_cap {
        return Err(Error::ExhaustiveCapExceeded { points: p, cap: cfg.exhaustive_cap });
    }
    let per_vertex = with_lookup(src, |dist| {
        crate::par::map_indices(p, |i| {
            let mut tally = Tally::default();
            for j in (i + 1)..p {
                for k in (j + 1)..p {
                    tally.add(judge(&dist, i, j, k, cfg).status);
                }
            }
            tally
        })
    });
    let total = per_vertex.into_iter().fold(Tally::default(), Tally::merge);
    summarize(&[total])
}

/// Single-link cophenetic distances: the largest ultrametric lying below
/// `src` everywhere.
///
/// Computed as minimax path weights over a minimum spanning tree (Prim,
/// `O(p²)`).
pub fn subdominant_ultrametric(src: &DistanceSource) -> Result<DistanceMatrix> {
    let p = check_points(src, 2)?;
    with_lookup(src, |dist| {
        let mut in_tree = vec![false; p];
        let mut best = vec![f64::INFINITY; p];
        let mut parent = vec![usize::MAX; p];
        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); p];
        best[0] = 0.0;
        for _ in 0..p {
            let mut next = usize::MAX;
            for v in 0..p {
                if !in_tree[v] && (next == usize::MAX || best[v] < best[next]) {
                    next = v;
                }
            }
            in_tree[next] = true;
            if parent[next] != usize::MAX {
                let w = best[next];
                adjacency[next].push((parent[next], w));
                adjacency[parent[next]].push((next, w));
            }
            for v in 0..p {
                if !in_tree[v] {
                    let d = dist(next, v);
                    if d < best[v] {
                        best[v] = d;
                        parent[v] = next;
                    }
                }
            }
        }

        let rows = crate::par::map_indices(p, |root| {
            let mut row = vec![0.0f64; p];
            let mut seen = vec![false; p];
            let mut stack = vec![root];
            seen[root] = true;
            while let Some(u) = stack.pop() {
                for &(v, w) in &adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        row[v] = row[u].max(w);
                        stack.push(v);
                    }
                }
            }
            row
        });
        DistanceMatrix::from_full(p, rows.concat())
    })
}

/// `Σ (d - d_c) / Σ d` over unordered pairs, `d_c` the subdominant
/// ultrametric. Zero exactly when the input is ultrametric.
pub fn rammal_index(src: &DistanceSource) -> Result<f64> {
    let p = check_points(src, 2)?;
    let sub = subdominant_ultrametric(src)?;
    let (mut excess, mut total) = (0.0, 0.0);
    for i in 0..p {
        for j in (i + 1)..p {
            let d = src.distance(i, j);
            excess += d - sub.get(i, j);
            total += d;
        }
    }
    if total == 0.0 {
        return Err(Error::AllDistancesZero);
    }
    Ok(excess / total)
}

/// `(d_med / d_max, d_min / d_max)` for the non-degenerate triangles.
///
/// Every triangle is used when there are no more than
/// `sample_size × repetitions` of them; otherwise that many are drawn with
/// the same streams as [`alpha_sampled`].
pub fn triangle_shape_stats(src: &DistanceSource, cfg: &TriangleConfig) -> Result<Vec<(f64, f64)>> {
    cfg.validate()?;
    let p = check_points(src, 3)?;
    let budget = (cfg.sample_size as u64).saturating_mul(cfg.repetitions as u64);
    let shape = |d1: f64, d2: f64, d3: f64| -> Option<(f64, f64)> {
        if classify_triangle(d1, d2, d3, cfg).is_degenerate() {
            return None;
        }
        let mut s = [d1, d2, d3];
        s.sort_by(f64::total_cmp);
        Some((s[1] / s[2], s[0] / s[2]))
    };
    let chunks: Vec<Vec<(f64, f64)>> = with_lookup(src, |dist| {
        if crate::choose3(p) <= budget {
            crate::par::map_indices(p, |i| {
                let mut out = Vec::new();
                for j in (i + 1)..p {
                    for k in (j + 1)..p {
                        out.extend(shape(dist(i, j), dist(j, k), dist(i, k)));
                    }
                }
                out
            })
        } else {
            let streams = rng::substreams(cfg.seed, cfg.repetitions);
            crate::par::map_indices(cfg.repetitions, |r| {
                let mut rng = streams[r].clone();
                (0..cfg.sample_size)
                    .filter_map(|_| {
                        let (i, j, k) = rng::distinct_triple(&mut rng, p);
                        shape(dist(i, j), dist(j, k), dist(i, k))
                    })
                    .collect()
            })
        }
    });
    Ok(chunks.concat())
}
