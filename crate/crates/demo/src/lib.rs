//! Browser bindings for three interactive views: a single-triangle
//! classifier, a triangle-shape scatter and the α-versus-dimension curve.

use rand::Rng;
use umetric::synth::{hypercube_point_set, random_ultrametric_matrix, sparse_hypercube_points, DendrogramSpec};
use umetric::{
    alpha_sampled, embed, factorize, normalize, rng, triangle_shape_stats, DistanceSource, EmbeddedPointSet, PointKind,
    TermDocumentMatrix, TriangleConfig, TriangleStatus,
};
use wasm_bindgen::prelude::*;

fn config(angle_tol_deg: f64, seed: u64) -> Result<TriangleConfig, String> {
    let cfg = TriangleConfig { angle_tolerance_rad: angle_tol_deg.to_radians(), seed, ..TriangleConfig::default() };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

/// `[status, gap_deg, cos_small, cos_mid, cos_large, metric_violation]` with
/// status 0 = ultrametric, 1 = non-ultrametric, 2 = degenerate and NaN for
/// values that do not apply.
pub fn triangle_summary(d1: f64, d2: f64, d3: f64, angle_tol_deg: f64) -> Result<Vec<f64>, String> {
    if ![d1, d2, d3].iter().all(|d| d.is_finite() && *d >= 0.0) {
        return Err("sides must be finite and non-negative".into());
    }
    let v = umetric::classify_triangle(d1, d2, d3, &config(angle_tol_deg, 0)?);
    let status = match v.status {
        TriangleStatus::Ultrametric => 0.0,
        TriangleStatus::NonUltrametric => 1.0,
        TriangleStatus::Degenerate => 2.0,
    };
    let [c1, c2, c3] = v.cosines.unwrap_or([f64::NAN; 3]);
    let gap = v.base_angle_gap_rad.map_or(f64::NAN, f64::to_degrees);
    Ok(vec![status, gap, c1, c2, c3, f64::from(u8::from(v.metric_violation))])
}

fn hypercube_factor_points(n: usize, dim: usize, density: f64, seed: u64) -> Result<EmbeddedPointSet, String> {
    let rows = sparse_hypercube_points(n, dim, density, seed).map_err(|e| e.to_string())?;
    let triples: Vec<(usize, usize, u64)> = rows
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.iter().enumerate().filter(|(_, &b)| b == 1).map(move |(j, _)| (i, j, 1)))
        .collect();
    let tdm = TermDocumentMatrix::from_triples(
        (0..n).map(|i| i.to_string()).collect(),
        (0..dim).map(|j| j.to_string()).collect(),
        triples,
    )
    .map_err(|e| e.to_string())?;
    let fs = factorize(&normalize(&tdm).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    Ok(embed(&fs, PointKind::Rows))
}

fn uniform_points(n: usize, dim: usize, seed: u64) -> Result<EmbeddedPointSet, String> {
    let mut r = rng::master(seed);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| r.random::<f64>()).collect()).collect();
    EmbeddedPointSet::from_rows(&rows).map_err(|e| e.to_string())
}

/// Point cloud named by `kind`: `uniform` (unit cube), `hypercube` (sparse
/// 0/1 data in factor space, density 0.1), `hypercube-raw` (the same 0/1
/// vectors) or `dendrogram` (an exact ultrametric; `dim` is ignored).
pub fn cloud(kind: &str, n: usize, dim: usize, seed: u64) -> Result<DistanceSource, String> {
    Ok(match kind {
        "uniform" => uniform_points(n, dim, seed)?.into(),
        "hypercube" => hypercube_factor_points(n, dim, 0.1, seed)?.into(),
        "hypercube-raw" => {
            let rows = sparse_hypercube_points(n, dim, 0.1, seed).map_err(|e| e.to_string())?;
            hypercube_point_set(&rows).map_err(|e| e.to_string())?.into()
        }
        "dendrogram" => {
            random_ultrametric_matrix(DendrogramSpec { leaf_count: n, seed }).map_err(|e| e.to_string())?.into()
        }
        other => return Err(format!("unknown point cloud {other:?}")),
    })
}

/// Interleaved `(median/max, min/max)` side ratios followed by the cloud's α.
pub fn shape_scatter(kind: &str, n: usize, dim: usize, seed: u64) -> Result<Vec<f64>, String> {
    let src = cloud(kind, n, dim, seed)?;
    let cfg = TriangleConfig { sample_size: 500, repetitions: 4, ..config(2.0, seed)? };
    let pairs = triangle_shape_stats(&src, &cfg).map_err(|e| e.to_string())?;
    let alpha = alpha_sampled(&src, &cfg).map_err(|e| e.to_string())?.mean;
    let mut out: Vec<f64> = pairs.into_iter().flat_map(|(a, b)| [a, b]).collect();
    out.push(alpha);
    Ok(out)
}

/// Mean α over `seeds` hypercube clouds for each dimension, in factor
/// space, followed by the same means in the raw 0/1 space.
pub fn alpha_by_dimension(n: usize, density: f64, dims: &[u32], seeds: u32) -> Result<Vec<f64>, String> {
    if seeds == 0 {
        return Err("need at least one seed".into());
    }
    let mut factor = Vec::with_capacity(dims.len());
    let mut raw = Vec::with_capacity(dims.len());
    for &dim in dims {
        let (mut f, mut r) = (0.0, 0.0);
        for seed in 0..u64::from(seeds) {
            let cfg = TriangleConfig { sample_size: 1000, repetitions: 5, ..config(2.0, seed)? };
            let pts = hypercube_factor_points(n, dim as usize, density, seed)?;
            f += alpha_sampled(&pts.into(), &cfg).map_err(|e| e.to_string())?.mean;
            let rows = sparse_hypercube_points(n, dim as usize, density, seed).map_err(|e| e.to_string())?;
            let pts = hypercube_point_set(&rows).map_err(|e| e.to_string())?;
            r += alpha_sampled(&pts.into(), &cfg).map_err(|e| e.to_string())?.mean;
        }
        factor.push(f / f64::from(seeds));
        raw.push(r / f64::from(seeds));
    }
    factor.extend(raw);
    Ok(factor)
}

#[wasm_bindgen(js_name = classifyTriangle)]
pub fn classify_triangle_js(d1: f64, d2: f64, d3: f64, angle_tol_deg: f64) -> Result<Vec<f64>, JsError> {
    triangle_summary(d1, d2, d3, angle_tol_deg).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = shapeScatter)]
pub fn shape_scatter_js(kind: &str, n: usize, dim: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    shape_scatter(kind, n, dim, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = alphaByDimension)]
pub fn alpha_by_dimension_js(n: usize, density: f64, dims: Vec<u32>, seeds: u32) -> Result<Vec<f64>, JsError> {
    alpha_by_dimension(n, density, &dims, seeds).map_err(|e| JsError::new(&e))
}
