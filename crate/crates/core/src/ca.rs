//! Correspondence analysis.
//!
//! A count table is normalized into joint frequencies `f_ij` with masses
//! `f_i`, `f_j`. Row profiles `f_ij / f_i` carry the χ² metric (weights
//! `1 / f_j`); the analysis finds a Euclidean factor space in which the
//! ordinary distance between row points equals their χ² distance, and
//! likewise for columns.
//!
//! The factors come from the SVD of the standardized residuals
//! `s_ij = (f_ij - f_i f_j) / sqrt(f_i f_j)`. With `S = U Σ Vᵀ`, eigenvalue
//! `λ_a = σ_a²`, row factor `ψ_ia = σ_a U_ia / sqrt(f_i)` and column factor
//! `φ_ja = σ_a V_ja / sqrt(f_j)`. All factors with non-negligible
//! eigenvalue are kept; nothing is truncated for display purposes.
//!
//! The residual matrix is dense, so memory is `n × m × 8` bytes.

use nalgebra::DMatrix;

use crate::corpus::TermDocumentMatrix;
use crate::error::{Error, Result};

/// Eigenvalues below this fraction of the largest are numerical zeros.
pub const RELATIVE_EIGEN_CUTOFF: f64 = 1e-12;

/// Eigenvalues below this are zero regardless of the largest one.
///
/// Inertia is bounded by `min(n, m) - 1`, and rounding in an exactly
/// independent table leaves eigenvalues around 1e-30.
pub const ABSOLUTE_EIGEN_FLOOR: f64 = 1e-20;

/// Joint relative frequencies with row and column masses.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    pub f: DMatrix<f64>,
    pub row_masses: Vec<f64>,
    pub col_masses: Vec<f64>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl FrequencyTable {
    /// Normalize a dense table of non-negative weights.
    ///
    /// Labels default to the row/column index when not given.
    pub fn from_dense(counts: &DMatrix<f64>) -> Result<Self> {
        let total: f64 = counts.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::ZeroTotal);
        }
        if counts.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidParameter("table entries must be finite and non-negative".into()));
        }
        let f = counts / total;
        let row_masses: Vec<f64> = f.row_iter().map(|r| r.sum()).collect();
        let col_masses: Vec<f64> = f.column_iter().map(|c| c.sum()).collect();
        Ok(FrequencyTable {
            row_labels: (0..f.nrows()).map(|i| i.to_string()).collect(),
            col_labels: (0..f.ncols()).map(|j| j.to_string()).collect(),
            f,
            row_masses,
            col_masses,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.f.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.f.ncols()
    }

    /// The same table with rows and columns exchanged.
    pub fn transpose(&self) -> Self {
        FrequencyTable {
            f: self.f.transpose(),
            row_masses: self.col_masses.clone(),
            col_masses: self.row_masses.clone(),
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// χ² distance between row profiles `i` and `k`.
    pub fn chi2_distance(&self, i: usize, k: usize) -> f64 {
        let (fi, fk) = (self.row_masses[i], self.row_masses[k]);
        (0..self.n_cols())
            .map(|j| {
                let diff = self.f[(i, j)] / fi - self.f[(k, j)] / fk;
                diff * diff / self.col_masses[j]
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Divide counts by the grand total. Masses come from the integer
/// marginals, so they are exact up to one rounding.
pub fn normalize(tdm: &TermDocumentMatrix) -> Result<FrequencyTable> {
    let total = tdm.grand_total();
    if total == 0 {
        return Err(Error::ZeroTotal);
    }
    let k = total as f64;
    let mut f = DMatrix::zeros(tdm.n_rows(), tdm.n_cols());
    for (i, j, c) in tdm.triples() {
        f[(i, j)] = c as f64 / k;
    }
    Ok(FrequencyTable {
        f,
        row_masses: tdm.row_totals().iter().map(|&t| t as f64 / k).collect(),
        col_masses: tdm.col_totals().iter().map(|&t| t as f64 / k).collect(),
        row_labels: tdm.row_ids().to_vec(),
        col_labels: tdm.vocab().to_vec(),
    })
}

/// χ² distance between rows `i` and `k` of `ft`.
pub fn chi2_distance(ft: &FrequencyTable, i: usize, k: usize) -> f64 {
    ft.chi2_distance(i, k)
}

/// Total inertia: `Σ_ij (f_ij - f_i f_j)² / (f_i f_j)`.
pub fn inertia(ft: &FrequencyTable) -> f64 {
    let mut sum = 0.0;
    for (j, &fj) in ft.col_masses.iter().enumerate() {
        for (i, &fi) in ft.row_masses.iter().enumerate() {
            let expected = fi * fj;
            let dev = ft.f[(i, j)] - expected;
            sum += dev * dev / expected;
        }
    }
    sum
}

/// Factor coordinates of a correspondence analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSpace {
    /// Decreasing, all positive.
    pub eigenvalues: Vec<f64>,
    /// `n × r`, one row per table row.
    pub row_factors: DMatrix<f64>,
    /// `m × r`, one row per table column.
    pub col_factors: DMatrix<f64>,
    /// Singular values discarded as numerically zero (the trivial one included).
    pub dropped_count: usize,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl FactorSpace {
    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn total_inertia(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Decompose a frequency table into its principal factors.
///
/// Each factor's sign is fixed so that its largest-magnitude row
/// coordinate (first one on ties) is positive.
pub fn factorize(ft: &FrequencyTable) -> Result<FactorSpace> {
    let (n, m) = (ft.n_rows(), ft.n_cols());
    if n < 2 || m < 2 {
        return Err(Error::TableTooSmall { rows: n, cols: m });
    }
    if ft.row_masses.iter().chain(&ft.col_masses).any(|&w| w <= 0.0) {
        return Err(Error::InvalidParameter("every row and column needs a positive mass".into()));
    }

    let sqrt_r: Vec<f64> = ft.row_masses.iter().map(|w| w.sqrt()).collect();
    let sqrt_c: Vec<f64> = ft.col_masses.iter().map(|w| w.sqrt()).collect();
    let residuals =
        DMatrix::from_fn(n, m, |i, j| (ft.f[(i, j)] - ft.row_masses[i] * ft.col_masses[j]) / (sqrt_r[i] * sqrt_c[j]));

    let svd = crate::linalg::thin_svd(&residuals).ok_or(Error::SvdNonConvergence { rows: n, cols: m })?;
    let largest = svd.singular_values.first().map_or(0.0, |s| s * s);
    let cutoff = (largest * RELATIVE_EIGEN_CUTOFF).max(ABSOLUTE_EIGEN_FLOOR);
    let kept: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&a| svd.singular_values[a].powi(2) >= cutoff).collect();
    let r = kept.len();

    let mut eigenvalues = Vec::with_capacity(r);
    let mut row_factors = DMatrix::zeros(n, r);
    let mut col_factors = DMatrix::zeros(m, r);
    for (axis, &a) in kept.iter().enumerate() {
        let sigma = svd.singular_values[a];
        eigenvalues.push(sigma * sigma);
        for i in 0..n {
            row_factors[(i, axis)] = sigma * svd.u[(i, a)] / sqrt_r[i];
        }
        for j in 0..m {
            col_factors[(j, axis)] = sigma * svd.v[(j, a)] / sqrt_c[j];
        }
        let mut pivot = 0;
        for i in 1..n {
            if row_factors[(i, axis)].abs() > row_factors[(pivot, axis)].abs() {
                pivot = i;
            }
        }
        if row_factors[(pivot, axis)] < 0.0 {
            row_factors.column_mut(axis).neg_mut();
            col_factors.column_mut(axis).neg_mut();
        }
    }

    Ok(FactorSpace {
        eigenvalues,
        row_factors,
        col_factors,
        dropped_count: svd.singular_values.len() - r,
        row_labels: ft.row_labels.clone(),
        col_labels: ft.col_labels.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Rows,
    Columns,
}

/// Labelled points in a Euclidean space, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedPointSet {
    coords: Vec<f64>,
    dim: usize,
    pub labels: Vec<String>,
    pub kind: PointKind,
}

impl EmbeddedPointSet {
    /// `coords` holds `labels.len()` points of `dim` values each.
    pub fn new(coords: Vec<f64>, dim: usize, labels: Vec<String>, kind: PointKind) -> Result<Self> {
        if coords.len() != labels.len() * dim {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates do not fit {} points of dimension {dim}",
                coords.len(),
                labels.len()
            )));
        }
        Ok(EmbeddedPointSet { coords, dim, labels, kind })
    }

    /// Unlabelled points from coordinate rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("rows have different lengths".into()));
        }
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::new(rows.concat(), dim, labels, PointKind::Rows)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Unweighted Euclidean distance between points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.point(i).iter().zip(self.point(j)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// The row (document) or column (word) cloud at full factor rank.
pub fn embed(fs: &FactorSpace, kind: PointKind) -> EmbeddedPointSet {
    let (factors, labels) = match kind {
        PointKind::Rows => (&fs.row_factors, &fs.row_labels),
        PointKind::Columns => (&fs.col_factors, &fs.col_labels),
    };
    let dim = factors.ncols();
    let mut coords = Vec::with_capacity(factors.len());
    for row in factors.row_iter() {
        coords.extend(row.iter());
    }
    EmbeddedPointSet { coords, dim, labels: labels.clone(), kind }
}
