//! Pairwise distance inputs for the triangle measures.

use crate::ca::EmbeddedPointSet;
use crate::error::{Error, Result};

/// Dense symmetric distance matrix with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    p: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    /// Validate and wrap a full `p × p` row-major matrix.
    pub fn from_full(p: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != p * p {
            return Err(Error::InvalidDistances(format!("expected {} values, got {}", p * p, values.len())));
        }
        for i in 0..p {
            if values[i * p + i] != 0.0 {
                return Err(Error::InvalidDistances(format!("diagonal entry {i} is not zero")));
            }
            for j in (i + 1)..p {
                let (a, b) = (values[i * p + j], values[j * p + i]);
                if !a.is_finite() || a < 0.0 {
                    return Err(Error::InvalidDistances(format!(
                        "d({i}, {j}) = {a} is not a finite non-negative value"
                    )));
                }
                if a != b {
                    return Err(Error::InvalidDistances(format!("d({i}, {j}) = {a} but d({j}, {i}) = {b}")));
                }
            }
        }
        Ok(DistanceMatrix { p, values })
    }

    /// Build from the strict upper triangle, row by row.
    pub fn from_upper(p: usize, upper: &[f64]) -> Result<Self> {
        let expected = crate::choose2(p) as usize;
        if upper.len() != expected {
            return Err(Error::InvalidDistances(format!(
                "expected {expected} upper-triangle values, got {}",
                upper.len()
            )));
        }
        let mut values = vec![0.0; p * p];
        let mut it = upper.iter();
        for i in 0..p {
            for j in (i + 1)..p {
                let d = *it.next().unwrap();
                values[i * p + j] = d;
                values[j * p + i] = d;
            }
        }
        Self::from_full(p, values)
    }

    /// Build from a symmetric distance function evaluated on `i < j`.
    pub fn from_fn(p: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut values = vec![0.0; p * p];
        for i in 0..p {
            for j in (i + 1)..p {
                let d = f(i, j);
                values[i * p + j] = d;
                values[j * p + i] = d;
            }
        }
        Self::from_full(p, values)
    }

    pub fn len(&self) -> usize {
        self.p
    }

    pub fn is_empty(&self) -> bool {
        self.p == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.p + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.p..(i + 1) * self.p]
    }

    /// Strict upper triangle, row by row.
    pub fn upper(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(crate::choose2(self.p) as usize);
        for i in 0..self.p {
            out.extend_from_slice(&self.row(i)[i + 1..]);
        }
        out
    }
}

/// Where pairwise distances come from.
#[derive(Debug, Clone)]
pub enum DistanceSource {
    /// Euclidean distances between embedded points.
    Points(EmbeddedPointSet),
    Matrix(DistanceMatrix),
}

/// Above this many points a point cloud is not materialized as a dense matrix.
pub const DENSE_LIMIT: usize = 5000;

impl DistanceSource {
    pub fn len(&self) -> usize {
        match self {
            DistanceSource::Points(p) => p.len(),
            DistanceSource::Matrix(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match self {
            DistanceSource::Points(p) => p.distance(i, j),
            DistanceSource::Matrix(m) => m.get(i, j),
        }
    }

    /// A dense matrix for repeated lookups, when the size allows it.
    pub(crate) fn dense(&self) -> Option<std::borrow::Cow<'_, DistanceMatrix>> {
        match self {
            DistanceSource::Matrix(m) => Some(std::borrow::Cow::Borrowed(m)),
            DistanceSource::Points(p) if p.len() <= DENSE_LIMIT => Some(std::borrow::Cow::Owned(
                DistanceMatrix::from_fn(p.len(), |i, j| p.distance(i, j))
                    .expect("Euclidean distances are a valid matrix"),
            )),
            DistanceSource::Points(_) => None,
        }
    }
}

impl From<EmbeddedPointSet> for DistanceSource {
    fn from(p: EmbeddedPointSet) -> Self {
        DistanceSource::Points(p)
    }
}

impl From<DistanceMatrix> for DistanceSource {
    fn from(m: DistanceMatrix) -> Self {
        DistanceSource::Matrix(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_round_trip() {
        let m = DistanceMatrix::from_upper(3, &[3.0, 5.0, 4.0]).unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(2, 0), 5.0);
        assert_eq!(m.get(1, 2), 4.0);
        assert_eq!(m.upper(), vec![3.0, 5.0, 4.0]);
    }

    #[test]
    fn rejects_invalid_matrices() {
        assert!(DistanceMatrix::from_full(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DistanceMatrix::from_full(2, vec![1.0, 1.0, 1.0, 0.0]).is_err());
        assert!(DistanceMatrix::from_upper(2, &[-1.0]).is_err());
        assert!(DistanceMatrix::from_upper(3, &[1.0]).is_err());
    }
}
