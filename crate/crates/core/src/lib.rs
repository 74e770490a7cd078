//! Correspondence analysis of term–document tables and triangle-based
//! measures of ultrametricity (inherent hierarchical structure).
//!
//! The pipeline runs in four stages:
//!
//! 1. [`corpus`] tokenizes plain text and builds a frequency-ranked
//!    term–document count matrix.
//! 2. [`ca`] maps the normalized table, under the χ² metric, into a
//!    full-rank Euclidean factor space for both documents and words.
//! 3. [`ultrametric`] measures how close a point cloud is to an ultrametric:
//!    the α coefficient (share of triangles that are equilateral or
//!    isosceles with a small base), the subdominant-ultrametric index and
//!    triangle-shape ratios.
//! 4. [`wordscan`] runs word-anchored exhaustive triangle counts over the
//!    word cloud and places each word in the empirical distribution.
//!
//! [`synth`] holds seeded generators and independent oracles used to check
//! all of the above.

pub mod ca;
pub mod corpus;
pub mod distance;
mod error;
pub mod io;
mod linalg;
mod par;
pub mod rng;
pub mod synth;
pub mod triangle;
pub mod ultrametric;
pub mod wordscan;

pub use ca::{embed, factorize, inertia, normalize, EmbeddedPointSet, FactorSpace, FrequencyTable, PointKind};
pub use corpus::{build_matrix, segment_text, select_top_words, tokenize, Document, TermDocumentMatrix, TokenStream};
pub use distance::{DistanceMatrix, DistanceSource};
pub use error::{Error, Result};
pub use triangle::{classify_triangle, TriangleConfig, TriangleStatus, TriangleVerdict};
pub use ultrametric::{
    alpha_exhaustive, alpha_sampled, rammal_index, subdominant_ultrametric, triangle_shape_stats, AlphaEstimate,
};
pub use wordscan::{
    median_split, percentile, scan_all_words, word_triangle_count, EmpiricalDistribution, MedianLabel, WordScanReport,
};

/// Number of unordered triples drawn from `n` items.
pub fn choose3(n: usize) -> u64 {
    let n = n as u64;
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Number of unordered pairs drawn from `n` items.
pub fn choose2(n: usize) -> u64 {
    let n = n as u64;
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}
