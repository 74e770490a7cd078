//! Text file formats.
//!
//! * Sparse counts: header `n m nnz`, then one `i j count` line per
//!   non-zero cell (0-based, row-major). Sidecars hold the vocabulary and
//!   the row ids, one per line, in index order.
//! * Distance matrix: first line `p`, then the strict upper triangle row by
//!   row, whitespace separated.
//! * Factor space: header `n m r`, a line of eigenvalues, `n` lines of row
//!   factors and `m` lines of column factors, every value written with 17
//!   significant digits so it reads back to the same `f64`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;

use crate::ca::FactorSpace;
use crate::corpus::{Document, TermDocumentMatrix};
use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} {tok:?}")))
}

pub fn format_matrix(tdm: &TermDocumentMatrix) -> String {
    let mut out = format!("{} {} {}\n", tdm.n_rows(), tdm.n_cols(), tdm.nnz());
    for (i, j, c) in tdm.triples() {
        writeln!(out, "{i} {j} {c}").unwrap();
    }
    out
}

fn format_lines(items: &[String]) -> String {
    items.iter().map(|s| format!("{s}\n")).collect()
}

/// Parse the sparse count format with its vocabulary and (optional) row ids.
pub fn parse_matrix(matrix: &str, vocab: &str, rows: Option<&str>) -> Result<TermDocumentMatrix> {
    let mut lines = matrix.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty matrix file"))?;
    let mut h = header.split_whitespace();
    let n: usize = parse_num(h.next(), 1, "row count")?;
    let m: usize = parse_num(h.next(), 1, "column count")?;
    let nnz: usize = parse_num(h.next(), 1, "non-zero count")?;

    let mut triples = Vec::with_capacity(nnz);
    for (idx, line) in lines {
        let mut t = line.split_whitespace();
        let i: usize = parse_num(t.next(), idx + 1, "row index")?;
        let j: usize = parse_num(t.next(), idx + 1, "column index")?;
        let c: u64 = parse_num(t.next(), idx + 1, "count")?;
        if i >= n || j >= m {
            return Err(parse_err(idx + 1, format!("cell ({i}, {j}) outside {n}x{m}")));
        }
        triples.push((i, j, c));
    }
    if triples.len() != nnz {
        return Err(parse_err(1, format!("header announces {nnz} cells, found {}", triples.len())));
    }

    let vocab: Vec<String> = vocab.lines().map(str::to_string).collect();
    if vocab.len() != m {
        return Err(parse_err(1, format!("vocabulary has {} words, matrix has {m} columns", vocab.len())));
    }
    let row_ids: Vec<String> = match rows {
        Some(r) => r.lines().map(str::to_string).collect(),
        None => (0..n).map(|i| i.to_string()).collect(),
    };
    if row_ids.len() != n {
        return Err(parse_err(1, format!("{} row ids for {n} rows", row_ids.len())));
    }
    TermDocumentMatrix::from_triples(row_ids, vocab, triples)
}

/// Sidecar paths for a matrix file: `x.mtx` → `x.vocab`, `x.rows`.
pub fn sidecar_paths(matrix_path: &Path) -> (PathBuf, PathBuf) {
    (matrix_path.with_extension("vocab"), matrix_path.with_extension("rows"))
}

/// Write `stem.mtx`, `stem.vocab` and `stem.rows`; returns the matrix path.
pub fn save_matrix(tdm: &TermDocumentMatrix, stem: &Path) -> Result<PathBuf> {
    let matrix_path = stem.with_extension("mtx");
    let (vocab_path, rows_path) = sidecar_paths(&matrix_path);
    fs::write(&matrix_path, format_matrix(tdm))?;
    fs::write(vocab_path, format_lines(tdm.vocab()))?;
    fs::write(rows_path, format_lines(tdm.row_ids()))?;
    Ok(matrix_path)
}

/// Read a matrix file and its sidecars (the row-id sidecar is optional).
pub fn load_matrix(matrix_path: &Path) -> Result<TermDocumentMatrix> {
    let (vocab_path, rows_path) = sidecar_paths(matrix_path);
    let matrix = fs::read_to_string(matrix_path)?;
    let vocab = fs::read_to_string(vocab_path)?;
    let rows = fs::read_to_string(rows_path).ok();
    parse_matrix(&matrix, &vocab, rows.as_deref())
}

pub fn format_distance_matrix(m: &DistanceMatrix) -> String {
    let p = m.len();
    let mut out = format!("{p}\n");
    for i in 0..p.saturating_sub(1) {
        let row: Vec<String> = m.row(i)[i + 1..].iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_distance_matrix(text: &str) -> Result<DistanceMatrix> {
    let mut tokens = text.split_whitespace();
    let p: usize = parse_num(tokens.next(), 1, "point count")?;
    let values: Vec<f64> = tokens
        .map(|t| t.parse::<f64>().map_err(|_| parse_err(0, format!("bad distance {t:?}"))))
        .collect::<Result<_>>()?;
    DistanceMatrix::from_upper(p, &values)
}

fn format_row<'a>(out: &mut String, values: impl Iterator<Item = &'a f64>) {
    let parts: Vec<String> = values.map(|v| format!("{v:.16e}")).collect();
    out.push_str(&parts.join(" "));
    out.push('\n');
}

pub fn format_factor_space(fs: &FactorSpace) -> String {
    let (n, m, r) = (fs.row_factors.nrows(), fs.col_factors.nrows(), fs.rank());
    let mut out = format!("{n} {m} {r}\n");
    format_row(&mut out, fs.eigenvalues.iter());
    for row in fs.row_factors.row_iter() {
        format_row(&mut out, row.iter());
    }
    for row in fs.col_factors.row_iter() {
        format_row(&mut out, row.iter());
    }
    out
}

/// Parse a factor-space file. Labels are not part of the format and come
/// back as indices; `dropped_count` is `min(n, m) - r`.
pub fn parse_factor_space(text: &str) -> Result<FactorSpace> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty factor file"))?;
    let mut h = header.split_whitespace();
    let n: usize = parse_num(h.next(), 1, "row count")?;
    let m: usize = parse_num(h.next(), 1, "column count")?;
    let r: usize = parse_num(h.next(), 1, "rank")?;

    let mut read_row = |what: &str| -> Result<Vec<f64>> {
        let (idx, line) = lines.next().ok_or_else(|| parse_err(0, format!("missing {what}")))?;
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(idx + 1, format!("bad number {t:?}"))))
            .collect::<Result<_>>()?;
        if values.len() != r {
            return Err(parse_err(idx + 1, format!("expected {r} values, found {}", values.len())));
        }
        Ok(values)
    };
    let eigenvalues = read_row("eigenvalues")?;
    let mut psi = Vec::with_capacity(n * r);
    for _ in 0..n {
        psi.extend(read_row("row factors")?);
    }
    let mut phi = Vec::with_capacity(m * r);
    for _ in 0..m {
        phi.extend(read_row("column factors")?);
    }
    Ok(FactorSpace {
        eigenvalues,
        row_factors: DMatrix::from_row_slice(n, r, &psi),
        col_factors: DMatrix::from_row_slice(m, r, &phi),
        dropped_count: n.min(m).saturating_sub(r),
        row_labels: (0..n).map(|i| i.to_string()).collect(),
        col_labels: (0..m).map(|j| j.to_string()).collect(),
    })
}

/// Every regular, non-hidden file of a directory in name order; the id is
/// the file name without its extension.
pub fn read_corpus_dir(dir: &Path) -> Result<Vec<Document>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file() && !p.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.')))
        .collect();
    paths.sort();
    let docs = paths
        .iter()
        .map(|p| {
            let id = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            read_document(id, p)
        })
        .collect::<Result<Vec<_>>>()?;
    check_unique_ids(&docs)?;
    Ok(docs)
}

/// Documents listed in a manifest of `id,path` lines. Relative paths are
/// resolved against the manifest's directory; blank lines and lines
/// starting with `#` are skipped.
pub fn read_manifest(manifest: &Path) -> Result<Vec<Document>> {
    let base = manifest.parent().unwrap_or(Path::new("."));
    let text = fs::read_to_string(manifest)?;
    let mut docs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, path) = line.split_once(',').ok_or_else(|| parse_err(idx + 1, "expected `id,path`"))?;
        let path = base.join(path.trim());
        docs.push(read_document(id.trim().to_string(), &path)?);
    }
    check_unique_ids(&docs)?;
    Ok(docs)
}

fn read_document(id: String, path: &Path) -> Result<Document> {
    let bytes = fs::read(path)?;
    let text = String::from_utf8(bytes)
        .map_err(|e| Error::InvalidParameter(format!("{} is not valid UTF-8: {e}", path.display())))?;
    if text.trim().is_empty() {
        log::warn!("document {id} ({}) is empty", path.display());
    }
    Ok(Document { id, text, source_path: path.display().to_string() })
}

fn check_unique_ids(docs: &[Document]) -> Result<()> {
    let mut seen = HashSet::new();
    for d in docs {
        if !seen.insert(d.id.as_str()) {
            return Err(Error::InvalidParameter(format!("duplicate document id {:?}", d.id)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build_matrix;

    #[test]
    fn matrix_format_is_exact() {
        let tdm = build_matrix(&[Document::new("x", "a b b"), Document::new("y", "a a")]).unwrap();
        assert_eq!(format_matrix(&tdm), "2 2 3\n0 0 1\n0 1 2\n1 0 2\n");
        let back = parse_matrix(&format_matrix(&tdm), "a\nb\n", Some("x\ny\n")).unwrap();
        assert_eq!(back, tdm);
    }

    #[test]
    fn matrix_parse_errors() {
        assert!(parse_matrix("2 2 1\n0 5 1\n", "a\nb\n", None).is_err());
        assert!(parse_matrix("2 2 2\n0 0 1\n", "a\nb\n", None).is_err());
        assert!(parse_matrix("2 2 1\n0 0 1\n", "a\n", None).is_err());
        assert!(parse_matrix("", "", None).is_err());
    }

    #[test]
    fn distance_format() {
        let m = DistanceMatrix::from_upper(3, &[3.0, 5.0, 4.0]).unwrap();
        let text = format_distance_matrix(&m);
        assert_eq!(text, "3\n3.0 5.0\n4.0\n");
        assert_eq!(parse_distance_matrix(&text).unwrap(), m);
        assert_eq!(parse_distance_matrix("3 1 1 1").unwrap().get(1, 2), 1.0);
        assert!(parse_distance_matrix("3\n1 1").is_err());
    }

    #[test]
    fn corpus_dir_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("b.txt"), "second doc").unwrap();
        fs::write(dir.path().join("a.txt"), "first doc").unwrap();
        fs::write(dir.path().join(".hidden"), "skip").unwrap();
        let docs = read_corpus_dir(dir.path()).unwrap();
        let ids: Vec<&str> = docs.iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, vec!["a", "b"]);

        let manifest = dir.path().join("list.csv");
        fs::write(&manifest, "# id,path\ntwo,b.txt\none, a.txt\n").unwrap();
        let docs = read_manifest(&manifest).unwrap();
        assert_eq!(docs[0].id, "two");
        assert_eq!(docs[1].text, "first doc");

        fs::write(&manifest, "x,a.txt\nx,b.txt\n").unwrap();
        assert!(read_manifest(&manifest).is_err());
    }
}
