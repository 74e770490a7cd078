//! Text ingestion: tokenization, segmentation and the term–document matrix.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A unit of text, typically one file or one segment of a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub source_path: String,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Document { id: id.into(), text: text.into(), source_path: String::new() }
    }
}

/// Lowercase word tokens in text order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<String>,
}

impl TokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Split text into maximal runs of Unicode letters or digits, lowercased.
///
/// Everything else (whitespace, punctuation, apostrophes, hyphens) delimits.
pub fn tokenize(text: &str) -> TokenStream {
    let tokens =
        text.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).map(|t| t.to_lowercase()).collect();
    TokenStream { tokens }
}

/// Cut a document into pieces of at most `max_chars` characters.
///
/// Cuts are placed at the last whitespace at or before the limit, and the
/// whitespace run at a cut belongs to neither neighbour. A stretch with no
/// whitespace inside the limit is hard-split (and logged). A document that
/// already fits is returned unchanged. Segment ids are `"{id}#{k}"` with `k`
/// counting from 1 when more than one segment is produced.
pub fn segment_text(doc: &Document, max_chars: usize) -> Result<Vec<Document>> {
    if max_chars == 0 {
        return Err(Error::InvalidParameter("max_chars must be at least 1".into()));
    }
    let chars: Vec<char> = doc.text.chars().collect();
    if chars.len() <= max_chars {
        return Ok(vec![doc.clone()]);
    }

    let mut pieces: Vec<String> = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let rest = chars.len() - pos;
        if rest <= max_chars {
            if chars[pos..].iter().any(|c| !c.is_whitespace()) {
                pieces.push(chars[pos..].iter().collect());
            }
            break;
        }
        // Candidate cut positions are pos..=pos+max_chars; a whitespace at
        // pos+max_chars means the full window is a clean piece.
        let limit = pos + max_chars;
        let cut = (pos..=limit).rev().find(|&w| chars[w].is_whitespace());
        match cut {
            Some(w) => {
                let mut end = w;
                while end > pos && chars[end - 1].is_whitespace() {
                    end -= 1;
                }
                if end > pos {
                    pieces.push(chars[pos..end].iter().collect());
                }
                pos = w + 1;
            }
            None => {
                log::warn!(
                    "document {}: run of more than {} characters without whitespace at offset {}; hard split",
                    doc.id,
                    max_chars,
                    pos
                );
                pieces.push(chars[pos..limit].iter().collect());
                pos = limit;
            }
        }
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
    }

    if pieces.len() == 1 {
        return Ok(vec![Document { text: pieces.pop().unwrap(), ..doc.clone() }]);
    }
    Ok(pieces
        .into_iter()
        .enumerate()
        .map(|(k, text)| Document { id: format!("{}#{}", doc.id, k + 1), text, source_path: doc.source_path.clone() })
        .collect())
}

/// Sparse document × word count table with its marginals.
///
/// Columns are ordered by decreasing total count, ties broken
/// lexicographically; no row or column is all zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermDocumentMatrix {
    rows: Vec<Vec<(usize, u64)>>,
    row_ids: Vec<String>,
    vocab: Vec<String>,
    row_totals: Vec<u64>,
    col_totals: Vec<u64>,
    grand_total: u64,
}

impl TermDocumentMatrix {
    /// Build from `(row, column, count)` triples over the given labels.
    ///
    /// Duplicate cells are summed, zero rows and columns are pruned and the
    /// columns are put into frequency order.
    pub fn from_triples(
        row_ids: Vec<String>,
        vocab: Vec<String>,
        triples: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Result<Self> {
        let n = row_ids.len();
        let m = vocab.len();
        let mut cells: Vec<HashMap<usize, u64>> = vec![HashMap::new(); n];
        for (i, j, c) in triples {
            if i >= n || j >= m {
                return Err(Error::InvalidParameter(format!("cell ({i}, {j}) outside a {n}x{m} table")));
            }
            if c > 0 {
                *cells[i].entry(j).or_insert(0) += c;
            }
        }

        let mut col_totals = vec![0u64; m];
        for row in &cells {
            for (&j, &c) in row {
                col_totals[j] += c;
            }
        }
        let mut order: Vec<usize> = (0..m).filter(|&j| col_totals[j] > 0).collect();
        order.sort_by(|&a, &b| col_totals[b].cmp(&col_totals[a]).then_with(|| vocab[a].cmp(&vocab[b])));
        let mut new_index = vec![usize::MAX; m];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }

        let mut rows = Vec::new();
        let mut kept_ids = Vec::new();
        for (row, id) in cells.into_iter().zip(row_ids) {
            if row.is_empty() {
                log::warn!("row {id} has no counts; dropped");
                continue;
            }
            let mut entries: Vec<(usize, u64)> = row.into_iter().map(|(j, c)| (new_index[j], c)).collect();
            entries.sort_unstable();
            rows.push(entries);
            kept_ids.push(id);
        }
        let vocab = order.iter().map(|&j| vocab[j].clone()).collect();
        Ok(Self::assemble(rows, kept_ids, vocab))
    }

    fn assemble(rows: Vec<Vec<(usize, u64)>>, row_ids: Vec<String>, vocab: Vec<String>) -> Self {
        let mut col_totals = vec![0u64; vocab.len()];
        let row_totals: Vec<u64> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&(j, c)| {
                        col_totals[j] += c;
                        c
                    })
                    .sum()
            })
            .collect();
        let grand_total = row_totals.iter().sum();
        TermDocumentMatrix { rows, row_ids, vocab, row_totals, col_totals, grand_total }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.vocab.len()
    }

    /// Number of stored non-zero cells.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn row_totals(&self) -> &[u64] {
        &self.row_totals
    }

    pub fn col_totals(&self) -> &[u64] {
        &self.col_totals
    }

    pub fn grand_total(&self) -> u64 {
        self.grand_total
    }

    /// Sorted `(column, count)` entries of row `i`.
    pub fn row(&self, i: usize) -> &[(usize, u64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        match self.rows[i].binary_search_by_key(&j, |&(c, _)| c) {
            Ok(pos) => self.rows[i][pos].1,
            Err(_) => 0,
        }
    }

    /// All non-zero cells in row-major order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |&(j, c)| (i, j, c)))
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        self.rows
            .iter()
            .map(|r| {
                let mut dense = vec![0; self.vocab.len()];
                for &(j, c) in r {
                    dense[j] = c;
                }
                dense
            })
            .collect()
    }
}

/// Cross-tabulate word occurrences over documents.
///
/// Documents without any token are skipped with a warning; at least two
/// must remain.
pub fn build_matrix(corpus: &[Document]) -> Result<TermDocumentMatrix> {
    let streams = crate::par::map_indices(corpus.len(), |i| tokenize(&corpus[i].text));

    let mut word_index: HashMap<String, usize> = HashMap::new();
    let mut vocab: Vec<String> = Vec::new();
    let mut row_ids = Vec::new();
    let mut triples = Vec::new();
    for (doc, stream) in corpus.iter().zip(streams) {
        if stream.is_empty() {
            log::warn!("document {} has no tokens; excluded", doc.id);
            continue;
        }
        let row = row_ids.len();
        row_ids.push(doc.id.clone());
        let mut counts: HashMap<usize, u64> = HashMap::new();
        for token in stream.tokens {
            let next = vocab.len();
            let j = *word_index.entry(token).or_insert_with_key(|t| {
                vocab.push(t.clone());
                next
            });
            *counts.entry(j).or_insert(0) += 1;
        }
        triples.extend(counts.into_iter().map(|(j, c)| (row, j, c)));
    }

    if row_ids.len() < 2 {
        return Err(Error::TooFewDocuments { needed: 2, found: row_ids.len() });
    }
    TermDocumentMatrix::from_triples(row_ids, vocab, triples)
}

/// Keep the `m` most frequent words (all of them if `m` exceeds the
/// vocabulary), dropping documents left without any count.
pub fn select_top_words(tdm: &TermDocumentMatrix, m: usize) -> Result<TermDocumentMatrix> {
    if m == 0 {
        return Err(Error::InvalidParameter("number of words must be at least 1".into()));
    }
    if m >= tdm.n_cols() {
        return Ok(tdm.clone());
    }
    let mut rows = Vec::new();
    let mut ids = Vec::new();
    for (row, id) in tdm.rows.iter().zip(&tdm.row_ids) {
        let kept: Vec<(usize, u64)> = row.iter().copied().filter(|&(j, _)| j < m).collect();
        if kept.is_empty() {
            log::warn!("document {id} has none of the top {m} words; dropped");
            continue;
        }
        rows.push(kept);
        ids.push(id.clone());
    }
    Ok(TermDocumentMatrix::assemble(rows, ids, tdm.vocab[..m].to_vec()))
}
