//! Word-anchored exhaustive triangle counts.
//!
//! For an anchor word and a candidate set, every triangle made of the
//! anchor and an unordered pair of other candidates is classified.
//! Triangles with a side at or below epsilon are set aside. Scanning every
//! word of a cloud of `p` points touches `p · C(p-1, 2)` anchored triangles,
//! which [`Scanner`] covers by enumerating each distinct triangle once and
//! crediting all three vertices.

use std::collections::BTreeMap;

use crate::ca::EmbeddedPointSet;
use crate::distance::{DistanceMatrix, DENSE_LIMIT};
use crate::error::{Error, Result};
use crate::triangle::{classify_triangle, TriangleConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct WordScanReport {
    pub word: String,
    pub candidate_set_size: usize,
    /// `C(candidate_set_size - 1, 2)`.
    pub triangles_total: u64,
    /// Triangles whose three sides all exceed epsilon.
    pub triangles_nonzero: u64,
    pub ultrametric_count: u64,
    /// `ultrametric_count / triangles_nonzero`, 0 when no triangle qualifies.
    pub alpha_word: f64,
}

impl WordScanReport {
    fn new(word: String, candidate_set_size: usize, nonzero: u64, ultrametric: u64) -> Self {
        WordScanReport {
            word,
            candidate_set_size,
            triangles_total: crate::choose2(candidate_set_size.saturating_sub(1)),
            triangles_nonzero: nonzero,
            ultrametric_count: ultrametric,
            alpha_word: if nonzero == 0 { 0.0 } else { ultrametric as f64 / nonzero as f64 },
        }
    }
}

fn resolve(points: &EmbeddedPointSet, word: &str) -> Result<usize> {
    points.index_of(word).ok_or_else(|| Error::UnknownWord(word.to_string()))
}

/// Count the ultrametric triangles formed by `anchor` and every pair of the
/// other `candidates`.
pub fn word_triangle_count(
    points: &EmbeddedPointSet,
    anchor: &str,
    candidates: &[String],
    cfg: &TriangleConfig,
) -> Result<WordScanReport> {
    if candidates.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, found: candidates.len() });
    }
    if !candidates.iter().any(|c| c == anchor) {
        return Err(Error::AnchorNotCandidate(anchor.to_string()));
    }
    let a = resolve(points, anchor)?;
    let others: Vec<usize> =
        candidates.iter().filter(|c| *c != anchor).map(|c| resolve(points, c)).collect::<Result<_>>()?;
    let (nonzero, ultrametric) = anchored_counts(points, a, &others, cfg);
    Ok(WordScanReport::new(anchor.to_string(), candidates.len(), nonzero, ultrametric))
}

fn anchored_counts(points: &EmbeddedPointSet, a: usize, others: &[usize], cfg: &TriangleConfig) -> (u64, u64) {
    let eps = cfg.epsilon;
    let to_anchor: Vec<f64> = others.iter().map(|&x| points.distance(a, x)).collect();
    let (mut nonzero, mut ultrametric) = (0, 0);
    for (s, &x) in others.iter().enumerate() {
        let dax = to_anchor[s];
        if dax <= eps {
            continue;
        }
        for (t, &y) in others.iter().enumerate().skip(s + 1) {
            let day = to_anchor[t];
            let dxy = points.distance(x, y);
            if day <= eps || dxy <= eps {
                continue;
            }
            nonzero += 1;
            if classify_triangle(dax, dxy, day, cfg).is_ultrametric() {
                ultrametric += 1;
            }
        }
    }
    (nonzero, ultrametric)
}

/// Ultrametric counts over all words, sorted for percentile lookups.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    /// One report per word, in point order.
    pub reports: Vec<WordScanReport>,
    /// Ascending.
    pub sorted_counts: Vec<u64>,
    pub min: u64,
    pub max: u64,
}

impl EmpiricalDistribution {
    pub fn from_reports(reports: Vec<WordScanReport>) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::InvalidParameter("empty distribution".into()));
        }
        let mut sorted_counts: Vec<u64> = reports.iter().map(|r| r.ultrametric_count).collect();
        sorted_counts.sort_unstable();
        let (min, max) = (sorted_counts[0], *sorted_counts.last().unwrap());
        Ok(EmpiricalDistribution { reports, sorted_counts, min, max })
    }

    pub fn counts_by_word(&self) -> BTreeMap<&str, u64> {
        self.reports.iter().map(|r| (r.word.as_str(), r.ultrametric_count)).collect()
    }

    pub fn report(&self, word: &str) -> Option<&WordScanReport> {
        self.reports.iter().find(|r| r.word == word)
    }

    pub fn len(&self) -> usize {
        self.reports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reports.is_empty()
    }

    /// Midrank percentile of a count value within the distribution.
    pub fn percentile_of(&self, count: u64) -> f64 {
        let below = self.sorted_counts.partition_point(|&c| c < count);
        let through = self.sorted_counts.partition_point(|&c| c <= count);
        let ties = through - below;
        100.0 * (below as f64 + 0.5 * ties as f64) / self.sorted_counts.len() as f64
    }

    /// Median of the counts (mean of the two middle values for even sizes).
    pub fn median(&self) -> f64 {
        median_of_sorted(&self.sorted_counts)
    }
}

/// Exhaustive word scan over every point of the cloud.
pub fn scan_all_words(points: &EmbeddedPointSet, cfg: &TriangleConfig) -> Result<EmpiricalDistribution> {
    let mut scanner = Scanner::new(points, cfg)?;
    scanner.run_to_end();
    scanner.finish()
}

/// Progress of a full scan: rows `0..next_row` are done.
///
/// Triangle `{i < j < k}` is evaluated while processing row `i`, so the
/// scan can be cut at any row boundary and resumed from the saved counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanState {
    pub next_row: usize,
    pub ultrametric: Vec<u64>,
    pub nonzero: Vec<u64>,
}

impl ScanState {
    pub fn new(p: usize) -> Self {
        ScanState { next_row: 0, ultrametric: vec![0; p], nonzero: vec![0; p] }
    }

    pub fn is_complete(&self) -> bool {
        self.next_row >= self.ultrametric.len()
    }
}

/// Resumable driver for [`scan_all_words`].
pub struct Scanner<'a> {
    points: &'a EmbeddedPointSet,
    dense: Option<DistanceMatrix>,
    cfg: TriangleConfig,
    state: ScanState,
}

impl<'a> Scanner<'a> {
    pub fn new(points: &'a EmbeddedPointSet, cfg: &TriangleConfig) -> Result<Self> {
        Self::resume(points, cfg, ScanState::new(points.len()))
    }

    pub fn resume(points: &'a EmbeddedPointSet, cfg: &TriangleConfig, state: ScanState) -> Result<Self> {
        cfg.validate()?;
        let p = points.len();
        if p < 3 {
            return Err(Error::TooFewPoints { needed: 3, found: p });
        }
        if state.ultrametric.len() != p || state.nonzero.len() != p || state.next_row > p {
            return Err(Error::InvalidParameter(format!("scan state does not match {p} points")));
        }
        let dense = (p <= DENSE_LIMIT)
            .then(|| DistanceMatrix::from_fn(p, |i, j| points.distance(i, j)).expect("Euclidean distances are valid"));
        Ok(Scanner { points, dense, cfg: *cfg, state })
    }

    pub fn state(&self) -> &ScanState {
        &self.state
    }

    /// Process up to `rows` more anchor rows; returns the rows processed.
    pub fn advance(&mut self, rows: usize) -> usize {
        let p = self.points.len();
        let start = self.state.next_row;
        let end = (start + rows).min(p);
        let parts = crate::par::map_indices(end - start, |offset| self.row_counts(start + offset));
        for (ultra, nonzero) in parts {
            for (acc, v) in self.state.ultrametric.iter_mut().zip(ultra) {
                *acc += v;
            }
            for (acc, v) in self.state.nonzero.iter_mut().zip(nonzero) {
                *acc += v;
            }
        }
        self.state.next_row = end;
        end - start
    }

    pub fn run_to_end(&mut self) {
        let p = self.points.len();
        while !self.state.is_complete() {
            self.advance(p);
        }
    }

    /// Credits from every triangle whose smallest index is `i`.
    fn row_counts(&self, i: usize) -> (Vec<u64>, Vec<u64>) {
        match &self.dense {
            Some(m) => self.row_counts_with(i, |a, b| m.get(a, b)),
            None => self.row_counts_with(i, |a, b| self.points.distance(a, b)),
        }
    }

    fn row_counts_with(&self, i: usize, dist: impl Fn(usize, usize) -> f64) -> (Vec<u64>, Vec<u64>) {
        let p = self.points.len();
        let eps = self.cfg.epsilon;
        let mut ultra = vec![0u64; p];
        let mut nonzero = vec![0u64; p];
        let from_i: Vec<f64> = (0..p).map(|k| if k > i { dist(i, k) } else { 0.0 }).collect();
        for j in (i + 1)..p {
            let dij = from_i[j];
            if dij <= eps {
                continue;
            }
            for k in (j + 1)..p {
                let dik = from_i[k];
                if dik <= eps {
                    continue;
                }
                let djk = dist(j, k);
                if djk <= eps {
                    continue;
                }
                nonzero[i] += 1;
                nonzero[j] += 1;
                nonzero[k] += 1;
                if classify_triangle(dij, djk, dik, &self.cfg).is_ultrametric() {
                    ultra[i] += 1;
                    ultra[j] += 1;
                    ultra[k] += 1;
                }
            }
        }
        (ultra, nonzero)
    }

    /// Reports for a completed scan.
    pub fn finish(self) -> Result<EmpiricalDistribution> {
        if !self.state.is_complete() {
            return Err(Error::InvalidParameter(format!(
                "scan stopped at row {} of {}",
                self.state.next_row,
                self.points.len()
            )));
        }
        let p = self.points.len();
        let reports = (0..p)
            .map(|w| {
                WordScanReport::new(self.points.labels[w].clone(), p, self.state.nonzero[w], self.state.ultrametric[w])
            })
            .collect();
        EmpiricalDistribution::from_reports(reports)
    }
}

/// Midrank percentile of `word` in the distribution:
/// `100 · (#{c < c_w} + ½ #{c = c_w}) / N`.
pub fn percentile(dist: &EmpiricalDistribution, word: &str) -> Result<f64> {
    let report = dist.report(word).ok_or_else(|| Error::UnknownWord(word.to_string()))?;
    Ok(dist.percentile_of(report.ultrametric_count))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MedianLabel {
    High,
    Low,
}

impl MedianLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            MedianLabel::High => "H",
            MedianLabel::Low => "L",
        }
    }
}

fn median_of_sorted(sorted: &[u64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
    }
}

/// Median of a set of counts.
pub fn median(counts: &[u64]) -> f64 {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    median_of_sorted(&sorted)
}

/// Label each report `H` above the median of the reports' own counts, `L`
/// otherwise (a count equal to the median is `L`).
pub fn median_split(reports: &[WordScanReport]) -> Result<Vec<(String, MedianLabel)>> {
    if reports.len() < 2 {
        return Err(Error::InvalidParameter("median split needs at least 2 reports".into()));
    }
    let counts: Vec<u64> = reports.iter().map(|r| r.ultrametric_count).collect();
    Ok(median_split_at(reports, median(&counts)))
}

/// Label reports against an externally chosen median.
pub fn median_split_at(reports: &[WordScanReport], median: f64) -> Vec<(String, MedianLabel)> {
    reports
        .iter()
        .map(|r| {
            let label = if r.ultrametric_count as f64 > median { MedianLabel::High } else { MedianLabel::Low };
            (r.word.clone(), label)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(word: &str, count: u64) -> WordScanReport {
        WordScanReport::new(word.to_string(), 30, 406, count)
    }

    fn dist_of(counts: &[u64]) -> EmpiricalDistribution {
        EmpiricalDistribution::from_reports(
            counts.iter().enumerate().map(|(i, &c)| report(&format!("w{i}"), c)).collect(),
        )
        .unwrap()
    }

    /// Regular simplex: `n` points pairwise at distance √2.
    fn simplex(n: usize) -> EmbeddedPointSet {
        let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect()).collect();
        EmbeddedPointSet::from_rows(&rows).unwrap()
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn equilateral_anchor_count() {
        let pts = simplex(3);
        let r = word_triangle_count(&pts, "1", &labels(3), &TriangleConfig::default()).unwrap();
        assert_eq!((r.triangles_total, r.triangles_nonzero, r.ultrametric_count), (1, 1, 1));
        assert_eq!(r.alpha_word, 1.0);
    }

    #[test]
    fn thirty_candidates_give_406_triangles() {
        let pts = simplex(30);
        let r = word_triangle_count(&pts, "0", &labels(30), &TriangleConfig::default()).unwrap();
        assert_eq!(r.triangles_total, 406);
        assert_eq!(r.ultrametric_count, 406);
    }

    #[test]
    fn anchor_must_be_a_candidate() {
        let pts = simplex(4);
        let err = word_triangle_count(&pts, "3", &labels(3), &TriangleConfig::default()).unwrap_err();
        assert!(matches!(err, Error::AnchorNotCandidate(_)));
        let mut cands = labels(3);
        cands.push("nope".into());
        assert!(matches!(
            word_triangle_count(&pts, "0", &cands, &TriangleConfig::default()),
            Err(Error::UnknownWord(_))
        ));
    }

    #[test]
    fn coincident_points_are_excluded() {
        let pts = EmbeddedPointSet::from_rows(&[vec![0.0], vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let r = word_triangle_count(&pts, "2", &labels(4), &TriangleConfig::default()).unwrap();
        // pairs {0,1} (zero side), {0,3}, {1,3}: only the last two have no zero side
        assert_eq!(r.triangles_total, 3);
        assert_eq!(r.triangles_nonzero, 2);
    }

    #[test]
    fn equidistant_four_points() {
        let d = scan_all_words(&simplex(4), &TriangleConfig::default()).unwrap();
        assert!(d.reports.iter().all(|r| r.ultrametric_count == 3 && r.triangles_total == 3));
        assert_eq!((d.min, d.max), (3, 3));
    }

    #[test]
    fn chunked_scan_matches_single_pass() {
        let rows: Vec<Vec<f64>> =
            (0..25).map(|i| vec![(i as f64 * 0.37).sin(), (i as f64 * 1.1).cos(), 0.1 * i as f64]).collect();
        let pts = EmbeddedPointSet::from_rows(&rows).unwrap();
        let cfg = TriangleConfig { angle_tolerance_rad: 0.2, ..TriangleConfig::default() };
        let whole = scan_all_words(&pts, &cfg).unwrap();

        let mut scanner = Scanner::new(&pts, &cfg).unwrap();
        scanner.advance(4);
        let saved = scanner.state().clone();
        let mut resumed = Scanner::resume(&pts, &cfg, saved).unwrap();
        while resumed.advance(3) > 0 {}
        assert_eq!(resumed.finish().unwrap(), whole);
    }

    #[test]
    fn unfinished_scan_cannot_finish() {
        let pts = simplex(5);
        let mut scanner = Scanner::new(&pts, &TriangleConfig::default()).unwrap();
        scanner.advance(1);
        assert!(scanner.finish().is_err());
    }

    #[test]
    fn percentile_examples() {
        let mut counts: Vec<u64> = (0..1999).collect();
        counts.push(5000);
        let d = dist_of(&counts);
        assert!((percentile(&d, "w1999").unwrap() - 99.975).abs() < 1e-12);

        let d = dist_of(&[7, 7, 7]);
        assert_eq!(percentile(&d, "w1").unwrap(), 50.0);

        let d = dist_of(&[1, 2, 3, 4]);
        assert_eq!(percentile(&d, "w2").unwrap(), 62.5);
        assert!(matches!(percentile(&d, "zzz"), Err(Error::UnknownWord(_))));
    }

    #[test]
    fn median_split_examples() {
        let labels = |counts: &[u64]| -> Vec<MedianLabel> {
            let reps: Vec<_> = counts.iter().enumerate().map(|(i, &c)| report(&i.to_string(), c)).collect();
            median_split(&reps).unwrap().into_iter().map(|(_, l)| l).collect()
        };
        use MedianLabel::*;
        assert_eq!(labels(&[1, 2, 3]), vec![Low, Low, High]);
        assert_eq!(labels(&[10, 20]), vec![Low, High]);
        assert!(median_split(&[report("a", 1)]).is_err());
    }

    #[test]
    fn median_split_reproduces_published_word_labels() {
        // Full-vocabulary counts for the 30 selected dream-report words.
        use MedianLabel::*;
        let table: [(&str, u64, MedianLabel); 30] = [
            ("Tyler", 132193, Low),
            ("Jared", 126617, Low),
            ("car", 99631, Low),
            ("road", 107924, Low),
            ("Derek", 187027, High),
            ("John", 137802, High),
            ("Jamie", 130304, Low),
            ("Peter", 134052, Low),
            ("arrow", 133917, Low),
            ("dragon", 170157, High),
            ("football", 127036, Low),
            ("Lance", 166112, High),
            ("room", 65332, Low),
            ("bedroom", 129206, Low),
            ("family", 165286, High),
            ("game", 171561, High),
            ("Mabel", 135192, Low),
            ("crew", 128655, Low),
            ("director", 143889, High),
            ("assistant", 135250, Low),
            ("balloon", 138154, High),
            ("ship", 154960, High),
            ("balloons", 147757, High),
            ("pudgy", 131698, Low),
            ("Valerie", 161231, High),
            ("dolly", 140355, High),
            ("cat", 144958, High),
            ("gun", 166147, High),
            ("Howard", 172760, High),
            ("horse", 132675, Low),
        ];
        let reps: Vec<_> = table.iter().map(|&(w, c, _)| report(w, c)).collect();
        let split = median_split(&reps).unwrap();
        for ((word, label), &(_, _, expected)) in split.iter().zip(&table) {
            assert_eq!(*label, expected, "{word}");
        }
    }

    #[test]
    fn alpha_word_arithmetic() {
        let r = WordScanReport::new("max".into(), 2000, 1_996_997, 206_496);
        assert_eq!(r.triangles_total, 1_997_001);
        assert!((r.alpha_word - 0.103403).abs() < 5e-7);
        let r = WordScanReport::new("min".into(), 2000, 1_996_997, 31_346);
        assert!((r.alpha_word - 0.015697).abs() < 5e-7);
    }
}
