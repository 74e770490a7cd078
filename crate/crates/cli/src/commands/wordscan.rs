use std::collections::{HashMap, HashSet};

use serde_json::Value;
use umetric::wordscan::{median, median_split_at, Scanner};
use umetric::{embed, factorize, normalize, EmbeddedPointSet, PointKind, TriangleConfig};

use crate::args::{MedianOver, ScanMode, WordscanArgs};
use crate::checkpoint;
use crate::error::{CliError, CliResult};
use crate::report::{num, sha256_hex, Report};

use super::{echo_triangle, load_matrix, restrict, triangle_config};

const NEAREST_SHOWN: usize = 3;

pub(super) fn run(args: &WordscanArgs) -> CliResult<()> {
    let cfg = triangle_config(&args.triangle, None)?;
    if args.checkpoint_every == 0 {
        return Err(CliError::Usage("--checkpoint-every must be at least 1".into()));
    }
    let loaded = load_matrix(&args.matrix)?;
    let tdm = restrict(&loaded.tdm, args.top_words)?;
    let fs = factorize(&normalize(&tdm)?)?;
    if fs.rank() == 0 {
        return Err(CliError::Data("no factor structure: the table has rank 0".into()));
    }
    let cloud = embed(&fs, PointKind::Columns);
    let selected = resolve_words(&args.words, &cloud)?;
    let scanned = match args.mode {
        ScanMode::Full => cloud.clone(),
        ScanMode::Restricted => subset(&cloud, &selected)?,
    };
    if args.median_over == MedianOver::All && args.mode == ScanMode::Restricted && args.words != "all" {
        log::warn!("--median-over all in restricted mode uses the listed words only");
    }

    let mut report = Report::new("wordscan");
    report
        .config("matrix", args.matrix.display().to_string())
        .config("top_words", args.top_words.to_string())
        .config("words", args.words.clone())
        .config("mode", if args.mode == ScanMode::Full { "full" } else { "restricted" })
        .config("median_over", if args.median_over == MedianOver::All { "all" } else { "selected" });
    echo_triangle(&mut report, &args.triangle, &cfg);
    for d in &loaded.digests {
        report.input(d.clone());
    }

    let fingerprint = {
        let mut key: String = loaded.digests.iter().map(|d| format!("{}\n", d.sha256)).collect();
        key.push_str(&format!(
            "{}\n{:?}\n{}\n{:016x}\n{:016x}\n",
            args.top_words,
            args.mode,
            scanned.labels.join(","),
            cfg.epsilon.to_bits(),
            cfg.angle_tolerance_rad.to_bits()
        ));
        sha256_hex(key.as_bytes())
    };
    let Some(dist) = scan(&scanned, &cfg, args, &fingerprint)? else {
        return Ok(());
    };

    let by_word: HashMap<&str, usize> = dist.reports.iter().enumerate().map(|(i, r)| (r.word.as_str(), i)).collect();
    let reports: Vec<_> = selected.iter().map(|w| dist.reports[by_word[w.as_str()]].clone()).collect();
    let split_median = match args.median_over {
        MedianOver::Selected => median(&reports.iter().map(|r| r.ultrametric_count).collect::<Vec<_>>()),
        MedianOver::All => dist.median(),
    };
    let labels = median_split_at(&reports, split_median);

    report
        .summary("factor_dim", fs.rank() as u64)
        .summary("scanned_words", dist.len() as u64)
        .summary("triangles_per_word", umetric::choose2(scanned.len() - 1))
        .summary("distribution_min", dist.min)
        .summary("distribution_max", dist.max)
        .summary("distribution_median", num(dist.median()))
        .summary("split_median", num(split_median))
        .columns(&[
            "word",
            "candidate_set_size",
            "triangles_total",
            "triangles_nonzero",
            "ultrametric_count",
            "alpha_word",
            "percentile",
            "label",
        ]);
    for (r, (_, label)) in reports.iter().zip(labels) {
        report.row(vec![
            Value::from(r.word.clone()),
            Value::from(r.candidate_set_size as u64),
            Value::from(r.triangles_total),
            Value::from(r.triangles_nonzero),
            Value::from(r.ultrametric_count),
            num(r.alpha_word),
            num(dist.percentile_of(r.ultrametric_count)),
            Value::from(label.as_str()),
        ]);
    }
    report.emit(args.output.format, args.output.out.as_ref())
}

fn scan(
    points: &EmbeddedPointSet,
    cfg: &TriangleConfig,
    args: &WordscanArgs,
    fingerprint: &str,
) -> CliResult<Option<umetric::EmpiricalDistribution>> {
    let Some(path) = &args.checkpoint else {
        let mut scanner = Scanner::new(points, cfg)?;
        scanner.run_to_end();
        return Ok(Some(scanner.finish()?));
    };
    let mut scanner = match checkpoint::load(path, fingerprint, points.len())? {
        Some(state) => {
            log::info!("resuming {} at row {} of {}", path.display(), state.next_row, points.len());
            Scanner::resume(points, cfg, state)?
        }
        None => Scanner::new(points, cfg)?,
    };
    let mut budget = args.max_rows.unwrap_or(usize::MAX);
    while !scanner.state().is_complete() {
        if budget == 0 {
            eprintln!(
                "umetric: scan paused at row {} of {}; rerun with the same arguments to resume",
                scanner.state().next_row,
                points.len()
            );
            return Ok(None);
        }
        let done = scanner.advance(args.checkpoint_every.min(budget));
        budget -= done;
        checkpoint::save(path, fingerprint, scanner.state())?;
        log::info!("scanned {} of {} rows", scanner.state().next_row, points.len());
    }
    Ok(Some(scanner.finish()?))
}

/// Words named on the command line, lower-cased and de-duplicated in order.
fn resolve_words(spec: &str, cloud: &EmbeddedPointSet) -> CliResult<Vec<String>> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(cloud.labels.clone());
    }
    let mut seen = HashSet::new();
    let words: Vec<String> =
        spec.split(',').map(|w| w.trim().to_lowercase()).filter(|w| !w.is_empty() && seen.insert(w.clone())).collect();
    if words.is_empty() {
        return Err(CliError::Usage("--words lists no words".into()));
    }
    let unknown: Vec<String> = words
        .iter()
        .filter(|w| cloud.index_of(w).is_none())
        .map(|w| format!("{w:?} (nearest: {})", nearest(w, &cloud.labels).join(", ")))
        .collect();
    if !unknown.is_empty() {
        return Err(CliError::Data(format!("not in the vocabulary: {}", unknown.join("; "))));
    }
    Ok(words)
}

/// Vocabulary words closest to `word` by edit distance, ties in vocabulary order.
fn nearest(word: &str, vocab: &[String]) -> Vec<String> {
    let mut scored: Vec<(usize, usize)> =
        vocab.iter().enumerate().map(|(i, v)| (strsim::levenshtein(word, v), i)).collect();
    scored.sort_unstable();
    scored.iter().take(NEAREST_SHOWN).map(|&(_, i)| vocab[i].clone()).collect()
}

fn subset(cloud: &EmbeddedPointSet, words: &[String]) -> CliResult<EmbeddedPointSet> {
    let mut coords = Vec::with_capacity(words.len() * cloud.dim());
    for w in words {
        let i = cloud.index_of(w).expect("resolved word");
        coords.extend_from_slice(cloud.point(i));
    }
    Ok(EmbeddedPointSet::new(coords, cloud.dim(), words.to_vec(), cloud.kind)?)
}
