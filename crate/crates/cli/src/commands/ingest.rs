use sha2::{Digest, Sha256};
use umetric::{build_matrix, io, segment_text, Document};

use crate::args::IngestArgs;
use crate::error::{CliError, CliResult};
use crate::report::{FileDigest, Report};

pub(super) fn run(args: IngestArgs) -> CliResult<()> {
    let (source, docs) = match (&args.corpus_dir, &args.manifest) {
        (Some(dir), None) => (dir, io::read_corpus_dir(dir)),
        (None, Some(manifest)) => (manifest, io::read_manifest(manifest)),
        _ => return Err(CliError::Usage("give either a corpus directory or --manifest".into())),
    };
    let docs = docs.map_err(|e| CliError::Data(format!("{}: {e}", source.display())))?;
    if docs.is_empty() {
        return Err(CliError::Data(format!("{}: no documents", source.display())));
    }

    let mut report = Report::new("ingest");
    report
        .config(if args.manifest.is_some() { "manifest" } else { "corpus_dir" }, source.display().to_string())
        .config("segment", args.segment.map_or(serde_json::Value::Null, |s| (s as u64).into()))
        .config("out", args.out.display().to_string());

    // One digest over the whole corpus: ids and texts in reading order.
    let mut hasher = Sha256::new();
    for d in &docs {
        hasher.update(d.id.as_bytes());
        hasher.update([0]);
        hasher.update(d.text.as_bytes());
        hasher.update([0]);
    }
    let bytes: usize = docs.iter().map(|d| d.text.len()).sum();
    report.input(FileDigest {
        path: source.display().to_string(),
        sha256: format!("{:x}", hasher.finalize()),
        bytes: bytes as u64,
    });

    let documents = docs.len();
    let docs: Vec<Document> = match args.segment {
        None => docs,
        Some(0) => return Err(CliError::Usage("--segment must be at least 1".into())),
        Some(max) => {
            let mut out = Vec::with_capacity(docs.len());
            for d in &docs {
                out.extend(segment_text(d, max)?);
            }
            out
        }
    };
    let tdm = build_matrix(&docs)?;
    let matrix_path = io::save_matrix(&tdm, &args.out)?;
    let (vocab_path, rows_path) = io::sidecar_paths(&matrix_path);
    for p in [&matrix_path, &vocab_path, &rows_path] {
        report.output(FileDigest::of_file(p)?);
    }
    report
        .summary("documents", documents as u64)
        .summary("segments", docs.len() as u64)
        .summary("rows", tdm.n_rows() as u64)
        .summary("vocabulary", tdm.n_cols() as u64)
        .summary("nonzero", tdm.nnz() as u64)
        .summary("tokens", tdm.grand_total());
    report.emit(args.format, None)
}
