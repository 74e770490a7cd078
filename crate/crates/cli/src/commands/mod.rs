mod alpha;
mod ingest;
mod points;
mod rammal;
mod shape;
mod synth;
mod wordscan;

use std::path::Path;

use umetric::{io, TermDocumentMatrix, TriangleConfig};

use crate::args::{Command, SamplingArgs, TopWords, TriangleArgs};
use crate::error::{CliError, CliResult};
use crate::report::{num, read_bytes, FileDigest, Report};

pub fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Ingest(a) => ingest::run(a),
        Command::Alpha(a) => with_workers(a.output.workers, || alpha::run(&a)),
        Command::Wordscan(a) => with_workers(a.output.workers, || wordscan::run(&a)),
        Command::Shape(a) => with_workers(a.output.workers, || shape::run(&a)),
        Command::Rammal(a) => with_workers(a.output.workers, || rammal::run(&a)),
        Command::Synth(a) => synth::run(a),
    }
}

/// Run `f` on a pool of `workers` threads (the global pool when `None`).
fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> CliResult<T> + Send) -> CliResult<T> {
    match workers {
        None => f(),
        Some(0) => Err(CliError::Usage("--workers must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Numerical(format!("cannot start {n} workers: {e}")))?
            .install(f),
    }
}

/// Triangle settings from the flags; without `--angle-tol-deg` the reference
/// constant is kept as is.
fn triangle_config(tri: &TriangleArgs, sampling: Option<&SamplingArgs>) -> CliResult<TriangleConfig> {
    let mut cfg = TriangleConfig { epsilon: tri.epsilon, ..TriangleConfig::default() };
    if let Some(deg) = tri.angle_tol_deg {
        cfg.angle_tolerance_rad = deg.to_radians();
    }
    if let Some(s) = sampling {
        cfg.seed = s.seed;
        cfg.sample_size = s.samples;
        cfg.repetitions = s.reps;
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn echo_triangle(report: &mut Report, tri: &TriangleArgs, cfg: &TriangleConfig) {
    report
        .config("epsilon", num(cfg.epsilon))
        .config("angle_tol_deg", tri.angle_tol_deg.map_or(serde_json::Value::Null, num))
        .config("angle_tol_rad", num(cfg.angle_tolerance_rad));
}

fn echo_sampling(report: &mut Report, cfg: &TriangleConfig) {
    report.config("seed", cfg.seed).config("samples", cfg.sample_size as u64).config("reps", cfg.repetitions as u64);
}

/// A count matrix and the digests of the files it came from.
struct LoadedMatrix {
    tdm: TermDocumentMatrix,
    digests: Vec<FileDigest>,
}

fn load_matrix(path: &Path) -> CliResult<LoadedMatrix> {
    let (vocab_path, rows_path) = io::sidecar_paths(path);
    let matrix = read_bytes(path)?;
    let vocab = read_bytes(&vocab_path)?;
    let rows = rows_path.exists().then(|| read_bytes(&rows_path)).transpose()?;
    let mut digests = vec![FileDigest::of_bytes(path, &matrix), FileDigest::of_bytes(&vocab_path, &vocab)];
    if let Some(r) = &rows {
        digests.push(FileDigest::of_bytes(&rows_path, r));
    }
    let text = |p: &Path, b: Vec<u8>| {
        String::from_utf8(b).map_err(|_| CliError::Data(format!("{} is not valid UTF-8", p.display())))
    };
    let matrix = text(path, matrix)?;
    let vocab = text(&vocab_path, vocab)?;
    let rows = rows.map(|r| text(&rows_path, r)).transpose()?;
    let tdm = io::parse_matrix(&matrix, &vocab, rows.as_deref())
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(LoadedMatrix { tdm, digests })
}

fn restrict(tdm: &TermDocumentMatrix, top: TopWords) -> CliResult<TermDocumentMatrix> {
    match top {
        TopWords::All => Ok(tdm.clone()),
        TopWords::Count(m) => Ok(umetric::select_top_words(tdm, m)?),
    }
}
