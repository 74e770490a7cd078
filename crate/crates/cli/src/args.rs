use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "umetric", version, about = "Correspondence analysis and ultrametricity of text corpora")]
pub struct Cli {
    /// Log verbosity (error, warn, info, debug, trace); RUST_LOG also works.
    #[arg(long, global = true, default_value = "warn")]
    pub log_level: String,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a term-document count matrix from a corpus.
    Ingest(IngestArgs),
    /// Ultrametricity coefficient of the document cloud for each vocabulary size.
    Alpha(AlphaArgs),
    /// Word-anchored triangle counts over the word cloud.
    Wordscan(WordscanArgs),
    /// Triangle shape ratios (median/max, min/max side) for a scatter plot.
    Shape(ShapeArgs),
    /// Subdominant-ultrametric index of a point cloud or distance matrix.
    Rammal(RammalArgs),
    /// Synthetic inputs: random dendrograms and sparse hypercube data.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Record,
}

/// A vocabulary size: a word count or the whole vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopWords {
    All,
    Count(usize),
}

impl FromStr for TopWords {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(TopWords::All);
        }
        match s.parse::<usize>() {
            Ok(0) => Err("word count must be at least 1".into()),
            Ok(m) => Ok(TopWords::Count(m)),
            Err(_) => Err(format!("expected a word count or \"all\", got {s:?}")),
        }
    }
}

impl fmt::Display for TopWords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopWords::All => f.write_str("all"),
            TopWords::Count(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TriangleArgs {
    /// Sides at or below this are zero.
    #[arg(long, default_value_t = umetric::triangle::DEFAULT_EPSILON)]
    pub epsilon: f64,

    /// Base-angle tolerance in degrees [default: 2.0, applied as 0.03490656 rad].
    #[arg(long)]
    pub angle_tol_deg: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SamplingArgs {
    #[arg(long, env = "UMETRIC_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Triangles drawn per repetition.
    #[arg(long, default_value_t = umetric::triangle::DEFAULT_SAMPLE_SIZE)]
    pub samples: usize,

    #[arg(long, default_value_t = umetric::triangle::DEFAULT_REPETITIONS)]
    pub reps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Points {
    Rows,
    Columns,
}

/// A point cloud from either a count matrix (through correspondence
/// analysis) or a distance-matrix file.
#[derive(Debug, Clone, Args)]
pub struct PointInputArgs {
    /// Count matrix (`.mtx` with sidecars) or, with --distances, a distance matrix.
    pub input: PathBuf,

    /// Read INPUT as a distance-matrix file.
    #[arg(long)]
    pub distances: bool,

    /// Vocabulary size used before correspondence analysis.
    #[arg(long, default_value = "all", conflicts_with = "distances")]
    pub top_words: TopWords,

    /// Which side of the factor space forms the point cloud.
    #[arg(long, value_enum, default_value = "rows", conflicts_with = "distances")]
    pub points: Points,
}

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    /// Directory with one plain-text file per document.
    #[arg(required_unless_present = "manifest", conflicts_with = "manifest")]
    pub corpus_dir: Option<PathBuf>,

    /// `id,path` manifest instead of a directory.
    #[arg(long)]
    pub manifest: Option<PathBuf>,

    /// Split documents longer than this many characters at whitespace.
    #[arg(long)]
    pub segment: Option<usize>,

    /// Output stem; writes STEM.mtx, STEM.vocab and STEM.rows.
    #[arg(long)]
    pub out: PathBuf,

    #[arg(long, value_enum, default_value = "tsv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct AlphaArgs {
    /// Count matrix (`.mtx`, with `.vocab` and `.rows` sidecars).
    pub matrix: PathBuf,

    /// Comma-separated vocabulary sizes; `all` is the full vocabulary.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub top_words: Vec<TopWords>,

    /// Enumerate every triangle instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,

    /// Also write each factor space to STEM-<m>.factors.
    #[arg(long)]
    pub export_factors: Option<PathBuf>,

    #[command(flatten)]
    pub sampling: SamplingArgs,

    #[command(flatten)]
    pub triangle: TriangleArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanMode {
    /// Triangles among the listed words only.
    Restricted,
    /// Triangles among every word of the vocabulary.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MedianOver {
    /// The reported words.
    Selected,
    /// Every scanned word.
    All,
}

#[derive(Debug, Clone, Args)]
pub struct WordscanArgs {
    pub matrix: PathBuf,

    /// Vocabulary size (a single count or `all`).
    #[arg(long, default_value = "all")]
    pub top_words: TopWords,

    /// Comma-separated words to report, or `all`.
    #[arg(long, default_value = "all")]
    pub words: String,

    #[arg(long, value_enum, default_value = "restricted")]
    pub mode: ScanMode,

    /// Word set whose median splits words into H and L.
    #[arg(long, value_enum, default_value = "selected")]
    pub median_over: MedianOver,

    /// Checkpoint file; an existing one written for the same inputs is resumed.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,

    /// Anchor rows processed between checkpoints.
    #[arg(long, default_value_t = 64)]
    pub checkpoint_every: usize,

    /// Stop after this many anchor rows, leaving the checkpoint to resume from.
    #[arg(long, requires = "checkpoint")]
    pub max_rows: Option<usize>,

    #[command(flatten)]
    pub triangle: TriangleArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ShapeArgs {
    #[command(flatten)]
    pub input: PointInputArgs,

    #[command(flatten)]
    pub sampling: SamplingArgs,

    #[command(flatten)]
    pub triangle: TriangleArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RammalArgs {
    #[command(flatten)]
    pub input: PointInputArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[command(subcommand)]
    pub kind: SynthKind,
}

#[derive(Debug, Clone, Subcommand)]
pub enum SynthKind {
    /// Cophenetic distances of a random binary dendrogram.
    Dendrogram {
        #[arg(long)]
        leaves: usize,
        #[arg(long, env = "UMETRIC_SEED", default_value_t = 0)]
        seed: u64,
        /// Distance-matrix file to write.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Distinct random 0/1 vectors written as a count matrix.
    Hypercube {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        density: f64,
        #[arg(long, env = "UMETRIC_SEED", default_value_t = 0)]
        seed: u64,
        /// Output stem; writes STEM.mtx, STEM.vocab and STEM.rows.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
}
