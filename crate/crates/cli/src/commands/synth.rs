use umetric::synth::{random_ultrametric_matrix, sparse_hypercube_points, DendrogramSpec};
use umetric::{io, TermDocumentMatrix};

use crate::args::{SynthArgs, SynthKind};
use crate::error::CliResult;
use crate::report::{num, write_file, FileDigest, Report};

pub(super) fn run(args: SynthArgs) -> CliResult<()> {
    match args.kind {
        SynthKind::Dendrogram { leaves, seed, out, format } => {
            let m = random_ultrametric_matrix(DendrogramSpec { leaf_count: leaves, seed })?;
            let text = io::format_distance_matrix(&m);
            write_file(&out, text.as_bytes())?;
            let mut report = Report::new("synth dendrogram");
            report
                .config("leaves", leaves as u64)
                .config("seed", seed)
                .config("out", out.display().to_string())
                .output(FileDigest::of_bytes(&out, text.as_bytes()));
            report.emit(format, None)
        }
        SynthKind::Hypercube { n, dim, density, seed, out, format } => {
            let rows = sparse_hypercube_points(n, dim, density, seed)?;
            let triples = rows
                .iter()
                .enumerate()
                .flat_map(|(i, row)| row.iter().enumerate().filter(|(_, &b)| b == 1).map(move |(j, _)| (i, j, 1u64)));
            let width = dim.to_string().len();
            let tdm = TermDocumentMatrix::from_triples(
                (0..n).map(|i| format!("p{i}")).collect(),
                (0..dim).map(|j| format!("d{j:0width$}")).collect(),
                triples.collect::<Vec<_>>(),
            )?;
            let matrix_path = io::save_matrix(&tdm, &out)?;
            let (vocab_path, rows_path) = io::sidecar_paths(&matrix_path);
            let mut report = Report::new("synth hypercube");
            report
                .config("n", n as u64)
                .config("dim", dim as u64)
                .config("density", num(density))
                .config("seed", seed)
                .config("out", out.display().to_string());
            for p in [&matrix_path, &vocab_path, &rows_path] {
                report.output(FileDigest::of_file(p)?);
            }
            // Empty rows and never-set coordinates are pruned from the table.
            report.summary("rows", tdm.n_rows() as u64).summary("columns", tdm.n_cols() as u64);
            report.emit(format, None)
        }
    }
}
