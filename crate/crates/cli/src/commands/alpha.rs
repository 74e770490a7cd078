use serde_json::Value;
use umetric::{alpha_exhaustive, alpha_sampled, embed, factorize, io, normalize, DistanceSource, PointKind};

use crate::args::AlphaArgs;
use crate::error::{CliError, CliResult};
use crate::report::{num, write_file, FileDigest, Report};

use super::{echo_sampling, echo_triangle, load_matrix, restrict, triangle_config};

pub(super) fn run(args: &AlphaArgs) -> CliResult<()> {
    let base = triangle_config(&args.triangle, Some(&args.sampling))?;
    let loaded = load_matrix(&args.matrix)?;

    let mut report = Report::new("alpha");
    report
        .config("matrix", args.matrix.display().to_string())
        .config("top_words", args.top_words.iter().map(|t| Value::from(t.to_string())).collect::<Vec<_>>())
        .config("method", if args.exhaustive { "exhaustive" } else { "sampled" });
    echo_sampling(&mut report, &base);
    report.config("seed_rule", "seed + index of the vocabulary size in top_words");
    echo_triangle(&mut report, &args.triangle, &base);
    for d in loaded.digests {
        report.input(d);
    }
    report.columns(&[
        "texts",
        "orig_dim",
        "factor_dim",
        "alpha_mean",
        "alpha_sdev",
        "seed",
        "ultrametric",
        "evaluated",
        "degenerate",
        "per_rep_alpha",
    ]);

    for (k, &top) in args.top_words.iter().enumerate() {
        let tdm = restrict(&loaded.tdm, top)?;
        if tdm.n_cols() < 2 {
            return Err(CliError::Data(format!("top_words {top} leaves {} column(s); need at least 2", tdm.n_cols())));
        }
        let fs = factorize(&normalize(&tdm)?)?;
        if fs.rank() == 0 {
            return Err(CliError::Data(format!("no factor structure for top_words {top}: the table has rank 0")));
        }
        if let Some(stem) = &args.export_factors {
            let mut name = stem.as_os_str().to_owned();
            name.push(format!("-{top}.factors"));
            let path = std::path::PathBuf::from(name);
            let text = io::format_factor_space(&fs);
            write_file(&path, text.as_bytes())?;
            report.output(FileDigest::of_bytes(&path, text.as_bytes()));
        }
        let cfg = umetric::TriangleConfig { seed: base.seed.wrapping_add(k as u64), ..base };
        let src = DistanceSource::from(embed(&fs, PointKind::Rows));
        let est = if args.exhaustive { alpha_exhaustive(&src, &cfg)? } else { alpha_sampled(&src, &cfg)? };
        log::info!("top_words {top}: {} texts, alpha {:.4}", tdm.n_rows(), est.mean);
        report.row(vec![
            Value::from(tdm.n_rows() as u64),
            Value::from(tdm.n_cols() as u64),
            Value::from(fs.rank() as u64),
            num(est.mean),
            num(est.sdev),
            Value::from(cfg.seed),
            Value::from(est.ultrametric_count),
            Value::from(est.evaluated_count),
            Value::from(est.degenerate_count),
            Value::Array(est.per_rep_alphas.iter().map(|&a| num(a)).collect()),
        ]);
    }
    report.emit(args.output.format, args.output.out.as_ref())
}
