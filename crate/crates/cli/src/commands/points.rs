//! Point clouds for `shape` and `rammal`.

use umetric::{embed, factorize, io, normalize, DistanceSource, PointKind};

use crate::args::{PointInputArgs, Points};
use crate::error::{CliError, CliResult};
use crate::report::{read_bytes, FileDigest, Report};

use super::{load_matrix, restrict};

pub(super) fn load(args: &PointInputArgs, report: &mut Report) -> CliResult<DistanceSource> {
    report.config("input", args.input.display().to_string());
    if args.distances {
        report.config("input_kind", "distances");
        let bytes = read_bytes(&args.input)?;
        report.input(FileDigest::of_bytes(&args.input, &bytes));
        let text = String::from_utf8(bytes)
            .map_err(|_| CliError::Data(format!("{} is not valid UTF-8", args.input.display())))?;
        let m =
            io::parse_distance_matrix(&text).map_err(|e| CliError::Data(format!("{}: {e}", args.input.display())))?;
        return Ok(m.into());
    }
    let kind = match args.points {
        Points::Rows => PointKind::Rows,
        Points::Columns => PointKind::Columns,
    };
    report
        .config("input_kind", "matrix")
        .config("top_words", args.top_words.to_string())
        .config("points", if kind == PointKind::Rows { "rows" } else { "columns" });
    let loaded = load_matrix(&args.input)?;
    for d in loaded.digests {
        report.input(d);
    }
    let tdm = restrict(&loaded.tdm, args.top_words)?;
    let fs = factorize(&normalize(&tdm)?)?;
    if fs.rank() == 0 {
        return Err(CliError::Data("no factor structure: the table has rank 0".into()));
    }
    report.summary("factor_dim", fs.rank() as u64);
    Ok(embed(&fs, kind).into())
}
