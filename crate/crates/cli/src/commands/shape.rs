use umetric::triangle_shape_stats;

use crate::args::ShapeArgs;
use crate::error::CliResult;
use crate::report::{num, Report};

use super::{echo_sampling, echo_triangle, points, triangle_config};

pub(super) fn run(args: &ShapeArgs) -> CliResult<()> {
    let cfg = triangle_config(&args.triangle, Some(&args.sampling))?;
    let mut report = Report::new("shape");
    let src = points::load(&args.input, &mut report)?;
    echo_sampling(&mut report, &cfg);
    echo_triangle(&mut report, &args.triangle, &cfg);

    let pairs = triangle_shape_stats(&src, &cfg)?;
    let total = umetric::choose3(src.len());
    let budget = (cfg.sample_size as u64).saturating_mul(cfg.repetitions as u64);
    report
        .summary("points", src.len() as u64)
        .summary("method", if total <= budget { "exhaustive" } else { "sampled" })
        .summary("triangles", pairs.len() as u64)
        .delimiter(" ")
        .columns(&["median_over_max", "min_over_max"]);
    for (med, min) in pairs {
        report.row(vec![num(med), num(min)]);
    }
    report.emit(args.output.format, args.output.out.as_ref())
}
