use umetric::rammal_index;

use crate::args::RammalArgs;
use crate::error::CliResult;
use crate::report::{num, Report};

use super::points;

pub(super) fn run(args: &RammalArgs) -> CliResult<()> {
    let mut report = Report::new("rammal");
    let src = points::load(&args.input, &mut report)?;
    let index = rammal_index(&src)?;
    report.summary("points", src.len() as u64).summary("rammal_index", num(index));
    report.emit(args.output.format, args.output.out.as_ref())
}
