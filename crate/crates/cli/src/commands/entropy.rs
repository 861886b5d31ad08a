use qpp_core::analysis::entropy_report;

use super::{word_size, Outcome};
use crate::args::ShapeArgs;
use crate::output::{record, Printer};

pub fn run(args: &ShapeArgs, printer: Printer) -> Outcome {
    let n = word_size(args.n)?;
    let r = entropy_report(n, args.tables as u64)?;
    let text = format!(
        "n = {}, M = {}\n\
         otp entropy: {} bits (M*n)\n\
         qpp entropy: {:.3} bits (M*log2(2^n!))\n\
         split form:  {:.3} bits (M*n + M*log2((2^n-1)!))\n\
         group order: 2^n! = 10^{:.3}",
        r.n, r.tables, r.otp_bits, r.qpp_bits, r.qpp_bits_split, r.log10_group_order
    );
    printer.emit(&text, &record("entropy", &r));
    Ok(true)
}
