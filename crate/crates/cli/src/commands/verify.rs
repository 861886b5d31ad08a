use qpp_core::analysis::{
    commuting_fraction, degeneracy_report, uniformity_chi_square, xor_subgroup_report,
    CommuteMode, CommuteReport, SecrecyReport, UniformityReport, MAX_EXACT_COMMUTE,
};
use qpp_core::{Generator, WordSize};
use serde_json::json;

use super::{word_size, Outcome};
use crate::args::{Suite, VerifyArgs};
use crate::error::CliError;
use crate::output::{record, Printer};

pub const DEFAULT_SEED: u64 = 20_201_111;
const DEFAULT_UNIFORM_SAMPLES: u64 = 100_000;
const DEFAULT_COMMUTE_SAMPLES: u64 = 1_000_000;

fn seed(args: &VerifyArgs) -> u64 {
    if args.fresh_seed {
        rand::random()
    } else {
        args.seed.unwrap_or(DEFAULT_SEED)
    }
}

fn n_or(args: &VerifyArgs, default: u32) -> Result<WordSize, CliError> {
    word_size(args.n.unwrap_or(default))
}

pub fn run(args: &VerifyArgs, printer: Printer) -> Outcome {
    let seed = seed(args);
    match args.suite {
        Suite::Degeneracy => degeneracy(n_or(args, 3)?, printer),
        Suite::Xor => xor(n_or(args, 8)?, printer),
        Suite::Commute => commute(n_or(args, 2)?, args.samples, seed, printer).map(|(ok, _)| ok),
        Suite::Uniform => uniform(
            n_or(args, 3)?,
            args.plaintext,
            args.samples,
            seed,
            args.generator,
            printer,
        )
        .map(|(ok, _)| ok),
        Suite::All => all(seed, printer),
    }
}

fn degeneracy(n: WordSize, printer: Printer) -> Outcome {
    let r = degeneracy_report(n)?;
    let ok = r.passed();
    let text = if ok {
        format!(
            "degeneracy n={}: {} for all {} (m,c) pairs; group order {}\nPASS",
            r.n, r.expected_per_pair, r.pairs, r.group_order
        )
    } else {
        format!(
            "degeneracy n={}: counts range {}..{}, expected {} for all {} pairs; group order {}\nFAIL",
            r.n, r.min_count, r.max_count, r.expected_per_pair, r.pairs, r.group_order
        )
    };
    let body = json!({
        "suite": "degeneracy",
        "n": r.n,
        "group_order": r.group_order,
        "expected_per_pair": r.expected_per_pair,
        "pairs": r.pairs,
        "min_count": r.min_count,
        "max_count": r.max_count,
        "passed": ok,
    });
    printer.emit(&text, &record("verify", body));
    Ok(ok)
}

fn xor(n: WordSize, printer: Printer) -> Outcome {
    let r = xor_subgroup_report(n)?;
    let ok = r.passed();
    let pairs = if r.commuting_pairs == r.total_pairs {
        "all pairs commute".to_string()
    } else {
        format!("{}/{} pairs commute", r.commuting_pairs, r.total_pairs)
    };
    let text = format!(
        "xor n={}: {} involutions, {}, {}\n{}",
        r.n,
        r.involutions,
        pairs,
        if r.closure_holds { "closed" } else { "NOT closed" },
        if ok { "PASS" } else { "FAIL" }
    );
    let mut body = serde_json::to_value(&r).expect("serializes");
    body["suite"] = json!("xor");
    body["passed"] = json!(ok);
    printer.emit(&text, &record("verify", body));
    Ok(ok)
}

/// Exact for `n <= 2`, sampled above. Passes when the fraction is below 1 for
/// `n > 1` (non-commuting pairs exist) and exactly 1 for `n = 1`.
fn commute(
    n: WordSize,
    samples: Option<u64>,
    seed: u64,
    printer: Printer,
) -> Result<(bool, CommuteReport), CliError> {
    let mode = if n.bits() <= MAX_EXACT_COMMUTE {
        CommuteMode::Exact
    } else {
        CommuteMode::Sampled {
            samples: samples.unwrap_or(DEFAULT_COMMUTE_SAMPLES),
            seed,
        }
    };
    let r = commuting_fraction(n, mode)?;
    let ok = if n.bits() == 1 {
        r.commuting == r.total
    } else {
        r.commuting < r.total
    };
    let how = match mode {
        CommuteMode::Exact => "exact fraction".to_string(),
        CommuteMode::Sampled { seed, .. } => format!("sampled fraction (seed {seed})"),
    };
    let text = format!(
        "commute n={}: {how} {}/{} = {:.6}\n{}",
        r.n,
        r.commuting,
        r.total,
        r.fraction,
        if ok { "PASS" } else { "FAIL" }
    );
    let mut body = serde_json::to_value(&r).expect("serializes");
    body["suite"] = json!("commute");
    body["passed"] = json!(ok);
    printer.emit(&text, &record("verify", body));
    Ok((ok, r))
}

/// Only the unbiased generator is asserted; others are measured and reported.
fn uniform(
    n: WordSize,
    plaintext: u32,
    samples: Option<u64>,
    seed: u64,
    generator: Generator,
    printer: Printer,
) -> Result<(bool, UniformityReport), CliError> {
    let samples = samples.unwrap_or(DEFAULT_UNIFORM_SAMPLES);
    let r = uniformity_chi_square(n, plaintext, samples, seed, generator)?;
    let asserted = generator == Generator::Unbiased;
    let verdict = match (asserted, r.passed()) {
        (true, Some(true)) => "PASS",
        (true, Some(false)) => "FAIL",
        (true, None) => "FAIL (no tabulated critical value for this dof)",
        (false, _) => "measured only (biased generator, not asserted)",
    };
    let ok = !asserted || r.passed() == Some(true);
    let critical = r
        .critical_value
        .map(|c| format!("{c:.3}"))
        .unwrap_or_else(|| "n/a".into());
    let text = format!(
        "uniform n={} m={plaintext} generator={}: chi-square {:.3}, dof {}, critical {critical} at 0.001, {} samples, seed {}\n{verdict}",
        r.n, r.generator, r.statistic, r.dof, r.samples, r.seed
    );
    let mut body = serde_json::to_value(&r).expect("serializes");
    body["suite"] = json!("uniform");
    body["plaintext"] = json!(plaintext);
    body["asserted"] = json!(asserted);
    body["passed"] = json!(ok);
    printer.emit(&text, &record("verify", body));
    Ok((ok, r))
}

fn all(seed: u64, printer: Printer) -> Outcome {
    let n3 = word_size(3)?;
    let mut ok = degeneracy(n3, printer)?;
    ok &= xor(word_size(8)?, printer)?;
    let (commute_ok, _) = commute(word_size(2)?, None, seed, printer)?;
    ok &= commute_ok;
    let (sampled_ok, sampled) = commute(n3, None, seed, printer)?;
    ok &= sampled_ok && sampled.fraction < 0.01;
    let (uniform_ok, uniformity) = uniform(n3, 3, None, seed, Generator::Unbiased, printer)?;
    ok &= uniform_ok;

    let secrecy = SecrecyReport::new(n3, &uniformity, &sampled);
    let text = format!(
        "secrecy n=3: group order {}, degeneracy per pair {}, uniform {}, chi-square {:.3}, commuting fraction {:.6}\n\
         note: reuse of a pad across messages is not covered by these single-use checks\n{}",
        secrecy.group_order,
        secrecy.degeneracy_per_pair,
        secrecy.uniform,
        secrecy.chi_square_statistic,
        secrecy.commuting_pair_fraction,
        if ok { "ALL PASS" } else { "SOME FAILED" }
    );
    let mut body = serde_json::to_value(&secrecy).expect("serializes");
    body["suite"] = json!("all");
    body["passed"] = json!(ok);
    printer.emit(&text, &record("verify", body));
    Ok(ok)
}
