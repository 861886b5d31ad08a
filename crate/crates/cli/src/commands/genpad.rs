use qpp_core::analysis::entropy_report;
use qpp_core::padfile::encode_pad;
use qpp_core::padgen::{generate_pad, required_key_bits, BitSource, KeyMaterial, RngBits};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use super::{word_size, Outcome};
use crate::args::GenpadArgs;
use crate::error::{exit, CliError};
use crate::io::{read_all, write_all};
use crate::output::{record, Printer};

#[derive(Debug, Serialize)]
struct Summary {
    n: u8,
    tables: usize,
    generator: String,
    bits_consumed: u64,
    key_bits_available: Option<u64>,
    unsafe_dev_key: bool,
    pad_file: String,
    pad_bytes: u64,
    otp_entropy_bits: u64,
    qpp_entropy_bits: f64,
}

pub fn run(args: &GenpadArgs, printer: Printer) -> Outcome {
    let n = word_size(args.shape.n)?;
    let tables = args.shape.tables;
    let generator = args.generator;
    let fixed_cost = match generator.fixed_bits_per_table(n) {
        Some(_) => Some(required_key_bits(n, tables)?),
        None => None,
    };

    let (pad, consumed, available) = match (&args.key, args.unsafe_dev_key) {
        (_, Some(seed)) => {
            eprintln!(
                "qpp: warning: --unsafe-dev-key derives the key from seed {seed}; \
                 the pad is NOT secret"
            );
            let mut bits = RngBits::new(ChaCha20Rng::seed_from_u64(seed));
            let pad = generate_pad(n, tables, generator, &mut bits)?;
            (pad, bits.consumed_bits(), None)
        }
        (Some(path), None) => {
            let mut key = KeyMaterial::from_bytes(read_all(path)?);
            let available = key.len_bits();
            if let Some(required) = fixed_cost {
                if available < required {
                    return Err(CliError::new(
                        exit::KEY,
                        format!("required {required} bits, available {available}"),
                    ));
                }
            }
            let pad = generate_pad(n, tables, generator, &mut key)?;
            (pad, key.cursor(), Some(available))
        }
        (None, None) => unreachable!("clap requires a key source"),
    };

    let bytes = encode_pad(&pad).map_err(|e| CliError::pad(&args.output, e))?;
    write_all(&args.output, &bytes)?;

    let entropy = entropy_report(n, tables as u64)?;
    let summary = Summary {
        n: n.bits(),
        tables,
        generator: generator.to_string(),
        bits_consumed: consumed,
        key_bits_available: available,
        unsafe_dev_key: args.unsafe_dev_key.is_some(),
        pad_file: args.output.display().to_string(),
        pad_bytes: bytes.len() as u64,
        otp_entropy_bits: entropy.otp_bits,
        qpp_entropy_bits: entropy.qpp_bits,
    };
    let available_text = match available {
        Some(bits) => format!(" of {bits} available"),
        None => " (unsafe dev key)".to_string(),
    };
    let text = format!(
        "wrote {} ({} bytes)\n\
         n = {}, M = {}, generator = {}\n\
         key bits consumed: {}{}\n\
         entropy: otp {} bits, qpp {:.1} bits",
        summary.pad_file,
        summary.pad_bytes,
        summary.n,
        summary.tables,
        summary.generator,
        summary.bits_consumed,
        available_text,
        summary.otp_entropy_bits,
        summary.qpp_entropy_bits,
    );
    printer.emit(&text, &record("genpad", &summary));
    Ok(true)
}
