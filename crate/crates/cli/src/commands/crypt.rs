use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use qpp_core::cipher::{pack_bytes, unpack_bits};
use qpp_core::padfile::{decode_container, encode_container, read_pad};
use qpp_core::{CipherSession, QuantumPermutationPad};
use serde::Serialize;

use super::Outcome;
use crate::args::CryptArgs;
use crate::error::{exit, CliError};
use crate::io::{is_stdio, read_all, write_all};
use crate::output::{record, Printer};

#[derive(Debug, Serialize)]
struct Summary {
    n: u8,
    tables: usize,
    words: usize,
    bit_length: u64,
    input_bytes: usize,
    output_bytes: usize,
}

fn load_pad(path: &Path) -> Result<QuantumPermutationPad, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_pad(&mut BufReader::new(file)).map_err(|e| CliError::pad(path, e))
}

fn report(args: &CryptArgs, printer: Printer, command: &str, summary: Summary) {
    let printer = if is_stdio(&args.output) {
        printer.on_stderr()
    } else {
        printer
    };
    let text = format!(
        "{command}: {} words of {} bits ({} bits), {} -> {} bytes, M = {}",
        summary.words,
        summary.n,
        summary.bit_length,
        summary.input_bytes,
        summary.output_bytes,
        summary.tables
    );
    printer.emit(&text, &record(command, &summary));
}

pub fn encrypt(args: &CryptArgs, printer: Printer) -> Outcome {
    let pad = load_pad(&args.pad)?;
    let plain = read_all(&args.input)?;
    let stream = pack_bytes(pad.word_size(), &plain);
    let cipher = CipherSession::new(pad.clone()).encrypt_stream(&stream)?;
    let bytes = encode_container(&cipher).map_err(|e| CliError::container(&args.output, e))?;
    write_all(&args.output, &bytes)?;
    report(
        args,
        printer,
        "encrypt",
        Summary {
            n: pad.word_size().bits(),
            tables: pad.len(),
            words: cipher.len(),
            bit_length: cipher.original_bit_length(),
            input_bytes: plain.len(),
            output_bytes: bytes.len(),
        },
    );
    Ok(true)
}

pub fn decrypt(args: &CryptArgs, printer: Printer) -> Outcome {
    let pad = load_pad(&args.pad)?;
    let raw = read_all(&args.input)?;
    let cipher = decode_container(&raw).map_err(|e| CliError::container(&args.input, e))?;
    if cipher.word_size() != pad.word_size() {
        return Err(CliError::new(
            exit::PAD,
            format!(
                "pad uses {}-bit words but the container holds {}-bit words",
                pad.word_size(),
                cipher.word_size()
            ),
        ));
    }
    let plain = CipherSession::new(pad.clone()).decrypt_stream(&cipher)?;
    let bits = unpack_bits(&plain);
    if bits.len() % 8 != 0 {
        return Err(CliError::new(
            exit::FORMAT,
            format!(
                "container holds {} bits, not a whole number of bytes",
                bits.len()
            ),
        ));
    }
    let bytes = bits.into_bytes();
    write_all(&args.output, &bytes)?;
    report(
        args,
        printer,
        "decrypt",
        Summary {
            n: pad.word_size().bits(),
            tables: pad.len(),
            words: cipher.len(),
            bit_length: cipher.original_bit_length(),
            input_bytes: raw.len(),
            output_bytes: bytes.len(),
        },
    );
    Ok(true)
}
