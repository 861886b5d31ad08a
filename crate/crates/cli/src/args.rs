use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use qpp_core::Generator;

/// Permutation-pad cipher: generate pads, encrypt, decrypt, and verify.
#[derive(Debug, Parser)]
#[command(name = "qpp", version, about)]
pub struct Cli {
    /// Output format for reports and summaries.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive a pad from pre-shared key bits and write it as a pad file.
    Genpad(GenpadArgs),
    /// Encrypt a file into a ciphertext container.
    Encrypt(CryptArgs),
    /// Decrypt a ciphertext container.
    Decrypt(CryptArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Print OTP and QPP entropy for a pad shape.
    Entropy(ShapeArgs),
    /// Reproduce the 3-bit worked examples, checking each before printing.
    Demo,
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    /// Bits per word.
    #[arg(short = 'n', long = "n", default_value_t = 8)]
    pub n: u32,

    /// Number of permutation tables in the pad.
    #[arg(short = 'm', long = "m", default_value_t = 16)]
    pub tables: usize,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("key_source").required(true).args(["key", "unsafe_dev_key"])))]
pub struct GenpadArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,

    /// Table generator: paper, unbiased or rc4.
    #[arg(short, long, default_value_t = Generator::PaperShuffle)]
    pub generator: Generator,

    /// Key file holding pre-shared random bits; `-` reads standard input.
    #[arg(short, long)]
    pub key: Option<PathBuf>,

    /// Derive the key from a seeded PRNG. For testing only: not secret, not random.
    #[arg(long, value_name = "SEED")]
    pub unsafe_dev_key: Option<u64>,

    /// Pad file to write.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CryptArgs {
    /// Pad file.
    #[arg(short, long)]
    pub pad: PathBuf,

    /// Input file; `-` reads standard input.
    #[arg(short, long, default_value = "-")]
    pub input: PathBuf,

    /// Output file; `-` writes standard output.
    #[arg(short, long, default_value = "-")]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Degeneracy,
    Xor,
    Commute,
    Uniform,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub suite: Suite,

    /// Word size. Defaults per suite: degeneracy 3, xor 8, commute 2, uniform 3.
    #[arg(short = 'n', long = "n")]
    pub n: Option<u32>,

    /// Sample count for statistical suites.
    #[arg(long)]
    pub samples: Option<u64>,

    /// Seed for statistical suites.
    #[arg(long, conflicts_with = "fresh_seed")]
    pub seed: Option<u64>,

    /// Draw a new seed from the operating system (printed in the report).
    #[arg(long)]
    pub fresh_seed: bool,

    /// Plaintext word for the uniformity suite.
    #[arg(long, default_value_t = 3)]
    pub plaintext: u32,

    /// Table generator for the uniformity suite. Only `unbiased` is asserted.
    #[arg(short, long, default_value_t = Generator::Unbiased)]
    pub generator: Generator,
}
