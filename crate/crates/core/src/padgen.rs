//! Deriving permutation tables and pads from pre-shared key bits.
//!
//! Three generators are available:
//!
//! * [`Generator::PaperShuffle`] reads `2^n` key words `k[0..2^n]` and, for
//!   `i` from `2^n - 1` down to 1, swaps `S[k[i]]` with `S[i]`. The swap index
//!   ranges over the whole table, so the resulting distribution over tables is
//!   *not* uniform. `k[0]` is read but never used; every table still costs
//!   `n * 2^n` bits.
//! * [`Generator::Unbiased`] is textbook Fisher-Yates: the swap index for
//!   position `i` is drawn uniformly from `[0, i]` by rejection sampling, so
//!   key consumption varies.
//! * [`Generator::Rc4Ksa`] is the RC4 key schedule with modulus `2^n` and
//!   `n`-bit key words, one pass of `2^n` iterations.
//!
//! Key words are read MSB-first, in index order.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::permutation::{PermutationTable, WordSize};
use crate::{Error, Result, Word};

/// A stream of key bits, consumed front to back.
pub trait BitSource {
    /// Reads the next `width` bits (`width <= 32`) as an unsigned integer, MSB first.
    ///
    /// On failure nothing is consumed.
    fn take_bits(&mut self, width: u32) -> Result<u32>;

    fn consumed_bits(&self) -> u64;

    /// Bits left, or `None` for an unbounded source.
    fn remaining_bits(&self) -> Option<u64>;
}

/// Finite pre-shared key bits with a consumption cursor. Bits are never reused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyMaterial {
    bits: BitString,
    cursor: u64,
}

impl KeyMaterial {
    pub fn new(bits: BitString) -> Self {
        Self { bits, cursor: 0 }
    }

    pub fn from_bytes(bytes: impl Into<Vec<u8>>) -> Self {
        Self::new(BitString::from_bytes(bytes))
    }

    /// Packs each word into `n` bits, MSB first. Words must fit in `n` bits.
    pub fn from_words(n: WordSize, words: &[Word]) -> Result<Self> {
        let mut bits = BitString::new();
        for &w in words {
            bits.push_bits(n.check(w)?, n.bits() as u32);
        }
        Ok(Self::new(bits))
    }

    pub fn zeros(bit_len: u64) -> Self {
        let bytes = vec![0u8; bit_len.div_ceil(8) as usize];
        Self::new(BitString::from_bytes_with_len(bytes, bit_len))
    }

    pub fn len_bits(&self) -> u64 {
        self.bits.len()
    }

    pub fn remaining(&self) -> u64 {
        self.bits.len() - self.cursor
    }

    pub fn cursor(&self) -> u64 {
        self.cursor
    }
}

impl BitSource for KeyMaterial {
    fn take_bits(&mut self, width: u32) -> Result<u32> {
        match self.bits.read_bits(self.cursor, width) {
            Some(v) => {
                self.cursor += width as u64;
                Ok(v)
            }
            None => Err(Error::KeyExhausted {
                consumed: self.cursor,
            }),
        }
    }

    fn consumed_bits(&self) -> u64 {
        self.cursor
    }

    fn remaining_bits(&self) -> Option<u64> {
        Some(self.remaining())
    }
}

/// Unbounded bit source over a random number generator, for sampling experiments.
#[derive(Debug, Clone)]
pub struct RngBits<R> {
    rng: R,
    buffer: u64,
    buffered: u32,
    consumed: u64,
}

impl<R: RngCore> RngBits<R> {
    pub fn new(rng: R) -> Self {
        Self {
            rng,
            buffer: 0,
            buffered: 0,
            consumed: 0,
        }
    }
}

impl<R: RngCore> BitSource for RngBits<R> {
    fn take_bits(&mut self, width: u32) -> Result<u32> {
        debug_assert!(width <= 32);
        if width == 0 {
            return Ok(0);
        }
        if self.buffered < width {
            self.buffer = self.rng.next_u64();
            self.buffered = 64;
        }
        let value = (self.buffer >> (64 - width)) as u32;
        self.buffer <<= width;
        self.buffered -= width;
        self.consumed += width as u64;
        Ok(value)
    }

    fn consumed_bits(&self) -> u64 {
        self.consumed
    }

    fn remaining_bits(&self) -> Option<u64> {
        None
    }
}

/// Which shuffle produced a table. The discriminant is the pad-file id byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
#[repr(u8)]
pub enum Generator {
    #[default]
    PaperShuffle = 0,
    Unbiased = 1,
    Rc4Ksa = 2,
}

impl Generator {
    pub const ALL: [Generator; 3] = [
        Generator::PaperShuffle,
        Generator::Unbiased,
        Generator::Rc4Ksa,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.id() == id)
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::PaperShuffle => "paper",
            Generator::Unbiased => "unbiased",
            Generator::Rc4Ksa => "rc4",
        }
    }

    /// Key bits per table, when the generator's consumption is fixed.
    pub fn fixed_bits_per_table(self, n: WordSize) -> Option<u64> {
        match self {
            Generator::PaperShuffle | Generator::Rc4Ksa => Some(bits_per_table(n)),
            Generator::Unbiased => None,
        }
    }

    pub fn shuffle<S: BitSource + ?Sized>(
        self,
        n: WordSize,
        key: &mut S,
    ) -> Result<PermutationTable> {
        match self {
            Generator::PaperShuffle => shuffle_paper(n, key),
            Generator::Unbiased => shuffle_unbiased(n, key),
            Generator::Rc4Ksa => shuffle_rc4ksa(n, key),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "paper" | "paper-shuffle" => Ok(Generator::PaperShuffle),
            "unbiased" | "fisher-yates" => Ok(Generator::Unbiased),
            "rc4" | "rc4-ksa" => Ok(Generator::Rc4Ksa),
            other => Err(format!(
                "unknown generator `{other}` (expected paper, unbiased or rc4)"
            )),
        }
    }
}

/// An ordered list of `M >= 1` permutation tables sharing one word size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumPermutationPad {
    n: WordSize,
    tables: Vec<PermutationTable>,
    generator: Generator,
}

impl QuantumPermutationPad {
    pub fn new(tables: Vec<PermutationTable>, generator: Generator) -> Result<Self> {
        let n = tables.first().ok_or(Error::EmptyPad)?.word_size();
        if let Some(odd) = tables.iter().find(|t| t.word_size() != n) {
            return Err(Error::WordSizeMismatch {
                left: n.bits(),
                right: odd.word_size().bits(),
            });
        }
        Ok(Self {
            n,
            tables,
            generator,
        })
    }

    pub fn word_size(&self) -> WordSize {
        self.n
    }

    /// `M`, the number of tables.
    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn tables(&self) -> &[PermutationTable] {
        &self.tables
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }

    /// Table used for the word at absolute position `index`.
    pub fn table_for(&self, index: u64) -> &PermutationTable {
        &self.tables[(index % self.tables.len() as u64) as usize]
    }

    /// The decryption pad: every table inverted, order kept.
    pub fn invert(&self) -> Self {
        Self {
            n: self.n,
            tables: self.tables.iter().map(PermutationTable::invert).collect(),
            generator: self.generator,
        }
    }
}

fn bits_per_table(n: WordSize) -> u64 {
    n.bits() as u64 * n.domain_size() as u64
}

/// `M * n * 2^n`, the key length for a pad of `M` tables from the fixed-cost generators.
pub fn required_key_bits(n: WordSize, tables: usize) -> Result<u64> {
    if tables == 0 {
        return Err(Error::EmptyPad);
    }
    bits_per_table(n)
        .checked_mul(tables as u64)
        .ok_or(Error::KeyLengthOverflow {
            n: n.bits(),
            tables,
        })
}

fn ensure_available<S: BitSource + ?Sized>(key: &S, required: u64) -> Result<()> {
    match key.remaining_bits() {
        Some(available) if available < required => {
            Err(Error::InsufficientKey {
                required,
                available,
            })
        }
        _ => Ok(()),
    }
}

fn read_key_words<S: BitSource + ?Sized>(n: WordSize, key: &mut S) -> Result<Vec<usize>> {
    ensure_available(key, bits_per_table(n))?;
    (0..n.domain_size())
        .map(|_| key.take_bits(n.bits() as u32).map(|w| w as usize))
        .collect()
}

fn identity_state(n: WordSize) -> Vec<u16> {
    (0..n.domain_size()).map(|i| i as u16).collect()
}

/// The reference one-pass shuffle: `j = k[i]; swap S[j], S[i]` for `i = 2^n-1 ..= 1`.
pub fn shuffle_paper<S: BitSource + ?Sized>(n: WordSize, key: &mut S) -> Result<PermutationTable> {
    let k = read_key_words(n, key)?;
    let mut state = identity_state(n);
    for i in (1..state.len()).rev() {
        state.swap(k[i], i);
    }
    Ok(PermutationTable::from_map_unchecked(n, state))
}

/// Fisher-Yates with the swap index drawn uniformly from `[0, i]`.
///
/// Each draw takes `ceil(log2(i + 1))` bits and is retried while it exceeds `i`.
/// If the key runs dry, the error carries the total bits consumed so far.
pub fn shuffle_unbiased<S: BitSource + ?Sized>(
    n: WordSize,
    key: &mut S,
) -> Result<PermutationTable> {
    let mut state = identity_state(n);
    for i in (1..state.len()).rev() {
        let width = usize::BITS - i.leading_zeros();
        let j = loop {
            let draw = key.take_bits(width).map_err(|_| Error::KeyExhausted {
                consumed: key.consumed_bits(),
            })? as usize;
            if draw <= i {
                break draw;
            }
        };
        state.swap(i, j);
    }
    Ok(PermutationTable::from_map_unchecked(n, state))
}

/// RC4 key scheduling over `2^n` states with `n`-bit key words.
pub fn shuffle_rc4ksa<S: BitSource + ?Sized>(
    n: WordSize,
    key: &mut S,
) -> Result<PermutationTable> {
    let k = read_key_words(n, key)?;
    let mask = n.domain_size() - 1;
    let mut state = identity_state(n);
    let mut j = 0usize;
    for i in 0..state.len() {
        j = (j + state[i] as usize + k[i]) & mask;
        state.swap(i, j);
    }
    Ok(PermutationTable::from_map_unchecked(n, state))
}

/// Runs `generator` `tables` times on successive key segments.
pub fn generate_pad<S: BitSource + ?Sized>(
    n: WordSize,
    tables: usize,
    generator: Generator,
    key: &mut S,
) -> Result<QuantumPermutationPad> {
    if tables == 0 {
        return Err(Error::EmptyPad);
    }
    let tables = (0..tables)
        .map(|table| {
            generator.shuffle(n, key).map_err(|e| Error::PadTable {
                table,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    QuantumPermutationPad::new(tables, generator)
}
