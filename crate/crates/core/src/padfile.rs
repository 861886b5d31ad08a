//! On-disk formats for pads and ciphertext.
//!
//! Pad file (`QPP1`), all integers little-endian:
//!
//! | offset | size | field                                        |
//! |--------|------|----------------------------------------------|
//! | 0      | 4    | magic `QPP1`                                 |
//! | 4      | 1    | version, 1                                   |
//! | 5      | 1    | word size `n`, 1..=16                         |
//! | 6      | 2    | table count `M`, >= 1                        |
//! | 8      | 1    | generator id (0 paper, 1 unbiased, 2 rc4)    |
//! | 9      | 3    | reserved, zero                               |
//! | 12     | ...  | `M` tables of `2^n` u16 entries              |
//!
//! Ciphertext container (`QPPC`):
//!
//! | offset | size | field                                        |
//! |--------|------|----------------------------------------------|
//! | 0      | 4    | magic `QPPC`                                 |
//! | 4      | 1    | version, 1                                   |
//! | 5      | 1    | word size `n`                                |
//! | 6      | 8    | original bit length                          |
//! | 14     | ...  | `ceil(words * n / 8)` bytes, words MSB-first |
//!
//! where `words = ceil(original_bit_length / n)`.
//!
//! Pad files are the shared secret and are stored in the clear. Protecting
//! them at rest is up to the operator. Containers carry no MAC.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::bits::BitString;
use crate::cipher::WordStream;
use crate::padgen::{Generator, QuantumPermutationPad};
use crate::permutation::{PermutationTable, WordSize};

pub const PAD_MAGIC: [u8; 4] = *b"QPP1";
pub const CONTAINER_MAGIC: [u8; 4] = *b"QPPC";
pub const VERSION: u8 = 1;
pub const PAD_HEADER_LEN: usize = 12;
pub const CONTAINER_HEADER_LEN: usize = 14;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("file ends inside the {0}")]
    Truncated(&'static str),

    #[error("bad magic {found:02x?}, expected {expected:?}")]
    BadMagic { found: [u8; 4], expected: &'static str },

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),

    #[error("invalid header: {0}")]
    InvalidHeader(String),

    #[error("table {index} is corrupt: {source}")]
    CorruptTable {
        index: usize,
        #[source]
        source: crate::Error,
    },

    #[error(
        "payload of {actual} bytes does not match {expected} bytes implied by bit length {bit_length}"
    )]
    LengthMismatch {
        bit_length: u64,
        expected: u64,
        actual: u64,
    },

    #[error("pad has {0} tables; the format holds at most 65535")]
    TooManyTables(usize),
}

impl FormatError {
    /// True when the underlying reader or writer failed, as opposed to bad content.
    pub fn is_io(&self) -> bool {
        matches!(self, FormatError::Io(_))
    }
}

fn read_exact_or<R: Read + ?Sized>(
    source: &mut R,
    buf: &mut [u8],
    what: &'static str,
) -> Result<(), FormatError> {
    source.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => FormatError::Truncated(what),
        _ => FormatError::Io(e),
    })
}

fn check_magic(found: [u8; 4], expected: &'static [u8; 4]) -> Result<(), FormatError> {
    if &found == expected {
        Ok(())
    } else {
        Err(FormatError::BadMagic {
            found,
            expected: std::str::from_utf8(expected).unwrap(),
        })
    }
}

fn check_version(version: u8) -> Result<(), FormatError> {
    if version == VERSION {
        Ok(())
    } else {
        Err(FormatError::UnsupportedVersion(version))
    }
}

fn word_size_from(byte: u8) -> Result<WordSize, FormatError> {
    WordSize::new(byte as u32).map_err(|e| FormatError::InvalidHeader(e.to_string()))
}

/// Total byte size of a pad file.
pub fn pad_file_len(n: WordSize, tables: usize) -> u64 {
    PAD_HEADER_LEN as u64 + tables as u64 * n.domain_size() as u64 * 2
}

/// Writes header and tables; returns bytes written.
pub fn write_pad<W: Write + ?Sized>(
    pad: &QuantumPermutationPad,
    sink: &mut W,
) -> Result<u64, FormatError> {
    let count = u16::try_from(pad.len()).map_err(|_| FormatError::TooManyTables(pad.len()))?;
    let mut header = [0u8; PAD_HEADER_LEN];
    header[..4].copy_from_slice(&PAD_MAGIC);
    header[4] = VERSION;
    header[5] = pad.word_size().bits();
    header[6..8].copy_from_slice(&count.to_le_bytes());
    header[8] = pad.generator().id();
    sink.write_all(&header)?;

    let mut body = Vec::with_capacity(pad.word_size().domain_size() * 2);
    for table in pad.tables() {
        body.clear();
        for &entry in table.as_slice() {
            body.extend_from_slice(&entry.to_le_bytes());
        }
        sink.write_all(&body)?;
    }
    Ok(pad_file_len(pad.word_size(), pad.len()))
}

/// Reads and validates a pad, including bijectivity of every table.
pub fn read_pad<R: Read + ?Sized>(source: &mut R) -> Result<QuantumPermutationPad, FormatError> {
    let mut header = [0u8; PAD_HEADER_LEN];
    read_exact_or(source, &mut header, "pad header")?;
    check_magic(header[..4].try_into().unwrap(), &PAD_MAGIC)?;
    check_version(header[4])?;
    let n = word_size_from(header[5])?;
    let count = u16::from_le_bytes([header[6], header[7]]) as usize;
    if count == 0 {
        return Err(FormatError::InvalidHeader("table count is zero".into()));
    }
    let generator = Generator::from_id(header[8]).ok_or_else(|| {
        FormatError::InvalidHeader(format!("unknown generator id {}", header[8]))
    })?;
    if header[9..12] != [0, 0, 0] {
        return Err(FormatError::InvalidHeader("reserved bytes are not zero".into()));
    }

    let size = n.domain_size();
    let mut raw = vec![0u8; size * 2];
    let mut tables = Vec::with_capacity(count);
    for index in 0..count {
        read_exact_or(source, &mut raw, "pad tables")?;
        let entries: Vec<u16> = raw
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]))
            .collect();
        let table = PermutationTable::from_mapping(n, &entries)
            .map_err(|source| FormatError::CorruptTable { index, source })?;
        tables.push(table);
    }
    QuantumPermutationPad::new(tables, generator)
        .map_err(|e| FormatError::InvalidHeader(e.to_string()))
}

pub fn encode_pad(pad: &QuantumPermutationPad) -> Result<Vec<u8>, FormatError> {
    let mut out = Vec::with_capacity(pad_file_len(pad.word_size(), pad.len()) as usize);
    write_pad(pad, &mut out)?;
    Ok(out)
}

pub fn decode_pad(mut bytes: &[u8]) -> Result<QuantumPermutationPad, FormatError> {
    read_pad(&mut bytes)
}

/// Payload bytes for a stream of `bit_length` bits at word size `n`.
pub fn container_payload_len(n: WordSize, bit_length: u64) -> u64 {
    let width = n.bits() as u64;
    let words = bit_length.div_ceil(width);
    (words * width).div_ceil(8)
}

pub fn write_container<W: Write + ?Sized>(
    stream: &WordStream,
    sink: &mut W,
) -> Result<u64, FormatError> {
    let n = stream.word_size();
    let mut header = [0u8; CONTAINER_HEADER_LEN];
    header[..4].copy_from_slice(&CONTAINER_MAGIC);
    header[4] = VERSION;
    header[5] = n.bits();
    header[6..14].copy_from_slice(&stream.original_bit_length().to_le_bytes());
    sink.write_all(&header)?;

    let mut payload = BitString::new();
    for &w in stream.words() {
        payload.push_bits(w, n.bits() as u32);
    }
    let payload = payload.into_bytes();
    sink.write_all(&payload)?;
    Ok((CONTAINER_HEADER_LEN + payload.len()) as u64)
}

/// Reads a container to the end of `source`. The payload must be exactly
/// the size implied by the header.
pub fn read_container<R: Read + ?Sized>(source: &mut R) -> Result<WordStream, FormatError> {
    let mut header = [0u8; CONTAINER_HEADER_LEN];
    read_exact_or(source, &mut header, "container header")?;
    check_magic(header[..4].try_into().unwrap(), &CONTAINER_MAGIC)?;
    check_version(header[4])?;
    let n = word_size_from(header[5])?;
    let bit_length = u64::from_le_bytes(header[6..14].try_into().unwrap());

    let expected = container_payload_len(n, bit_length);
    // Read at most one byte past the expected size, enough to detect excess.
    let mut payload = Vec::new();
    source
        .take(expected.saturating_add(1))
        .read_to_end(&mut payload)?;
    if payload.len() as u64 != expected {
        return Err(FormatError::LengthMismatch {
            bit_length,
            expected,
            actual: payload.len() as u64,
        });
    }

    let width = n.bits() as u32;
    let word_count = bit_length.div_ceil(width as u64);
    let bits = BitString::from_bytes(payload);
    let words = (0..word_count)
        .map(|i| bits.read_bits(i * width as u64, width).expect("length checked"))
        .collect();
    WordStream::from_parts(n, words, bit_length)
        .map_err(|e| FormatError::InvalidHeader(e.to_string()))
}

pub fn encode_container(stream: &WordStream) -> Result<Vec<u8>, FormatError> {
    let mut out = Vec::new();
    write_container(stream, &mut out)?;
    Ok(out)
}

pub fn decode_container(mut bytes: &[u8]) -> Result<WordStream, FormatError> {
    read_container(&mut bytes)
}
