//! Quantum permutation pad (QPP) cipher.
//!
//! A QPP replaces the XOR of a one-time pad with a permutation of the
//! `2^n` possible values of an `n`-bit word. A pad is an ordered list of
//! `M` permutation tables; word `i` of a message is encrypted with table
//! `i mod M` and decrypted with the inverse (transposed) table.
//!
//! The crate is split into:
//!
//! * [`permutation`]: permutation tables on n-bit words and their dense matrix view.
//! * [`padgen`]: key material and the three table generators.
//! * [`cipher`]: word packing, round-robin encryption sessions, the XOR reference mode.
//! * [`padfile`]: the `QPP1` pad file and `QPPC` ciphertext container formats.
//! * [`analysis`]: entropy figures and brute-force checks of the counting claims.
//!
//! Nothing here provides integrity protection. Decrypting with the wrong pad
//! yields well-formed garbage.

pub mod analysis;
pub mod bits;
pub mod cipher;
mod error;
pub mod padfile;
pub mod padgen;
pub mod permutation;

pub use cipher::{CipherSession, WordStream};
pub use error::{Error, Result};
pub use padgen::{Generator, KeyMaterial, QuantumPermutationPad};
pub use permutation::{DenseMatrix, PermutationTable, WordSize};

/// An n-bit word value. Always `< 2^n` for the word size it is used with.
pub type Word = u32;
