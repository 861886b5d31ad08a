//! Word-by-word encryption with a pad.
//!
//! Plaintext bits are cut into `n`-bit words MSB-first; a trailing partial
//! word is zero-padded and the exact bit length is carried alongside so
//! decryption can truncate. Word `i` (absolute position since the session
//! started) is encrypted with table `i mod M`.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::padgen::QuantumPermutationPad;
use crate::permutation::WordSize;
use crate::{Error, Result, Word};

/// A sequence of `n`-bit words plus the bit length of the data they came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WordStream {
    n: WordSize,
    words: Vec<Word>,
    original_bit_length: u64,
}

fn words_for_bits(n: WordSize, bits: u64) -> u64 {
    bits.div_ceil(n.bits() as u64)
}

impl WordStream {
    /// Checks every word fits and that `words.len() == ceil(original_bit_length / n)`.
    pub fn from_parts(n: WordSize, words: Vec<Word>, original_bit_length: u64) -> Result<Self> {
        if words_for_bits(n, original_bit_length) != words.len() as u64 {
            return Err(Error::InconsistentBitLength {
                declared: original_bit_length,
                words: words.len(),
                bits: n.bits(),
            });
        }
        for &w in &words {
            n.check(w)?;
        }
        Ok(Self {
            n,
            words,
            original_bit_length,
        })
    }

    /// A stream whose bit length is exactly `words.len() * n`.
    pub fn from_words(n: WordSize, words: Vec<Word>) -> Result<Self> {
        let bits = words.len() as u64 * n.bits() as u64;
        Self::from_parts(n, words, bits)
    }

    pub fn empty(n: WordSize) -> Self {
        Self {
            n,
            words: Vec::new(),
            original_bit_length: 0,
        }
    }

    pub fn word_size(&self) -> WordSize {
        self.n
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn into_words(self) -> Vec<Word> {
        self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn original_bit_length(&self) -> u64 {
        self.original_bit_length
    }

    /// Same framing, new words. Used by the cipher, which preserves length.
    fn with_words(&self, words: Vec<Word>) -> Self {
        debug_assert_eq!(words.len(), self.words.len());
        Self {
            n: self.n,
            words,
            original_bit_length: self.original_bit_length,
        }
    }
}

/// Splits `bits` into `n`-bit words, MSB first, zero-padding the last word.
pub fn pack_bits(n: WordSize, bits: &BitString) -> WordStream {
    let width = n.bits() as u32;
    let len = bits.len();
    let count = words_for_bits(n, len);
    let mut words = Vec::with_capacity(count as usize);
    let mut offset = 0u64;
    while offset < len {
        let take = (len - offset).min(width as u64) as u32;
        let chunk = bits.read_bits(offset, take).expect("in range");
        words.push(chunk << (width - take));
        offset += take as u64;
    }
    WordStream {
        n,
        words,
        original_bit_length: len,
    }
}

pub fn pack_bytes(n: WordSize, bytes: &[u8]) -> WordStream {
    pack_bits(n, &BitString::from_bytes(bytes))
}

/// Concatenates the words MSB first and truncates to the original bit length.
pub fn unpack_bits(stream: &WordStream) -> BitString {
    let width = stream.n.bits() as u32;
    let mut bits = BitString::new();
    for &w in &stream.words {
        bits.push_bits(w, width);
    }
    let bytes = bits.into_bytes();
    BitString::from_bytes_with_len(bytes, stream.original_bit_length)
}

/// Encrypts the word at absolute position `index` with table `index mod M`.
pub fn encrypt_word(pad: &QuantumPermutationPad, index: u64, word: Word) -> Result<Word> {
    pad.table_for(index).apply(word)
}

/// Inverse of [`encrypt_word`] at the same position.
///
/// Scans the table for the preimage; [`CipherSession`] keeps inverted tables instead.
pub fn decrypt_word(pad: &QuantumPermutationPad, index: u64, word: Word) -> Result<Word> {
    pad.table_for(index).apply_inverse(word)
}

/// Stateful encryption/decryption with a running word counter.
///
/// Two sessions over the same pad that start at the same counter and see
/// the same word counts stay in lockstep. A fresh session starts at 0, which
/// means a new message reuses the pad from its first table.
#[derive(Debug, Clone)]
pub struct CipherSession {
    pad: QuantumPermutationPad,
    inverse: QuantumPermutationPad,
    word_counter: u64,
}

impl CipherSession {
    pub fn new(pad: QuantumPermutationPad) -> Self {
        Self::starting_at(pad, 0)
    }

    pub fn starting_at(pad: QuantumPermutationPad, word_counter: u64) -> Self {
        let inverse = pad.invert();
        Self {
            pad,
            inverse,
            word_counter,
        }
    }

    pub fn pad(&self) -> &QuantumPermutationPad {
        &self.pad
    }

    pub fn word_counter(&self) -> u64 {
        self.word_counter
    }

    pub fn encrypt_stream(&mut self, stream: &WordStream) -> Result<WordStream> {
        self.check_word_size(stream.n)?;
        let words = transform(&self.pad, self.word_counter, &stream.words);
        self.word_counter += stream.words.len() as u64;
        Ok(stream.with_words(words))
    }

    pub fn decrypt_stream(&mut self, stream: &WordStream) -> Result<WordStream> {
        self.check_word_size(stream.n)?;
        let words = transform(&self.inverse, self.word_counter, &stream.words);
        self.word_counter += stream.words.len() as u64;
        Ok(stream.with_words(words))
    }

    /// Raw-word encryption; each word is range-checked.
    pub fn encrypt_words(&mut self, words: &[Word]) -> Result<Vec<Word>> {
        let stream = WordStream::from_words(self.pad.word_size(), words.to_vec())?;
        self.encrypt_stream(&stream).map(WordStream::into_words)
    }

    pub fn decrypt_words(&mut self, words: &[Word]) -> Result<Vec<Word>> {
        let stream = WordStream::from_words(self.pad.word_size(), words.to_vec())?;
        self.decrypt_stream(&stream).map(WordStream::into_words)
    }

    fn check_word_size(&self, n: WordSize) -> Result<()> {
        let pad_n = self.pad.word_size();
        if pad_n == n {
            Ok(())
        } else {
            Err(Error::WordSizeMismatch {
                left: pad_n.bits(),
                right: n.bits(),
            })
        }
    }
}

// Words inside a WordStream are already range-checked.
fn transform(pad: &QuantumPermutationPad, start: u64, words: &[Word]) -> Vec<Word> {
    let tables = pad.tables();
    let m = tables.len();
    let mut slot = (start % m as u64) as usize;
    words
        .iter()
        .map(|&w| {
            let out = tables[slot].apply_in_range(w);
            slot += 1;
            if slot == m {
                slot = 0;
            }
            out
        })
        .collect()
}

/// One-time pad over `n`-bit words: `c[i] = k[i] ^ m[i]`. Also decrypts.
pub fn otp_encrypt(n: WordSize, key_words: &[Word], words: &[Word]) -> Result<Vec<Word>> {
    if key_words.len() < words.len() {
        return Err(Error::OtpKeyTooShort {
            key: key_words.len(),
            message: words.len(),
        });
    }
    words
        .iter()
        .zip(key_words)
        .map(|(&m, &k)| Ok(n.check(k)? ^ n.check(m)?))
        .collect()
}
