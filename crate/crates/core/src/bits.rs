//! MSB-first bit strings.
//!
//! Bit 0 of a string is the most significant bit of its first byte. Both the
//! key material and the word packing of plaintext use this ordering, so a
//! key file read at `n = 8` yields its bytes unchanged as words.

use serde::{Deserialize, Serialize};

/// A finite bit string backed by bytes. Bits past `len` in the last byte are zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BitString {
    bytes: Vec<u8>,
    len: u64,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bytes(bytes: impl Into<Vec<u8>>) -> Self {
        let bytes = bytes.into();
        let len = bytes.len() as u64 * 8;
        Self { bytes, len }
    }

    /// Takes the first `len` bits of `bytes`; trailing bits are cleared.
    ///
    /// Panics if `bytes` holds fewer than `len` bits.
    pub fn from_bytes_with_len(bytes: impl Into<Vec<u8>>, len: u64) -> Self {
        let mut bytes = bytes.into();
        assert!(
            bytes.len() as u64 * 8 >= len,
            "{} bytes cannot hold {len} bits",
            bytes.len()
        );
        bytes.truncate(len.div_ceil(8) as usize);
        let tail = (len % 8) as u32;
        if tail != 0 {
            if let Some(last) = bytes.last_mut() {
                *last &= 0xffu8 << (8 - tail);
            }
        }
        Self { bytes, len }
    }

    /// Parses a string of `'0'` and `'1'` characters, ignoring `_` and whitespace.
    pub fn from_binary_str(s: &str) -> Option<Self> {
        let mut out = BitString::new();
        for ch in s.chars() {
            match ch {
                '0' => out.push(false),
                '1' => out.push(true),
                '_' => {}
                c if c.is_whitespace() => {}
                _ => return None,
            }
        }
        Some(out)
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn get(&self, index: u64) -> Option<bool> {
        (index < self.len).then(|| {
            let byte = self.bytes[(index / 8) as usize];
            (byte >> (7 - index % 8)) & 1 == 1
        })
    }

    pub fn push(&mut self, bit: bool) {
        let offset = self.len % 8;
        if offset == 0 {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.len() - 1;
            self.bytes[last] |= 0x80 >> offset;
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u32, width: u32) {
        debug_assert!(width <= 32);
        for shift in (0..width).rev() {
            self.push((value >> shift) & 1 == 1);
        }
    }

    /// Reads `width` bits starting at `offset` as an unsigned integer, MSB first.
    pub fn read_bits(&self, offset: u64, width: u32) -> Option<u32> {
        debug_assert!(width <= 32);
        if offset.checked_add(width as u64)? > self.len {
            return None;
        }
        let mut value = 0u32;
        let mut pos = offset;
        let mut remaining = width;
        while remaining > 0 {
            let byte = self.bytes[(pos / 8) as usize] as u32;
            let bit_in_byte = (pos % 8) as u32;
            let take = remaining.min(8 - bit_in_byte);
            let chunk = (byte >> (8 - bit_in_byte - take)) & ((1 << take) - 1);
            value = (value << take) | chunk;
            pos += take as u64;
            remaining -= take;
        }
        Some(value)
    }

    pub fn to_binary_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) == Some(true) { '1' } else { '0' })
            .collect()
    }
}
