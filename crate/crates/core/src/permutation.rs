//! Permutations of the `2^n` values of an n-bit word.
//!
//! A [`PermutationTable`] stores a bijection as a mapping array: entry `i`
//! holds the image of `i`. This is the compact form of a `2^n x 2^n` binary
//! permutation matrix whose row `i` has its single 1 in column `map[i]`;
//! [`PermutationTable::to_dense_matrix`] produces that matrix on request.
//!
//! Encryption of a word `m` is `map[m]`, decryption is `inverse[m]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Word};

/// Number of bits per word, `1..=16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct WordSize(u8);

impl WordSize {
    pub const MIN: u8 = 1;
    pub const MAX: u8 = 16;

    pub fn new(bits: u32) -> Result<Self> {
        if (Self::MIN as u32..=Self::MAX as u32).contains(&bits) {
            Ok(WordSize(bits as u8))
        } else {
            Err(Error::WordSizeOutOfRange(bits))
        }
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    /// `2^n`, the number of distinct words.
    pub fn domain_size(self) -> usize {
        1usize << self.0
    }

    pub fn max_word(self) -> Word {
        (1u32 << self.0) - 1
    }

    pub fn check(self, word: Word) -> Result<Word> {
        if word <= self.max_word() {
            Ok(word)
        } else {
            Err(Error::WordOutOfRange {
                word,
                bits: self.0,
            })
        }
    }

    fn ensure_same(self, other: WordSize) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::WordSizeMismatch {
                left: self.0,
                right: other.0,
            })
        }
    }
}

impl TryFrom<u8> for WordSize {
    type Error = Error;

    fn try_from(bits: u8) -> Result<Self> {
        WordSize::new(bits as u32)
    }
}

impl From<WordSize> for u8 {
    fn from(n: WordSize) -> u8 {
        n.0
    }
}

impl fmt::Display for WordSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A bijection on `{0, .., 2^n - 1}`.
///
/// Entries are stored as `u16`, which holds every word for `n <= 16`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PermutationTable {
    n: WordSize,
    map: Vec<u16>,
}

impl fmt::Debug for PermutationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermutationTable(n={}, ", self.n)?;
        fmt::Debug::fmt(&self.map, f)?;
        f.write_str(")")
    }
}

impl PermutationTable {
    pub fn identity(n: WordSize) -> Self {
        let map = (0..n.domain_size()).map(|i| i as u16).collect();
        Self { n, map }
    }

    /// Validated constructor. `entries[i]` becomes the image of `i`.
    pub fn from_mapping<T>(n: WordSize, entries: &[T]) -> Result<Self>
    where
        T: Copy + Into<u32>,
    {
        let size = n.domain_size();
        if entries.len() != size {
            return Err(Error::WrongLength {
                expected: size,
                actual: entries.len(),
            });
        }
        let mut seen_at = vec![usize::MAX; size];
        let mut map = Vec::with_capacity(size);
        for (index, &entry) in entries.iter().enumerate() {
            let value: u32 = entry.into();
            if value as usize >= size {
                return Err(Error::ValueOutOfRange {
                    value,
                    index,
                    limit: size as u32,
                });
            }
            let slot = &mut seen_at[value as usize];
            if *slot != usize::MAX {
                return Err(Error::DuplicateValue {
                    value,
                    first: *slot,
                    second: index,
                });
            }
            *slot = index;
            map.push(value as u16);
        }
        Ok(Self { n, map })
    }

    /// Builds from an array the caller guarantees to be a bijection of the right length.
    pub(crate) fn from_map_unchecked(n: WordSize, map: Vec<u16>) -> Self {
        debug_assert_eq!(map.len(), n.domain_size());
        Self { n, map }
    }

    /// The XOR permutation `i -> i ^ key`, i.e. one-time-pad encryption with `key`.
    pub fn from_xor_key(n: WordSize, key: Word) -> Result<Self> {
        let key = n.check(key)?;
        let map = (0..n.domain_size() as u32)
            .map(|i| (i ^ key) as u16)
            .collect();
        Ok(Self { n, map })
    }

    pub fn word_size(&self) -> WordSize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.map
    }

    pub fn to_vec(&self) -> Vec<Word> {
        self.map.iter().map(|&v| v as Word).collect()
    }

    pub fn apply(&self, word: Word) -> Result<Word> {
        let word = self.n.check(word)?;
        Ok(self.map[word as usize] as Word)
    }

    /// Applies the table to a word already known to be in range.
    #[inline]
    pub(crate) fn apply_in_range(&self, word: Word) -> Word {
        self.map[word as usize] as Word
    }

    /// Preimage of `word`, found by scanning. Use [`invert`](Self::invert) for repeated lookups.
    pub fn apply_inverse(&self, word: Word) -> Result<Word> {
        let word = self.n.check(word)?;
        let pos = self
            .map
            .iter()
            .position(|&v| v as Word == word)
            .expect("bijection covers every word");
        Ok(pos as Word)
    }

    pub fn invert(&self) -> Self {
        let mut inverse = vec![0u16; self.map.len()];
        for (i, &image) in self.map.iter().enumerate() {
            inverse[image as usize] = i as u16;
        }
        Self {
            n: self.n,
            map: inverse,
        }
    }

    /// `outer ∘ inner`: the result maps `m` to `outer[inner[m]]`, so `inner` acts first.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        outer.n.ensure_same(inner.n)?;
        let map = inner
            .map
            .iter()
            .map(|&mid| outer.map[mid as usize])
            .collect();
        Ok(Self { n: outer.n, map })
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        self.n.ensure_same(other.n)?;
        Ok(self
            .map
            .iter()
            .zip(&other.map)
            .all(|(&p, &q)| self.map[q as usize] == other.map[p as usize]))
    }

    pub fn is_involution(&self) -> bool {
        self.map
            .iter()
            .enumerate()
            .all(|(i, &image)| self.map[image as usize] as usize == i)
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| v as usize == i)
    }

    pub fn to_dense_matrix(&self) -> Result<DenseMatrix> {
        if self.n.bits() > DenseMatrix::MAX_WORD_SIZE {
            return Err(Error::DenseTooLarge {
                n: self.n.bits(),
                max: DenseMatrix::MAX_WORD_SIZE,
            });
        }
        let size = self.map.len();
        let mut bits = vec![false; size * size];
        for (row, &col) in self.map.iter().enumerate() {
            bits[row * size + col as usize] = true;
        }
        Ok(DenseMatrix { n: self.n, bits })
    }
}

/// Dense `2^n x 2^n` binary matrix, row-major.
///
/// Built from a table, row `i` has its single 1 in column `map[i]`, so the
/// matrix acts on row vectors: `e_m · D = e_{map[m]}`. Under this action the
/// matrix of `compose(outer, inner)` is `dense(inner) · dense(outer)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    n: WordSize,
    bits: Vec<bool>,
}

impl DenseMatrix {
    /// A `1024 x 1024` matrix is the largest we build.
    pub const MAX_WORD_SIZE: u8 = 10;

    pub fn identity(n: WordSize) -> Result<Self> {
        PermutationTable::identity(n).to_dense_matrix()
    }

    /// Builds from explicit rows; rows must be square and of side `2^n`.
    pub fn from_rows(n: WordSize, rows: &[Vec<u8>]) -> Result<Self> {
        if n.bits() > Self::MAX_WORD_SIZE {
            return Err(Error::DenseTooLarge {
                n: n.bits(),
                max: Self::MAX_WORD_SIZE,
            });
        }
        let size = n.domain_size();
        if rows.len() != size {
            return Err(Error::WrongLength {
                expected: size,
                actual: rows.len(),
            });
        }
        let mut bits = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::WrongLength {
                    expected: size,
                    actual: row.len(),
                });
            }
            bits.extend(row.iter().map(|&b| b != 0));
        }
        Ok(Self { n, bits })
    }

    pub fn word_size(&self) -> WordSize {
        self.n
    }

    pub fn side(&self) -> usize {
        self.n.domain_size()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.side() + col]
    }

    pub fn row(&self, row: usize) -> &[bool] {
        let side = self.side();
        &self.bits[row * side..(row + 1) * side]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[bool]> {
        self.bits.chunks(self.side())
    }

    pub fn transpose(&self) -> Self {
        let side = self.side();
        let mut bits = vec![false; side * side];
        for r in 0..side {
            for c in 0..side {
                bits[c * side + r] = self.bits[r * side + c];
            }
        }
        Self { n: self.n, bits }
    }

    /// Integer matrix product, with each entry required to stay in {0, 1}.
    ///
    /// Returns `None` if an entry of the product exceeds 1, which cannot
    /// happen when both factors are permutation matrices.
    pub fn multiply(&self, rhs: &Self) -> Result<Option<Self>> {
        self.n.ensure_same(rhs.n)?;
        let side = self.side();
        let mut bits = vec![false; side * side];
        for r in 0..side {
            for c in 0..side {
                let sum: u32 = (0..side)
                    .map(|k| (self.get(r, k) && rhs.get(k, c)) as u32)
                    .sum();
                match sum {
                    0 => {}
                    1 => bits[r * side + c] = true,
                    _ => return Ok(None),
                }
            }
        }
        Ok(Some(Self { n: self.n, bits }))
    }

    /// Exactly one 1 in every row and every column.
    pub fn is_permutation_matrix(&self) -> bool {
        let side = self.side();
        let mut col_counts = vec![0usize; side];
        for row in self.rows() {
            let mut ones = 0;
            for (c, &b) in row.iter().enumerate() {
                if b {
                    ones += 1;
                    col_counts[c] += 1;
                }
            }
            if ones != 1 {
                return false;
            }
        }
        col_counts.iter().all(|&c| c == 1)
    }

    /// Recovers the table when this is a permutation matrix.
    pub fn to_table(&self) -> Option<PermutationTable> {
        if !self.is_permutation_matrix() {
            return None;
        }
        let map = self
            .rows()
            .map(|row| row.iter().position(|&b| b).unwrap() as u16)
            .collect();
        Some(PermutationTable::from_map_unchecked(self.n, map))
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix(n={})", self.n)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DenseMatrix {
    /// One row per line, entries separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(n: u32) -> WordSize {
        WordSize::new(n).unwrap()
    }

    fn table(n: u32, map: &[u32]) -> PermutationTable {
        PermutationTable::from_mapping(ws(n), map).unwrap()
    }

    // Worked 3-bit example: 3 encrypts to 5 and back.
    const WORKED: [u32; 8] = [1, 4, 2, 5, 3, 0, 7, 6];

    #[test]
    fn word_size_bounds() {
        assert!(WordSize::new(0).is_err());
        assert!(WordSize::new(17).is_err());
        assert_eq!(WordSize::new(16).unwrap().domain_size(), 65536);
        assert_eq!(ws(3).max_word(), 7);
    }

    #[test]
    fn identity_maps_each_word_to_itself() {
        assert_eq!(PermutationTable::identity(ws(3)).to_vec(), vec![0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(PermutationTable::identity(ws(8)).apply(42).unwrap(), 42);
        let p = table(3, &WORKED);
        let id = PermutationTable::identity(ws(3));
        assert_eq!(PermutationTable::compose(&id, &p).unwrap(), p);
    }

    #[test]
    fn from_mapping_errors_are_distinct() {
        assert_eq!(
            PermutationTable::from_mapping(ws(2), &[0u32, 1, 2, 2]),
            Err(Error::DuplicateValue {
                value: 2,
                first: 2,
                second: 3
            })
        );
        assert_eq!(
            PermutationTable::from_mapping(ws(2), &[0u32, 1, 2]),
            Err(Error::WrongLength {
                expected: 4,
                actual: 3
            })
        );
        assert_eq!(
            PermutationTable::from_mapping(ws(2), &[0u32, 1, 2, 4]),
            Err(Error::ValueOutOfRange {
                value: 4,
                index: 3,
                limit: 4
            })
        );
    }

    #[test]
    fn xor_tables() {
        let x3 = PermutationTable::from_xor_key(ws(3), 3).unwrap();
        assert_eq!(x3.to_vec(), vec![3, 2, 1, 0, 7, 6, 5, 4]);
        assert_eq!(x3.apply(2).unwrap(), 1);
        assert_eq!(x3.apply(1).unwrap(), 2);
        assert!(PermutationTable::from_xor_key(ws(3), 0).unwrap().is_identity());
        assert!(matches!(
            PermutationTable::from_xor_key(ws(3), 8),
            Err(Error::WordOutOfRange { word: 8, bits: 3 })
        ));
    }

    #[test]
    fn apply_and_range_check() {
        let p = table(3, &WORKED);
        assert_eq!(p.apply(3).unwrap(), 5);
        assert_eq!(p.apply_inverse(5).unwrap(), 3);
        assert!(p.apply(8).is_err());
        assert_eq!(PermutationTable::identity(ws(3)).apply(6).unwrap(), 6);
    }

    #[test]
    fn inverse_of_worked_example() {
        let inv = table(3, &WORKED).invert();
        assert_eq!(inv.to_vec(), vec![5, 0, 2, 4, 1, 3, 7, 6]);
        assert_eq!(inv.apply(5).unwrap(), 3);
        for k in 0..8 {
            let x = PermutationTable::from_xor_key(ws(3), k).unwrap();
            assert_eq!(x.invert(), x);
        }
        let id = PermutationTable::identity(ws(4));
        assert_eq!(id.invert(), id);
    }

    #[test]
    fn compose_xor_tables() {
        let x1 = PermutationTable::from_xor_key(ws(3), 1).unwrap();
        let x2 = PermutationTable::from_xor_key(ws(3), 2).unwrap();
        let x3 = PermutationTable::from_xor_key(ws(3), 3).unwrap();
        assert_eq!(PermutationTable::compose(&x1, &x2).unwrap(), x3);
        let p = table(3, &WORKED);
        assert!(PermutationTable::compose(&p, &p.invert()).unwrap().is_identity());
    }

    #[test]
    fn compose_order_is_inner_first() {
        let outer = table(2, &[1, 0, 2, 3]);
        let inner = table(2, &[0, 2, 1, 3]);
        // inner sends 1 -> 2, outer leaves 2 alone.
        let r = PermutationTable::compose(&outer, &inner).unwrap();
        assert_eq!(r.apply(1).unwrap(), 2);
        let r2 = PermutationTable::compose(&inner, &outer).unwrap();
        assert_eq!(r2.apply(1).unwrap(), 0);
    }

    #[test]
    fn word_size_mismatch() {
        let a = PermutationTable::identity(ws(2));
        let b = PermutationTable::identity(ws(3));
        assert_eq!(
            PermutationTable::compose(&a, &b),
            Err(Error::WordSizeMismatch { left: 2, right: 3 })
        );
        assert!(a.commutes_with(&b).is_err());
    }

    #[test]
    fn transpositions_do_not_commute() {
        let a = table(2, &[1, 0, 2, 3]);
        let b = table(2, &[0, 2, 1, 3]);
        assert!(!a.commutes_with(&b).unwrap());
        assert!(a.commutes_with(&PermutationTable::identity(ws(2))).unwrap());
        for x in 0..8 {
            for y in 0..8 {
                let px = PermutationTable::from_xor_key(ws(3), x).unwrap();
                let py = PermutationTable::from_xor_key(ws(3), y).unwrap();
                assert!(px.commutes_with(&py).unwrap());
            }
        }
    }

    #[test]
    fn involutions() {
        assert!(PermutationTable::identity(ws(3)).is_involution());
        assert!(PermutationTable::from_xor_key(ws(5), 19).unwrap().is_involution());
        assert!(!table(3, &WORKED).is_involution());
    }

    #[test]
    fn dense_view() {
        let d = PermutationTable::identity(ws(2)).to_dense_matrix().unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(d.get(r, c), r == c);
            }
        }
        assert!(d.is_permutation_matrix());
        let p = table(3, &WORKED);
        let dp = p.to_dense_matrix().unwrap();
        assert_eq!(dp.to_table().unwrap(), p);
        assert_eq!(p.invert().to_dense_matrix().unwrap(), dp.transpose());
        let too_big = PermutationTable::identity(ws(11));
        assert_eq!(
            too_big.to_dense_matrix(),
            Err(Error::DenseTooLarge { n: 11, max: 10 })
        );
    }

    #[test]
    fn dense_is_orthogonal() {
        let dp = table(3, &WORKED).to_dense_matrix().unwrap();
        let product = dp.multiply(&dp.transpose()).unwrap().unwrap();
        assert_eq!(product, DenseMatrix::identity(ws(3)).unwrap());
    }

    #[test]
    fn dense_display_rows() {
        let d = table(2, &[1, 0, 2, 3]).to_dense_matrix().unwrap();
        assert_eq!(d.to_string(), "0 1 0 0\n1 0 0 0\n0 0 1 0\n0 0 0 1\n");
    }
}
