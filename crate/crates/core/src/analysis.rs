//! Entropy figures and brute-force checks on small symmetric groups.
//!
//! Exact checks enumerate `S_{2^n}` for `n <= 3` (at most 40320 tables).
//! Statistical checks draw from a seeded ChaCha8 generator so results are
//! reproducible; pass a different seed to re-run honestly.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::padgen::{Generator, RngBits};
use crate::permutation::{PermutationTable, WordSize};
use crate::{Error, Result, Word};

/// Largest `n` whose symmetric group is enumerated.
pub const MAX_ENUMERABLE: u8 = 3;
/// Largest `n` for the exact commuting-pair count (576 ordered pairs at n = 2).
pub const MAX_EXACT_COMMUTE: u8 = 2;
/// Largest `n` for the pairwise XOR subgroup check.
pub const MAX_XOR_CHECK: u8 = 8;
/// Significance level of the embedded chi-square critical values.
pub const SIGNIFICANCE: f64 = 0.001;

/// Upper 0.1% points of the chi-square distribution for the degrees of
/// freedom the suites use: `2^n - 1` for n = 1..=8, plus 23 (`4! - 1`).
const CHI_SQUARE_999: [(u64, f64); 9] = [
    (1, 10.828),
    (3, 16.266),
    (7, 24.322),
    (15, 37.697),
    (23, 49.728),
    (31, 61.098),
    (63, 103.442),
    (127, 181.993),
    (255, 330.520),
];

pub fn chi_square_critical_999(dof: u64) -> Option<f64> {
    CHI_SQUARE_999
        .iter()
        .find(|(d, _)| *d == dof)
        .map(|&(_, v)| v)
}

/// Pearson statistic of `observed` against equal expected counts.
pub fn chi_square_uniform(observed: &[u64]) -> f64 {
    let total: u64 = observed.iter().sum();
    if observed.is_empty() || total == 0 {
        return 0.0;
    }
    let expected = total as f64 / observed.len() as f64;
    observed
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// `log2(N!)`, summed with Neumaier compensation. `log2_factorial(0) == 0`.
pub fn log2_factorial(n: u64) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for i in 2..=n {
        let term = (i as f64).log2();
        let t = sum + term;
        if sum.abs() >= term.abs() {
            carry += (sum - t) + term;
        } else {
            carry += (term - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

pub fn log10_factorial(n: u64) -> f64 {
    log2_factorial(n) * std::f64::consts::LOG10_2
}

/// `N!` when it fits in a `u64` (N <= 20).
pub fn factorial_exact(n: u64) -> Option<u64> {
    (1..=n).try_fold(1u64, |acc, i| acc.checked_mul(i))
}

/// Order of `S_{2^n}`: exact for `n <= 3`, otherwise as `log10`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupOrder {
    Exact(u64),
    Log10(f64),
}

impl GroupOrder {
    pub fn of(n: WordSize) -> Self {
        let size = n.domain_size() as u64;
        if n.bits() <= MAX_ENUMERABLE {
            GroupOrder::Exact(factorial_exact(size).expect("8! fits"))
        } else {
            GroupOrder::Log10(log10_factorial(size))
        }
    }

    pub fn log10(self) -> f64 {
        match self {
            GroupOrder::Exact(v) => (v as f64).log10(),
            GroupOrder::Log10(v) => v,
        }
    }

    pub fn exact(self) -> Option<u64> {
        match self {
            GroupOrder::Exact(v) => Some(v),
            GroupOrder::Log10(_) => None,
        }
    }
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Exact(v) => write!(f, "{v}"),
            GroupOrder::Log10(v) => write!(f, "10^{v:.3}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub n: u8,
    /// Number of tables `M`.
    pub tables: u64,
    /// `M * n`, the entropy of an `M`-word one-time pad.
    pub otp_bits: u64,
    /// `M * log2(2^n!)`.
    pub qpp_bits: f64,
    /// `M * n + M * log2((2^n - 1)!)`, the same quantity split differently.
    pub qpp_bits_split: f64,
    pub log10_group_order: f64,
}

pub fn entropy_report(n: WordSize, tables: u64) -> Result<EntropyReport> {
    if tables == 0 {
        return Err(Error::EmptyPad);
    }
    let size = n.domain_size() as u64;
    let m = tables as f64;
    let per_table = log2_factorial(size);
    Ok(EntropyReport {
        n: n.bits(),
        tables,
        otp_bits: tables * n.bits() as u64,
        qpp_bits: m * per_table,
        qpp_bits_split: m * n.bits() as f64 + m * log2_factorial(size - 1),
        log10_group_order: per_table * std::f64::consts::LOG10_2,
    })
}

fn ensure_enumerable(n: WordSize, max: u8) -> Result<()> {
    if n.bits() <= max {
        Ok(())
    } else {
        Err(Error::TooLargeToEnumerate { n: n.bits(), max })
    }
}

/// All of `S_{2^n}` in lexicographic order of the mapping arrays.
#[derive(Debug, Clone)]
pub struct Permutations {
    n: WordSize,
    next: Option<Vec<u16>>,
}

impl Iterator for Permutations {
    type Item = PermutationTable;

    fn next(&mut self) -> Option<PermutationTable> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(PermutationTable::from_map_unchecked(self.n, current))
    }
}

// Standard in-place successor; false once the sequence is descending.
fn next_permutation(a: &mut [u16]) -> bool {
    let Some(pivot) = a.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let swap_with = a.iter().rposition(|&x| x > a[pivot]).unwrap();
    a.swap(pivot, swap_with);
    a[pivot + 1..].reverse();
    true
}

pub fn enumerate_group(n: WordSize) -> Result<Permutations> {
    ensure_enumerable(n, MAX_ENUMERABLE)?;
    Ok(Permutations {
        n,
        next: Some(PermutationTable::identity(n).as_slice().to_vec()),
    })
}

/// Position of `table` in the lexicographic order of its group (Lehmer code).
///
/// Defined for `2^n <= 16`, where the rank fits in a `u64`.
pub fn lexicographic_rank(table: &PermutationTable) -> Option<u64> {
    let map = table.as_slice();
    let size = map.len() as u64;
    factorial_exact(size)?;
    let mut rank = 0u64;
    for (i, &v) in map.iter().enumerate() {
        let smaller_after = map[i + 1..].iter().filter(|&&x| x < v).count() as u64;
        rank += smaller_after * factorial_exact(size - 1 - i as u64)?;
    }
    Some(rank)
}

/// `|{σ ∈ S_{2^n} : σ(plain) = cipher}|`, counted by enumeration.
pub fn count_mappings(n: WordSize, plain: Word, cipher: Word) -> Result<u64> {
    let plain = n.check(plain)?;
    let cipher = n.check(cipher)?;
    Ok(enumerate_group(n)?
        .filter(|t| t.apply_in_range(plain) == cipher)
        .count() as u64)
}

/// Counts for every `(plain, cipher)` pair from a single pass over the group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub n: u8,
    pub group_order: u64,
    /// `(2^n - 1)!`, the count every pair should have.
    pub expected_per_pair: u64,
    /// `counts[m][c]` tables send `m` to `c`.
    pub counts: Vec<Vec<u64>>,
    pub pairs: usize,
    pub min_count: u64,
    pub max_count: u64,
}

impl DegeneracyReport {
    pub fn passed(&self) -> bool {
        self.min_count == self.expected_per_pair
            && self.max_count == self.expected_per_pair
            && self
                .counts
                .iter()
                .all(|row| row.iter().sum::<u64>() == self.group_order)
    }
}

pub fn degeneracy_report(n: WordSize) -> Result<DegeneracyReport> {
    let size = n.domain_size();
    let mut counts = vec![vec![0u64; size]; size];
    let mut group_order = 0u64;
    for table in enumerate_group(n)? {
        group_order += 1;
        for (m, &c) in table.as_slice().iter().enumerate() {
            counts[m][c as usize] += 1;
        }
    }
    let flat = counts.iter().flatten();
    let min_count = flat.clone().copied().min().unwrap_or(0);
    let max_count = flat.copied().max().unwrap_or(0);
    Ok(DegeneracyReport {
        n: n.bits(),
        group_order,
        expected_per_pair: factorial_exact(size as u64 - 1).expect("7! fits"),
        counts,
        pairs: size * size,
        min_count,
        max_count,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorSubgroupReport {
    pub n: u8,
    pub size: u64,
    pub involutions: u64,
    /// Unordered pairs `{a, b}`, `a < b`, that commute.
    pub commuting_pairs: u64,
    pub total_pairs: u64,
    /// `compose(X_a, X_b) == X_{a^b}` for every ordered pair.
    pub closure_holds: bool,
}

impl XorSubgroupReport {
    pub fn passed(&self) -> bool {
        self.size == 1u64 << self.n
            && self.involutions == self.size
            && self.commuting_pairs == self.total_pairs
            && self.closure_holds
    }
}

pub fn xor_subgroup_report(n: WordSize) -> Result<XorSubgroupReport> {
    ensure_enumerable(n, MAX_XOR_CHECK)?;
    let tables: Vec<PermutationTable> = (0..n.domain_size() as Word)
        .map(|k| PermutationTable::from_xor_key(n, k))
        .collect::<Result<_>>()?;
    let size = tables.len() as u64;
    let involutions = tables.iter().filter(|t| t.is_involution()).count() as u64;

    let mut commuting_pairs = 0u64;
    let mut closure_holds = true;
    for (a, ta) in tables.iter().enumerate() {
        for (b, tb) in tables.iter().enumerate() {
            let product = PermutationTable::compose(ta, tb)?;
            closure_holds &= product == tables[a ^ b];
            if a < b && ta.commutes_with(tb)? {
                commuting_pairs += 1;
            }
        }
    }
    Ok(XorSubgroupReport {
        n: n.bits(),
        size,
        involutions,
        commuting_pairs,
        total_pairs: size * (size - 1) / 2,
        closure_holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum CommuteMode {
    /// Every ordered pair of `S_{2^n}`; `n <= 2`.
    Exact,
    /// `samples` ordered pairs of independent uniform tables.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommuteReport {
    pub n: u8,
    pub mode: CommuteMode,
    pub commuting: u64,
    pub total: u64,
    pub fraction: f64,
}

pub fn commuting_fraction(n: WordSize, mode: CommuteMode) -> Result<CommuteReport> {
    let (commuting, total) = match mode {
        CommuteMode::Exact => {
            ensure_enumerable(n, MAX_EXACT_COMMUTE)?;
            let group: Vec<_> = enumerate_group(n)?.collect();
            let mut commuting = 0u64;
            for p in &group {
                for q in &group {
                    if p.commutes_with(q)? {
                        commuting += 1;
                    }
                }
            }
            (commuting, (group.len() * group.len()) as u64)
        }
        CommuteMode::Sampled { samples, seed } => {
            let mut bits = RngBits::new(ChaCha8Rng::seed_from_u64(seed));
            let mut commuting = 0u64;
            for _ in 0..samples {
                let p = Generator::Unbiased.shuffle(n, &mut bits)?;
                let q = Generator::Unbiased.shuffle(n, &mut bits)?;
                if p.commutes_with(&q)? {
                    commuting += 1;
                }
            }
            (commuting, samples)
        }
    };
    let fraction = if total == 0 {
        0.0
    } else {
        commuting as f64 / total as f64
    };
    Ok(CommuteReport {
        n: n.bits(),
        mode,
        commuting,
        total,
        fraction,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub n: u8,
    pub generator: Generator,
    pub samples: u64,
    pub seed: u64,
    pub histogram: Vec<u64>,
    pub statistic: f64,
    pub dof: u64,
    /// Critical value at [`SIGNIFICANCE`], when one is tabulated for `dof`.
    pub critical_value: Option<f64>,
}

impl UniformityReport {
    /// `None` when no critical value is tabulated for this `dof`.
    pub fn passed(&self) -> Option<bool> {
        self.critical_value.map(|c| self.statistic < c)
    }
}

/// Encrypts `plain` under `samples` independently generated tables and tests
/// the ciphertext histogram against uniform with `2^n - 1` degrees of freedom.
///
/// Tables come from `generator` fed by a seeded random bit stream. Use
/// [`Generator::Unbiased`] for the claim under test; other generators are
/// measured for comparison.
pub fn uniformity_chi_square(
    n: WordSize,
    plain: Word,
    samples: u64,
    seed: u64,
    generator: Generator,
) -> Result<UniformityReport> {
    let plain = n.check(plain)?;
    let bins = n.domain_size();
    let minimum = 100 * bins as u64;
    if samples < minimum {
        return Err(Error::InsufficientSamples { samples, minimum });
    }
    let mut bits = RngBits::new(ChaCha8Rng::seed_from_u64(seed));
    let mut histogram = vec![0u64; bins];
    for _ in 0..samples {
        let table = generator.shuffle(n, &mut bits)?;
        histogram[table.apply_in_range(plain) as usize] += 1;
    }
    let dof = bins as u64 - 1;
    Ok(UniformityReport {
        n: n.bits(),
        generator,
        samples,
        seed,
        statistic: chi_square_uniform(&histogram),
        histogram,
        dof,
        critical_value: chi_square_critical_999(dof),
    })
}

/// Histogram of whole tables (indexed by lexicographic rank) produced by
/// `generator`, tested against uniform over all `2^n!` tables. `n <= 2`.
pub fn table_uniformity(
    n: WordSize,
    samples: u64,
    seed: u64,
    generator: Generator,
) -> Result<UniformityReport> {
    ensure_enumerable(n, MAX_EXACT_COMMUTE)?;
    let bins = factorial_exact(n.domain_size() as u64).expect("4! fits") as usize;
    let minimum = 5 * bins as u64;
    if samples < minimum {
        return Err(Error::InsufficientSamples { samples, minimum });
    }
    let mut bits = RngBits::new(ChaCha8Rng::seed_from_u64(seed));
    let mut histogram = vec![0u64; bins];
    for _ in 0..samples {
        let table = generator.shuffle(n, &mut bits)?;
        histogram[lexicographic_rank(&table).expect("small group") as usize] += 1;
    }
    let dof = bins as u64 - 1;
    Ok(UniformityReport {
        n: n.bits(),
        generator,
        samples,
        seed,
        statistic: chi_square_uniform(&histogram),
        histogram,
        dof,
        critical_value: chi_square_critical_999(dof),
    })
}

/// Summary of the single-use secrecy checks for one word size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecrecyReport {
    pub n: u8,
    pub group_order: GroupOrder,
    /// `(2^n - 1)!`, exact when the group order is.
    pub degeneracy_per_pair: GroupOrder,
    pub uniform: bool,
    pub chi_square_statistic: f64,
    pub commuting_pair_fraction: f64,
}

impl SecrecyReport {
    pub fn new(n: WordSize, uniformity: &UniformityReport, commute: &CommuteReport) -> Self {
        let degeneracy_per_pair = if n.bits() <= MAX_ENUMERABLE {
            GroupOrder::Exact(factorial_exact(n.domain_size() as u64 - 1).expect("fits"))
        } else {
            GroupOrder::Log10(log10_factorial(n.domain_size() as u64 - 1))
        };
        Self {
            n: n.bits(),
            group_order: GroupOrder::of(n),
            degeneracy_per_pair,
            uniform: uniformity.passed().unwrap_or(false),
            chi_square_statistic: uniformity.statistic,
            commuting_pair_fraction: commute.fraction,
        }
    }
}
