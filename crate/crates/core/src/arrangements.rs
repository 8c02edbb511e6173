//! Linear arrangements of typed blocks in which no two neighbours share a
//! type.
//!
//! For a profile `n` (`n_j` blocks of type `j`) the count is
//!
//! ```text
//! e_n = sum_{0 <= k <= n - 1} (-1)^{|k|} binom(n - 1, k) multinomial(n - k)
//! ```
//!
//! Terms are grouped by `t = |k|`; the group sums are the annotated
//! arrangement counts `|A_t|`, so `e_n = sum_t (-1)^t |A_t|`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::number::{multi_binomial_parts, multinomial_parts, BoxIter, MultiIndex};

/// Largest profile size accepted by [`count_arrangements_bruteforce`].
pub const BRUTEFORCE_MAX_BLOCKS: u64 = 12;

/// Block counts per type, all positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrangementProfile {
    counts: MultiIndex,
}

impl ArrangementProfile {
    /// Rejects zero parts.
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if let Some(j) = counts.iter().position(|&c| c == 0) {
            return Err(domain(format!(
                "arrangement profile has no blocks of type {}",
                j + 1
            )));
        }
        Ok(ArrangementProfile {
            counts: MultiIndex::new(counts),
        })
    }

    /// Drops types with zero blocks. The empty profile has one arrangement.
    pub fn normalized(counts: Vec<u32>) -> Self {
        ArrangementProfile {
            counts: MultiIndex::new(counts.into_iter().filter(|&c| c > 0).collect()),
        }
    }

    pub fn counts(&self) -> &MultiIndex {
        &self.counts
    }

    pub fn parts(&self) -> &[u32] {
        self.counts.parts()
    }

    pub fn num_types(&self) -> usize {
        self.counts.len()
    }

    pub fn num_blocks(&self) -> u64 {
        self.counts.size()
    }

    /// Largest number of ticks an annotated arrangement can carry, `|n| - m`.
    pub fn max_ticks(&self) -> u64 {
        self.num_blocks() - self.num_types() as u64
    }
}

/// `|A_t|` for every `t` in `0..=|n| - m`, walking the box
/// `0 <= k <= n - 1` once in odometer order.
pub fn annotated_counts(n: &ArrangementProfile) -> Vec<BigInt> {
    let parts = n.parts();
    let hi: Vec<u32> = parts.iter().map(|&p| p - 1).collect();
    let lo = vec![0; parts.len()];
    let mut groups = vec![BigInt::zero(); n.max_ticks() as usize + 1];
    let mut rest = vec![0u32; parts.len()];
    for k in BoxIter::new(&lo, &hi) {
        let t: u64 = k.iter().map(|&x| x as u64).sum();
        for (r, (&p, &kk)) in rest.iter_mut().zip(parts.iter().zip(&k)) {
            *r = p - kk;
        }
        groups[t as usize] += multi_binomial_parts(&hi, &k) * multinomial_parts(&rest);
    }
    groups
}

/// `e_n`, the number of arrangements with no two equal neighbours.
pub fn count_arrangements(n: &ArrangementProfile) -> BigInt {
    let mut acc = BigInt::zero();
    for (t, a) in annotated_counts(n).into_iter().enumerate() {
        if t % 2 == 0 {
            acc += a;
        } else {
            acc -= a;
        }
    }
    debug_assert!(acc >= BigInt::zero());
    acc
}

/// Same count by backtracking over actual sequences.
pub fn count_arrangements_bruteforce(n: &ArrangementProfile) -> Result<BigInt> {
    let total = n.num_blocks();
    if total > BRUTEFORCE_MAX_BLOCKS {
        return Err(Error::Guard {
            what: "brute-force arrangement size",
            actual: total as u128,
            limit: BRUTEFORCE_MAX_BLOCKS as u128,
        });
    }
    let mut left = n.parts().to_vec();
    Ok(BigInt::from(backtrack(&mut left, total, None)))
}

fn backtrack(left: &mut [u32], remaining: u64, last: Option<usize>) -> u64 {
    if remaining == 0 {
        return 1;
    }
    let mut count = 0;
    for j in 0..left.len() {
        if left[j] == 0 || Some(j) == last {
            continue;
        }
        left[j] -= 1;
        count += backtrack(left, remaining - 1, Some(j));
        left[j] += 1;
    }
    count
}

/// Two types alternate: two arrangements when the counts are equal, one
/// when they differ by one, none otherwise.
pub fn count_arrangements_2d(n1: u32, n2: u32) -> BigInt {
    match n1.abs_diff(n2) {
        0 => BigInt::from(2),
        1 => BigInt::one(),
        _ => BigInt::zero(),
    }
}

/// `|A_t|`, arrangements (equal neighbours allowed) with `t` marked blocks
/// each followed by a block of the same type.
pub fn count_annotated(n: &ArrangementProfile, t: u64) -> BigInt {
    if t > n.max_ticks() {
        return BigInt::zero();
    }
    annotated_counts(n).swap_remove(t as usize)
}

/// `sum_{1 <= k <= n} binom(n - 1, k - 1) e_k`, which counts every
/// arrangement by its collapsed form and so equals `multinomial(n)`.
pub fn count_collapse_check(n: &ArrangementProfile) -> BigInt {
    let parts = n.parts();
    let ones = vec![1u32; parts.len()];
    let below: Vec<u32> = parts.iter().map(|&p| p - 1).collect();
    let mut acc = BigInt::zero();
    for k in BoxIter::new(&ones, parts) {
        let km1: Vec<u32> = k.iter().map(|&x| x - 1).collect();
        let profile = ArrangementProfile {
            counts: MultiIndex::new(k),
        };
        acc += multi_binomial_parts(&below, &km1) * count_arrangements(&profile);
    }
    acc
}
