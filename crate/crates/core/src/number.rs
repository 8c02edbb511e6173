//! Integer factorisation and multi-index combinatorics.
//!
//! Inputs (the integers being factorised, multi-index parts) are machine
//! width. Every count is returned as a [`BigInt`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Prime factorisation of a positive integer.
///
/// Entries are `(prime, exponent)` with strictly increasing primes, so two
/// factorisations of the same integer compare equal and hash identically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factorization {
    entries: Vec<(u64, u32)>,
    value: u64,
}

impl Factorization {
    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Exponents in prime order.
    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|&(_, a)| a)
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.exponents().sum()
    }

    /// Number of distinct prime factors.
    pub fn num_distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exponents().all(|a| a == 1)
    }

    pub fn is_prime(&self) -> bool {
        self.entries.len() == 1 && self.entries[0].1 == 1
    }

    /// Sorted multiset of exponents; equal for integers with the same
    /// factorisation structure.
    pub fn signature(&self) -> Vec<u32> {
        let mut sig: Vec<u32> = self.exponents().collect();
        sig.sort_unstable();
        sig
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, a)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if a == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{a}")?;
            }
        }
        Ok(())
    }
}

// Offsets between successive integers coprime to 30, starting at 7.
const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];

/// Factorises `n` by trial division over a mod-30 wheel.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(domain("cannot factorise 0"));
    }
    let mut entries = Vec::new();
    let mut rest = n;
    let mut strip = |p: u64, rest: &mut u64| {
        let mut a = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            a += 1;
        }
        if a > 0 {
            entries.push((p, a));
        }
    };
    for p in [2, 3, 5] {
        strip(p, &mut rest);
    }
    let mut p = 7u64;
    let mut w = 0;
    while p <= rest / p {
        strip(p, &mut rest);
        p += WHEEL[w];
        w = (w + 1) % WHEEL.len();
    }
    if rest > 1 {
        entries.push((rest, 1));
    }
    Ok(Factorization { entries, value: n })
}

/// Ω(n), the number of prime factors of `n` with multiplicity.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn big_omega(n: u64) -> u32 {
    factorize(n).expect("big_omega: n must be positive").big_omega()
}

/// # Panics
///
/// Panics if `n == 0`.
pub fn is_squarefree(n: u64) -> bool {
    factorize(n).expect("is_squarefree: n must be positive").is_squarefree()
}

/// # Panics
///
/// Panics if `n == 0`.
pub fn is_prime(n: u64) -> bool {
    factorize(n).expect("is_prime: n must be positive").is_prime()
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Ordinary binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    gen_binomial(n as i64, k as u32)
}

/// Binomial coefficient with an arbitrary integer upper argument,
/// `top (top-1) ... (top-k+1) / k!`.
pub fn gen_binomial(top: i64, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k as i64 {
        // acc holds binom(top, i), and binom(top, i) * (top - i) is divisible by i + 1.
        acc = acc * (top - i) / (i + 1);
    }
    acc
}

/// A tuple of non-negative integers with componentwise order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(parts: Vec<u32>) -> Self {
        MultiIndex(parts)
    }

    pub fn zeros(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    pub fn ones(m: usize) -> Self {
        MultiIndex(vec![1; m])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// |n|, the sum of the parts.
    pub fn size(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    /// n!, the product of the factorials of the parts.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&p| factorial(p as u64)).product()
    }

    /// Componentwise `self <= other`; false when the lengths differ.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise difference, `None` unless `other <= self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.le(self) {
            return None;
        }
        Some(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Componentwise sum.
    ///
    /// # Panics
    ///
    /// Panics if the lengths differ.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.len(), other.len(), "multi-index length mismatch");
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(parts: Vec<u32>) -> Self {
        MultiIndex(parts)
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(parts: &[u32]) -> Self {
        MultiIndex(parts.to_vec())
    }
}

/// |n|! / n!
pub fn multinomial(n: &MultiIndex) -> BigInt {
    multinomial_parts(n.parts())
}

pub(crate) fn multinomial_parts(parts: &[u32]) -> BigInt {
    // Product of binomials binom(n_1 + ... + n_i, n_i) avoids the big division.
    let mut total = 0u64;
    let mut acc = BigInt::one();
    for &p in parts {
        total += p as u64;
        acc *= binomial(total, p as u64);
    }
    acc
}

/// Product of componentwise binomials `binom(n_j, k_j)`.
pub fn multi_binomial(n: &MultiIndex, k: &MultiIndex) -> Result<BigInt> {
    if n.len() != k.len() {
        return Err(domain(format!(
            "multi_binomial: length mismatch ({} vs {})",
            n.len(),
            k.len()
        )));
    }
    if !k.le(n) {
        return Err(domain(format!(
            "multi_binomial: {:?} is not componentwise <= {:?}",
            k.parts(),
            n.parts()
        )));
    }
    Ok(multi_binomial_parts(n.parts(), k.parts()))
}

pub(crate) fn multi_binomial_parts(n: &[u32], k: &[u32]) -> BigInt {
    n.iter()
        .zip(k)
        .map(|(&a, &b)| binomial(a as u64, b as u64))
        .product()
}

/// Odometer over the box `lo <= k <= hi`, last component fastest.
///
/// Yields nothing when `lo <= hi` fails. The empty box (`m = 0`) yields the
/// empty multi-index once.
#[derive(Debug, Clone)]
pub struct BoxIter {
    lo: Vec<u32>,
    hi: Vec<u32>,
    cur: Option<Vec<u32>>,
}

impl BoxIter {
    pub fn new(lo: &[u32], hi: &[u32]) -> Self {
        assert_eq!(lo.len(), hi.len(), "box bounds length mismatch");
        let nonempty = lo.iter().zip(hi).all(|(a, b)| a <= b);
        BoxIter {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            cur: nonempty.then(|| lo.to_vec()),
        }
    }
}

impl Iterator for BoxIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.cur.clone()?;
        let cur = self.cur.as_mut().unwrap();
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if cur[i] < self.hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = self.lo[i];
        }
        Some(out)
    }
}
