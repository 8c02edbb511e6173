//! Sum systems: sets `A_1, ..., A_m` of non-negative integers whose sums
//! `x_1 + ... + x_m` (`x_k` in `A_k`) hit each of `0..prod |A_k|` exactly
//! once.
//!
//! A joint ordered factorisation `((j_1, f_1), ..., (j_L, f_L))` yields one:
//!
//! ```text
//! A_k = sum over l with j_l = k of (f_1 ... f_{l-1}) * {0, 1, ..., f_l - 1}
//! ```

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jof::{enumerate_jof, DimTuple, Jof, JofIter};

/// Default cap on `prod |A_k|` for verification.
pub const DEFAULT_VERIFY_GUARD: u64 = 10_000_000;

/// `m` sorted sets of non-negative integers, none empty.
///
/// Serialises as `{"dims": [...], "components": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "SumSystemJson", try_from = "SumSystemJson")]
pub struct SumSystem {
    components: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct SumSystemJson {
    dims: Vec<u64>,
    components: Vec<Vec<u64>>,
}

impl From<SumSystem> for SumSystemJson {
    fn from(s: SumSystem) -> Self {
        SumSystemJson {
            dims: s.dims(),
            components: s.components,
        }
    }
}

impl TryFrom<SumSystemJson> for SumSystem {
    type Error = Error;

    fn try_from(raw: SumSystemJson) -> Result<Self> {
        let sys = SumSystem::new(raw.components)?;
        if sys.dims() != raw.dims {
            return Err(Error::InvalidSumSystem(format!(
                "dims {:?} do not match component sizes {:?}",
                raw.dims,
                sys.dims()
            )));
        }
        Ok(sys)
    }
}

impl SumSystem {
    /// Sorts each set; rejects empty sets and repeated elements.
    pub fn new(mut components: Vec<Vec<u64>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidSumSystem("no components".into()));
        }
        for (k, set) in components.iter_mut().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidSumSystem(format!("component {} is empty", k + 1)));
            }
            set.sort_unstable();
            if let Some(w) = set.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidSumSystem(format!(
                    "component {} repeats {}",
                    k + 1,
                    w[0]
                )));
            }
        }
        Ok(SumSystem { components })
    }

    pub fn components(&self) -> &[Vec<u64>] {
        &self.components
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    /// `|A_k|` for each component.
    pub fn dims(&self) -> Vec<u64> {
        self.components.iter().map(|s| s.len() as u64).collect()
    }

    /// Number of sums, `prod |A_k|`, if it fits in 64 bits.
    pub fn num_sums(&self) -> Option<u64> {
        self.components
            .iter()
            .try_fold(1u64, |acc, s| acc.checked_mul(s.len() as u64))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sum system serialises")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("sum system serialises")
    }

    /// Parses the JSON form; `dims` must match the set sizes.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: SumSystemJson = serde_json::from_str(s)
            .map_err(|e| Error::InvalidSumSystem(format!("malformed JSON: {e}")))?;
        SumSystem::try_from(raw)
    }
}

/// Builds the sum system of a joint ordered factorisation.
pub fn build_sum_system(jof: &Jof) -> Result<SumSystem> {
    let m = jof.dims().m();
    jof.dims().product().ok_or_else(|| {
        Error::Overflow(format!("product of dimensions {} exceeds 64 bits", jof.dims()))
    })?;
    let mut sets: Vec<Vec<u64>> = vec![vec![0]; m];
    // prefix stays <= prod a_j, which fits.
    let mut prefix = 1u64;
    for &(c, f) in jof.pairs() {
        let set = &mut sets[c - 1];
        let mut next = Vec::with_capacity(set.len() * f as usize);
        for i in 0..f {
            let shift = prefix * i;
            next.extend(set.iter().map(|&x| x + shift));
        }
        *set = next;
        prefix *= f;
    }
    for set in &mut sets {
        set.sort_unstable();
        debug_assert!(set.windows(2).all(|w| w[0] < w[1]), "construction repeated an element");
    }
    Ok(SumSystem { components: sets })
}

/// Why a system fails the sum-system property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum Witness {
    /// Some sum is attained twice.
    Duplicate(u64),
    /// Some value below `prod |A_k|` is never attained.
    Missing(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub witness: Option<Witness>,
    pub num_sums: u64,
}

fn check_guard(s: &SumSystem, guard: u64) -> Result<u64> {
    let total = s.num_sums().ok_or(Error::Guard {
        what: "number of sums",
        actual: u128::MAX,
        limit: guard as u128,
    })?;
    if total > guard {
        return Err(Error::Guard {
            what: "number of sums",
            actual: total as u128,
            limit: guard as u128,
        });
    }
    Ok(total)
}

/// Exhaustive check with a bitset over `0..prod |A_k|`, stopping at the
/// first repeated sum. Sums at or beyond the range are skipped; the count
/// then guarantees a missing value, which is reported.
pub fn verify_sum_system(s: &SumSystem, guard: u64) -> Result<Verdict> {
    let total = check_guard(s, guard)?;
    let mut seen = vec![0u64; (total as usize).div_ceil(64)];
    let mut dup = None;
    let comps = &s.components;
    let mut idx = vec![0usize; comps.len()];
    'outer: loop {
        let sum = idx
            .iter()
            .zip(comps)
            .try_fold(0u64, |acc, (&i, set)| acc.checked_add(set[i]));
        if let Some(v) = sum.filter(|&v| v < total) {
            let (w, b) = ((v / 64) as usize, v % 64);
            if seen[w] >> b & 1 == 1 {
                dup = Some(v);
                break;
            }
            seen[w] |= 1 << b;
        }
        let mut k = comps.len();
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < comps[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
    let witness = match dup {
        Some(v) => Some(Witness::Duplicate(v)),
        None => first_missing(&seen, total).map(Witness::Missing),
    };
    Ok(Verdict {
        valid: witness.is_none(),
        witness,
        num_sums: total,
    })
}

fn first_missing(seen: &[u64], total: u64) -> Option<u64> {
    (0..total).find(|&v| seen[(v / 64) as usize] >> (v % 64) & 1 == 0)
}

/// Parallel version of [`verify_sum_system`], split over the elements of the
/// first component. Agrees with the sequential verdict; on failure the
/// witness comes from a sequential rerun so both report the same value.
pub fn verify_sum_system_par(s: &SumSystem, guard: u64) -> Result<Verdict> {
    let total = check_guard(s, guard)?;
    let seen: Vec<AtomicU64> = (0..(total as usize).div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
    let (head, rest) = s.components.split_first().expect("at least one component");
    // All partial sums of the remaining components.
    let mut tails = vec![0u64];
    for set in rest {
        tails = tails
            .iter()
            .flat_map(|&t| set.iter().map(move |&x| t.saturating_add(x)))
            .collect();
    }
    let clean = head.par_iter().all(|&x| {
        tails.iter().all(|&t| {
            let v = x.saturating_add(t);
            if v >= total {
                return true;
            }
            let bit = 1u64 << (v % 64);
            seen[(v / 64) as usize].fetch_or(bit, Ordering::Relaxed) & bit == 0
        })
    });
    if clean {
        let words: Vec<u64> = seen.into_iter().map(AtomicU64::into_inner).collect();
        if first_missing(&words, total).is_none() {
            return Ok(Verdict {
                valid: true,
                witness: None,
                num_sums: total,
            });
        }
    }
    verify_sum_system(s, guard)
}

/// Every joint ordered factorisation of `a` paired with its sum system.
pub struct SumSystems {
    inner: JofIter,
}

impl Iterator for SumSystems {
    type Item = (Jof, SumSystem);

    fn next(&mut self) -> Option<Self::Item> {
        let jof = self.inner.next()?;
        let sys = build_sum_system(&jof).expect("dimension product checked up front");
        Some((jof, sys))
    }
}

pub fn build_all_sum_systems(a: &DimTuple, guard: u64) -> Result<SumSystems> {
    let product = a.product().ok_or(Error::Guard {
        what: "product of dimensions",
        actual: u128::MAX,
        limit: guard as u128,
    })?;
    if product > guard {
        return Err(Error::Guard {
            what: "product of dimensions",
            actual: product as u128,
            limit: guard as u128,
        });
    }
    Ok(SumSystems {
        inner: enumerate_jof(a),
    })
}

/// Result of checking the forward map from chains to sum systems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForwardReport {
    pub count: u64,
    pub all_valid: bool,
    pub all_distinct: bool,
    pub cardinalities_match: bool,
}

/// Builds and verifies every sum system of `a`, checking that distinct
/// chains give distinct systems.
pub fn check_forward_map(a: &DimTuple, guard: u64) -> Result<ForwardReport> {
    let mut seen = HashSet::new();
    let mut report = ForwardReport {
        count: 0,
        all_valid: true,
        all_distinct: true,
        cardinalities_match: true,
    };
    for (_, sys) in build_all_sum_systems(a, guard)? {
        report.count += 1;
        report.all_valid &= verify_sum_system(&sys, guard)?.valid;
        report.cardinalities_match &= sys.dims() == a.parts();
        report.all_distinct &= seen.insert(sys);
    }
    Ok(report)
}
