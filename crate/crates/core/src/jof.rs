//! Joint ordered factorisations of a tuple `a = (a_1, ..., a_m)`.
//!
//! A joint ordered factorisation is a chain of `(component, factor)` pairs
//! with every factor at least 2, such that the factors tagged `j` multiply to
//! `a_j` and no two neighbouring pairs share a component. Components are
//! 1-based throughout, matching the JSON interchange format
//! `[[1,2],[5,2],[2,2],...]`.
//!
//! Counting routes, all exact and all expected to agree:
//!
//! | function                  | route                                              |
//! |---------------------------|----------------------------------------------------|
//! | [`count_jof`]             | `sum_l multinomial(l) prod_j c_{l_j}^(-l_j)(a_j)`  |
//! | [`count_jof_by_profiles`] | `sum_n e_n prod_j c_{n_j}(a_j)`                    |
//! | [`count_jof_alternating`] | signed square-free factorisation counts            |
//! | [`count_jof_2d`]          | alternating two-type arrangements (`m = 2`)        |
//! | [`count_jof_symmetric`]   | `2 sum_n c_n(a) c_n^(1)(a)` for `(a, a)`           |
//! | [`count_jof_enumerated`]  | walking every chain                                |

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangements::{count_arrangements, ArrangementProfile};
use crate::dirichlet::{c_j_r_factored, count_squarefree_factorisations};
use crate::error::{domain, Error, Result};
use crate::number::{divisors, factorial, factorize, multinomial_parts, BoxIter, Factorization, MultiIndex};

/// The tuple being jointly factorised: `m >= 1` entries, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DimTuple(Vec<u64>);

impl DimTuple {
    pub fn new(dims: Vec<u64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(domain("dimension tuple is empty"));
        }
        if let Some(j) = dims.iter().position(|&a| a < 2) {
            return Err(domain(format!(
                "dimension {} is {}, every dimension must be at least 2",
                j + 1,
                dims[j]
            )));
        }
        Ok(DimTuple(dims))
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn factorizations(&self) -> Vec<Factorization> {
        self.0.iter().map(|&a| factorize(a).expect("a_j >= 2")).collect()
    }

    /// `prod a_j`, if it fits in 64 bits.
    pub fn product(&self) -> Option<u64> {
        self.0.iter().try_fold(1u64, |acc, &a| acc.checked_mul(a))
    }
}

impl<'de> Deserialize<'de> for DimTuple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<u64>::deserialize(d)?;
        DimTuple::new(raw).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for DimTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// `(component, factor)`, component 1-based.
pub type JofPair = (usize, u64);

/// A validated joint ordered factorisation.
///
/// Serialises as the bare pair list; deserialising infers the dimensions
/// from the factor products.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<JofPair>", into = "Vec<JofPair>")]
pub struct Jof {
    pairs: Vec<JofPair>,
    dims: DimTuple,
}

impl Jof {
    /// Checks `pairs` against `dims`.
    pub fn new(pairs: Vec<JofPair>, dims: DimTuple) -> Result<Self> {
        validate(&pairs, &dims)?;
        Ok(Jof { pairs, dims })
    }

    /// Infers `m` as the largest component and `a_j` as the product of the
    /// factors tagged `j`; every component in `1..=m` must occur.
    pub fn from_pairs(pairs: Vec<JofPair>) -> Result<Self> {
        let m = pairs.iter().map(|p| p.0).max().unwrap_or(0);
        if m == 0 {
            return Err(Error::InvalidJof(
                "empty chain or component 0 (components are 1-based)".into(),
            ));
        }
        let mut dims = vec![1u64; m];
        for (i, &(c, f)) in pairs.iter().enumerate() {
            if c == 0 {
                return Err(Error::InvalidJof("component 0 (components are 1-based)".into()));
            }
            if f < 2 {
                return Err(Error::InvalidJof(format!(
                    "pair {} has factor {f}, factors must be at least 2",
                    i + 1
                )));
            }
            dims[c - 1] = dims[c - 1].checked_mul(f).ok_or_else(|| {
                Error::Overflow(format!("product of factors of component {c} exceeds 64 bits"))
            })?;
        }
        if let Some(j) = dims.iter().position(|&a| a == 1) {
            return Err(Error::InvalidJof(format!(
                "component {} has no factors (components must be 1..={m})",
                j + 1
            )));
        }
        let dims = DimTuple::new(dims).map_err(|e| Error::InvalidJof(e.to_string()))?;
        Jof::new(pairs, dims)
    }

    pub fn pairs(&self) -> &[JofPair] {
        &self.pairs
    }

    pub fn dims(&self) -> &DimTuple {
        &self.dims
    }

    /// Chain length `L`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.pairs).expect("pairs serialise")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let pairs: Vec<JofPair> =
            serde_json::from_str(s).map_err(|e| Error::InvalidJof(format!("malformed JSON: {e}")))?;
        Jof::from_pairs(pairs)
    }
}

impl TryFrom<Vec<JofPair>> for Jof {
    type Error = Error;

    fn try_from(pairs: Vec<JofPair>) -> Result<Self> {
        Jof::from_pairs(pairs)
    }
}

impl From<Jof> for Vec<JofPair> {
    fn from(j: Jof) -> Self {
        j.pairs
    }
}

/// Checks both defining conditions; the error names the violated one.
pub fn validate(pairs: &[JofPair], dims: &DimTuple) -> Result<()> {
    let m = dims.m();
    if pairs.is_empty() {
        return Err(Error::InvalidJof("empty chain".into()));
    }
    let mut prod = vec![1u64; m];
    for (l, &(c, f)) in pairs.iter().enumerate() {
        if c == 0 || c > m {
            return Err(Error::InvalidJof(format!(
                "pair {} has component {c}, expected 1..={m}",
                l + 1
            )));
        }
        if f < 2 {
            return Err(Error::InvalidJof(format!(
                "pair {} has factor {f}, factors must be at least 2",
                l + 1
            )));
        }
        if l > 0 && pairs[l - 1].0 == c {
            return Err(Error::InvalidJof(format!(
                "adjacent pairs {} and {} share component {c}",
                l,
                l + 1
            )));
        }
        prod[c - 1] = prod[c - 1].checked_mul(f).ok_or_else(|| {
            Error::InvalidJof(format!("factors of component {c} overflow 64 bits"))
        })?;
    }
    for (j, (&p, &a)) in prod.iter().zip(dims.parts()).enumerate() {
        if p != a {
            return Err(Error::InvalidJof(format!(
                "factors of component {} multiply to {p}, expected {a}",
                j + 1
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Counting

fn omegas(fs: &[Factorization]) -> Vec<u32> {
    fs.iter().map(|f| f.big_omega()).collect()
}

fn sum_over_profiles(omega: &[u32], mut term: impl FnMut(&[u32]) -> BigInt) -> BigInt {
    let ones = vec![1; omega.len()];
    BoxIter::new(&ones, omega).map(|l| term(&l)).sum()
}

/// `N_a = sum_{l >= 1} multinomial(l) prod_j c_{l_j}^(-l_j)(a_j)`, with the
/// sum cut at `l_j <= Ω(a_j)` where the terms vanish.
pub fn count_jof(a: &DimTuple) -> BigInt {
    let fs = a.factorizations();
    let omega = omegas(&fs);
    // diag[j][l] = c_l^(-l)(a_j)
    let diag: Vec<Vec<BigInt>> = fs
        .iter()
        .zip(&omega)
        .map(|(f, &w)| {
            debug_assert!(c_j_r_factored(w + 1, -(w as i64) - 1, f).is_zero());
            (0..=w).map(|l| c_j_r_factored(l, -(l as i64), f)).collect()
        })
        .collect();
    sum_over_profiles(&omega, |l| {
        let weight: BigInt = l.iter().zip(&diag).map(|(&lj, d)| &d[lj as usize]).product();
        if weight.is_zero() {
            return weight;
        }
        multinomial_parts(l) * weight
    })
}

/// Joint ordered factorisations in which `a_j` splits into exactly `n_j`
/// factors: `e_n prod_j c_{n_j}(a_j)`.
pub fn count_jof_profile(a: &DimTuple, n: &MultiIndex) -> Result<BigInt> {
    if n.len() != a.m() {
        return Err(domain(format!(
            "profile has {} parts, tuple has {}",
            n.len(),
            a.m()
        )));
    }
    let profile = ArrangementProfile::new(n.parts().to_vec())?;
    let mut weight = BigInt::one();
    for (&nj, &aj) in n.parts().iter().zip(a.parts()) {
        weight *= c_j_r_factored(nj, 0, &factorize(aj)?);
        if weight.is_zero() {
            return Ok(weight);
        }
    }
    Ok(count_arrangements(&profile) * weight)
}

/// `N_a` as the sum of [`count_jof_profile`] over `1 <= n_j <= Ω(a_j)`.
pub fn count_jof_by_profiles(a: &DimTuple) -> BigInt {
    let fs = a.factorizations();
    let omega = omegas(&fs);
    let nontriv: Vec<Vec<BigInt>> = fs
        .iter()
        .zip(&omega)
        .map(|(f, &w)| (0..=w).map(|l| c_j_r_factored(l, 0, f)).collect())
        .collect();
    sum_over_profiles(&omega, |n| {
        let weight: BigInt = n.iter().zip(&nontriv).map(|(&nj, c)| &c[nj as usize]).product();
        if weight.is_zero() {
            return weight;
        }
        let profile = ArrangementProfile::new(n.to_vec()).expect("parts >= 1");
        count_arrangements(&profile) * weight
    })
}

/// `N_a` as an alternating sum over arrangements of square-free factors:
/// `(-1)^{sum Ω(a_j)} sum_l (-1)^{|l|} multinomial(l) prod_j F_{l_j}(a_j)`.
pub fn count_jof_alternating(a: &DimTuple) -> BigInt {
    let fs = a.factorizations();
    let omega = omegas(&fs);
    let total_omega: u32 = omega.iter().sum();
    let sqf: Vec<Vec<BigInt>> = a
        .parts()
        .iter()
        .zip(&omega)
        .map(|(&aj, &w)| (0..=w).map(|l| count_squarefree_factorisations(l, aj)).collect())
        .collect();
    let acc = sum_over_profiles(&omega, |l| {
        let weight: BigInt = l.iter().zip(&sqf).map(|(&lj, f)| &f[lj as usize]).product();
        if weight.is_zero() {
            return weight;
        }
        let size: u32 = l.iter().sum();
        let term = multinomial_parts(l) * weight;
        if size.is_multiple_of(2) {
            term
        } else {
            -term
        }
    });
    if total_omega.is_multiple_of(2) {
        acc
    } else {
        -acc
    }
}

/// `N_{(a1, a2)} = sum_n 2 c_n(a1) c_n(a2) + c_n(a1) c_{n+1}(a2) + c_{n+1}(a1) c_n(a2)`.
pub fn count_jof_2d(a1: u64, a2: u64) -> Result<BigInt> {
    let dims = DimTuple::new(vec![a1, a2])?;
    let fs = dims.factorizations();
    let top = fs[0].big_omega().max(fs[1].big_omega());
    let c1: Vec<BigInt> = (0..=top + 1).map(|n| c_j_r_factored(n, 0, &fs[0])).collect();
    let c2: Vec<BigInt> = (0..=top + 1).map(|n| c_j_r_factored(n, 0, &fs[1])).collect();
    let mut acc = BigInt::zero();
    for n in 1..=top as usize {
        acc += &c1[n] * &c2[n] * 2u32;
        acc += &c1[n] * &c2[n + 1];
        acc += &c1[n + 1] * &c2[n];
    }
    Ok(acc)
}

/// `N_{(a, a)} = 2 sum_n c_n(a) c_n^(1)(a)`.
pub fn count_jof_symmetric(a: u64) -> Result<BigInt> {
    DimTuple::new(vec![a])?;
    let f = factorize(a)?;
    let acc: BigInt = (1..=f.big_omega())
        .map(|n| c_j_r_factored(n, 0, &f) * c_j_r_factored(n, 1, &f))
        .sum();
    Ok(acc * 2u32)
}

/// Outcome of comparing `N_a` against `m!`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub n_a: BigInt,
    pub m_fact: BigInt,
    pub tight: bool,
    pub all_prime: bool,
}

impl LowerBound {
    /// `N_a >= m!`, with equality exactly when every `a_j` is prime.
    pub fn holds(&self) -> bool {
        self.n_a >= self.m_fact && self.tight == self.all_prime
    }
}

pub fn check_lower_bound(a: &DimTuple) -> LowerBound {
    let n_a = count_jof(a);
    let m_fact = factorial(a.m() as u64);
    let tight = n_a == m_fact;
    let all_prime = a.factorizations().iter().all(|f| f.is_prime());
    LowerBound {
        n_a,
        m_fact,
        tight,
        all_prime,
    }
}

/// `N_{(a, ..., a)} / m!` with `m` copies of `a`. The quotient is an integer
/// because permuting equal components permutes the chains; a non-zero
/// remainder is reported as an internal error.
pub fn symmetric_quotient(m: usize, a: u64) -> Result<BigInt> {
    let dims = DimTuple::new(vec![a; m])?;
    let n = count_jof(&dims);
    let (q, r) = n.div_rem(&factorial(m as u64));
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "N{dims} = {n} is not divisible by {m}!"
        )));
    }
    Ok(q)
}

// ---------------------------------------------------------------------------
// Enumeration

/// Per component: for each divisor `v` of `a_j` (by index into the ascending
/// divisor list), the admissible next factors `d >= 2` of `v` with the index
/// of `v / d`. Index 0 is the divisor 1, i.e. a finished component.
#[derive(Debug)]
struct Tables {
    dims: DimTuple,
    steps: Vec<Vec<Vec<(u64, u32)>>>,
    start: Vec<u32>,
}

impl Tables {
    fn new(dims: &DimTuple) -> Self {
        let mut steps = Vec::with_capacity(dims.m());
        let mut start = Vec::with_capacity(dims.m());
        for &a in dims.parts() {
            let divs = divisors(a);
            let index_of = |v: u64| divs.binary_search(&v).expect("divisor of a divisor") as u32;
            let table: Vec<Vec<(u64, u32)>> = divs
                .iter()
                .map(|&v| {
                    divisors(v)
                        .into_iter()
                        .skip(1)
                        .map(|d| (d, index_of(v / d)))
                        .collect()
                })
                .collect();
            start.push(divs.len() as u32 - 1);
            steps.push(table);
        }
        Tables {
            dims: dims.clone(),
            steps,
            start,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Cursor {
    comp: usize,
    pos: usize,
}

/// Depth-first walker over every joint ordered factorisation of a tuple.
///
/// Chains come out in lexicographic order of their `(component, factor)`
/// sequences. [`JofWalker::next_chain`] lends the current chain without
/// allocating; wrap the walker in [`JofIter`] for owned [`Jof`] values.
#[derive(Debug)]
pub struct JofWalker {
    tables: Arc<Tables>,
    rem: Vec<u32>,
    active: usize,
    chain: Vec<JofPair>,
    undo: Vec<u32>,
    stack: Vec<Cursor>,
    floor: usize,
    pending_undo: bool,
    emit_prefix: bool,
}

impl JofWalker {
    pub fn new(dims: &DimTuple) -> Self {
        Self::from_tables(Arc::new(Tables::new(dims)))
    }

    fn from_tables(tables: Arc<Tables>) -> Self {
        let m = tables.dims.m();
        JofWalker {
            rem: tables.start.clone(),
            tables,
            active: m,
            chain: Vec::new(),
            undo: Vec::new(),
            stack: vec![Cursor::default()],
            floor: 0,
            pending_undo: false,
            emit_prefix: false,
        }
    }

    /// Walker restricted to chains beginning with `prefix`.
    pub fn with_prefix(dims: &DimTuple, prefix: &[JofPair]) -> Result<Self> {
        Self::from_tables_with_prefix(Arc::new(Tables::new(dims)), prefix)
    }

    fn from_tables_with_prefix(tables: Arc<Tables>, prefix: &[JofPair]) -> Result<Self> {
        let mut w = Self::from_tables(tables);
        for (l, &(c, f)) in prefix.iter().enumerate() {
            let m = w.rem.len();
            if c == 0 || c > m {
                return Err(Error::InvalidJof(format!("prefix component {c} out of range")));
            }
            if l > 0 && prefix[l - 1].0 == c {
                return Err(Error::InvalidJof(format!(
                    "prefix pairs {l} and {} share component {c}",
                    l + 1
                )));
            }
            let step = w.tables.steps[c - 1][w.rem[c - 1] as usize]
                .iter()
                .find(|s| s.0 == f)
                .copied();
            match step {
                Some((_, next)) => w.push_pair(c - 1, f, next),
                None => {
                    return Err(Error::InvalidJof(format!(
                        "prefix factor {f} does not divide what is left of component {c}"
                    )))
                }
            }
        }
        w.floor = w.chain.len();
        if w.active == 0 {
            w.stack.clear();
            w.emit_prefix = true;
        }
        Ok(w)
    }

    pub fn dims(&self) -> &DimTuple {
        &self.tables.dims
    }

    fn push_pair(&mut self, comp: usize, factor: u64, next: u32) {
        self.undo.push(self.rem[comp]);
        self.rem[comp] = next;
        if next == 0 {
            self.active -= 1;
        }
        self.chain.push((comp + 1, factor));
    }

    fn pop_pair(&mut self) {
        let (c, _) = self.chain.pop().expect("non-empty chain");
        let prev = self.undo.pop().expect("undo entry");
        if self.rem[c - 1] == 0 {
            self.active += 1;
        }
        self.rem[c - 1] = prev;
    }

    /// Advances to the next complete chain.
    pub fn next_chain(&mut self) -> Option<&[JofPair]> {
        if self.emit_prefix {
            self.emit_prefix = false;
            return Some(&self.chain);
        }
        if self.pending_undo {
            self.pending_undo = false;
            self.pop_pair();
        }
        loop {
            let last = self.chain.last().map(|p| p.0 - 1);
            let cur = self.stack.last_mut()?;
            let mut found = None;
            while cur.comp < self.rem.len() {
                let c = cur.comp;
                if Some(c) != last && self.rem[c] != 0 {
                    let opts = &self.tables.steps[c][self.rem[c] as usize];
                    if let Some(&step) = opts.get(cur.pos) {
                        cur.pos += 1;
                        found = Some((c, step));
                        break;
                    }
                }
                cur.comp += 1;
                cur.pos = 0;
            }
            match found {
                Some((c, (f, next))) => {
                    self.push_pair(c, f, next);
                    if self.active == 0 {
                        self.pending_undo = true;
                        return Some(&self.chain);
                    }
                    if self.active == 1 && self.rem[c] != 0 {
                        // Only the component just used is left: dead end.
                        self.pop_pair();
                        continue;
                    }
                    self.stack.push(Cursor::default());
                }
                None => {
                    self.stack.pop();
                    if self.chain.len() > self.floor {
                        self.pop_pair();
                    }
                }
            }
        }
    }

    /// Number of remaining chains; consumes the walker.
    pub fn count(mut self) -> u64 {
        let mut n = 0;
        while self.next_chain().is_some() {
            n += 1;
        }
        n
    }
}

/// Owning iterator over [`Jof`]s in canonical order.
#[derive(Debug)]
pub struct JofIter {
    walker: JofWalker,
}

impl Iterator for JofIter {
    type Item = Jof;

    fn next(&mut self) -> Option<Jof> {
        let dims = self.walker.dims().clone();
        let pairs = self.walker.next_chain()?.to_vec();
        Some(Jof { pairs, dims })
    }
}

/// Every joint ordered factorisation of `a`, lexicographically by pair
/// sequence. Lazy: stop pulling to cap the enumeration.
pub fn enumerate_jof(a: &DimTuple) -> JofIter {
    JofIter {
        walker: JofWalker::new(a),
    }
}

/// Admissible first pairs, in canonical order.
pub fn first_pairs(a: &DimTuple) -> Vec<JofPair> {
    let mut out = Vec::new();
    for (j, &aj) in a.parts().iter().enumerate() {
        for d in divisors(aj).into_iter().skip(1) {
            out.push((j + 1, d));
        }
    }
    out
}

/// One walker per first pair. Concatenating their outputs in order
/// reproduces [`enumerate_jof`].
pub fn partitioned_walkers(a: &DimTuple) -> Vec<JofWalker> {
    let tables = Arc::new(Tables::new(a));
    first_pairs(a)
        .into_iter()
        .map(|p| JofWalker::from_tables_with_prefix(tables.clone(), &[p]).expect("valid first pair"))
        .collect()
}

/// Counts chains by walking them all.
pub fn count_jof_enumerated(a: &DimTuple) -> u64 {
    JofWalker::new(a).count()
}

/// [`count_jof_enumerated`] with the first-pair partitions spread over the
/// rayon pool.
pub fn count_jof_enumerated_par(a: &DimTuple) -> u64 {
    partitioned_walkers(a)
        .into_par_iter()
        .map(JofWalker::count)
        .sum()
}
