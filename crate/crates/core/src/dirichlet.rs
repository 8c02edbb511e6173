//! The Dirichlet convolution algebra of arithmetic functions and the
//! divisor functions built from it.
//!
//! Two evaluation routes are provided and kept independent:
//!
//! - [`FuncExpr`] trees evaluated by literal divisor sums ([`EvalCache`]),
//! - closed forms over the prime factorisation ([`d_j`], [`c_j_r`]).
//!
//! Notation: `e` is the convolution unit, `1` the constant function, `μ` the
//! Möbius function. `d_j = 1^{*j}`, `c_j = (1 - e)^{*j}` and
//! `c_j^(r) = c_j * d_r`, where `r < 0` means a power of `μ`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};
use crate::number::{divisors, factorize, gen_binomial, Factorization};

/// Generators of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `e(n) = [n = 1]`
    Unit,
    /// `1(n) = 1`
    One,
    /// The classical Möbius function.
    Moebius,
}

/// A symbolic arithmetic function.
///
/// Values are only built through the constructors, which keep the tree in a
/// canonical form: convolution operands are flattened and sorted, trivial
/// powers are folded, and `1^{*-k}` is rewritten as `μ^{*k}` (and vice
/// versa). Equal canonical trees denote equal functions, which makes the tree
/// usable as a memo key.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FuncExpr {
    Gen(Generator),
    /// Pointwise difference `f - g`.
    Diff(Box<FuncExpr>, Box<FuncExpr>),
    /// Convolution of two or more operands, sorted.
    Conv(Vec<FuncExpr>),
    /// Convolution power with exponent outside `{0, 1}`; a negative exponent
    /// denotes a power of the convolution inverse.
    Pow(Box<FuncExpr>, i32),
}

impl FuncExpr {
    pub fn unit() -> Self {
        FuncExpr::Gen(Generator::Unit)
    }

    pub fn one() -> Self {
        FuncExpr::Gen(Generator::One)
    }

    pub fn moebius() -> Self {
        FuncExpr::Gen(Generator::Moebius)
    }

    pub fn minus(self, other: FuncExpr) -> Self {
        FuncExpr::Diff(Box::new(self), Box::new(other))
    }

    /// `1 - e`, the indicator of `n > 1`.
    pub fn nontrivial() -> Self {
        FuncExpr::one().minus(FuncExpr::unit())
    }

    /// `μ - e`
    pub fn modified_moebius() -> Self {
        FuncExpr::moebius().minus(FuncExpr::unit())
    }

    pub fn convolve(self, other: FuncExpr) -> Self {
        let mut ops = Vec::new();
        for f in [self, other] {
            match f {
                FuncExpr::Conv(inner) => ops.extend(inner),
                FuncExpr::Gen(Generator::Unit) => {}
                f => ops.push(f),
            }
        }
        match ops.len() {
            0 => FuncExpr::unit(),
            1 => ops.pop().unwrap(),
            _ => {
                ops.sort();
                FuncExpr::Conv(ops)
            }
        }
    }

    /// `self^{*k}`. Negative `k` requires `self(1) = ±1`.
    pub fn pow(self, k: i32) -> Result<Self> {
        if k == 0 {
            return Ok(FuncExpr::unit());
        }
        if k == 1 {
            return Ok(self);
        }
        match self {
            FuncExpr::Gen(Generator::Unit) => Ok(FuncExpr::unit()),
            FuncExpr::Gen(Generator::One) if k < 0 => FuncExpr::moebius().pow(-k),
            FuncExpr::Gen(Generator::Moebius) if k < 0 => FuncExpr::one().pow(-k),
            FuncExpr::Pow(inner, a) if a > 0 && k > 0 => Ok(FuncExpr::Pow(inner, a * k)),
            f => {
                if k < 0 {
                    let at_one = EvalCache::new().eval(&f, 1);
                    if at_one.abs() != BigInt::one() {
                        return Err(domain(format!(
                            "no convolution inverse: value at 1 is {at_one}"
                        )));
                    }
                }
                Ok(FuncExpr::Pow(Box::new(f), k))
            }
        }
    }

    /// `d_j = 1^{*j}` for any integer `j`.
    pub fn divisor(j: i32) -> Self {
        FuncExpr::one().pow(j).expect("1 is invertible")
    }

    /// `c_j = (1 - e)^{*j}`
    pub fn nontrivial_divisor(j: u32) -> Self {
        FuncExpr::nontrivial()
            .pow(j as i32)
            .expect("non-negative power")
    }

    /// `c_j^(r) = (1 - e)^{*j} * 1^{*r}`
    pub fn associated_divisor(j: u32, r: i32) -> Self {
        FuncExpr::nontrivial_divisor(j).convolve(FuncExpr::divisor(r))
    }

    /// Evaluates at `n` with a throwaway cache.
    pub fn eval(&self, n: u64) -> BigInt {
        EvalCache::new().eval(self, n)
    }
}

/// Memo table for [`FuncExpr`] evaluation.
///
/// Not synchronised; give each worker its own cache.
#[derive(Debug, Default)]
pub struct EvalCache {
    values: HashMap<(FuncExpr, u64), BigInt>,
    divisors: HashMap<u64, Vec<u64>>,
}

impl EvalCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn divisors_of(&mut self, n: u64) -> Vec<u64> {
        self.divisors.entry(n).or_insert_with(|| divisors(n)).clone()
    }

    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn eval(&mut self, f: &FuncExpr, n: u64) -> BigInt {
        assert!(n >= 1, "arithmetic functions are defined on n >= 1");
        match f {
            FuncExpr::Gen(g) => return eval_generator(*g, n),
            FuncExpr::Diff(a, b) => return self.eval(a, n) - self.eval(b, n),
            _ => {}
        }
        let key = (f.clone(), n);
        if let Some(v) = self.values.get(&key) {
            return v.clone();
        }
        let v = match f {
            FuncExpr::Conv(ops) => {
                let head = &ops[0];
                let tail = if ops.len() == 2 {
                    ops[1].clone()
                } else {
                    FuncExpr::Conv(ops[1..].to_vec())
                };
                self.convolve_at(head, &tail, n)
            }
            FuncExpr::Pow(base, k) if *k > 0 => {
                let rest = if *k == 2 {
                    (**base).clone()
                } else {
                    FuncExpr::Pow(base.clone(), k - 1)
                };
                self.convolve_at(base, &rest, n)
            }
            FuncExpr::Pow(base, k) => self.inverse_power_at(base, -k, n),
            FuncExpr::Gen(_) | FuncExpr::Diff(..) => unreachable!(),
        };
        self.values.insert(key, v.clone());
        v
    }

    fn convolve_at(&mut self, f: &FuncExpr, g: &FuncExpr, n: u64) -> BigInt {
        let mut acc = BigInt::zero();
        for d in self.divisors_of(n) {
            let fd = self.eval(f, d);
            if fd.is_zero() {
                continue;
            }
            acc += fd * self.eval(g, n / d);
        }
        acc
    }

    // (f^{*k})^{-1} via h * g = e: g(1) = 1/h(1), g(n) = -h(1) * sum_{d|n, d>1} h(d) g(n/d).
    fn inverse_power_at(&mut self, base: &FuncExpr, k: i32, n: u64) -> BigInt {
        let h = if k == 1 {
            base.clone()
        } else {
            FuncExpr::Pow(Box::new(base.clone()), k)
        };
        let inv = FuncExpr::Pow(Box::new(base.clone()), -k);
        let h1 = self.eval(&h, 1);
        if n == 1 {
            return h1;
        }
        let mut acc = BigInt::zero();
        for d in self.divisors_of(n).into_iter().skip(1) {
            let hd = self.eval(&h, d);
            if hd.is_zero() {
                continue;
            }
            acc += hd * self.eval(&inv, n / d);
        }
        -(h1 * acc)
    }
}

fn eval_generator(g: Generator, n: u64) -> BigInt {
    match g {
        Generator::Unit => BigInt::from((n == 1) as i32),
        Generator::One => BigInt::one(),
        Generator::Moebius => BigInt::from(moebius(n)),
    }
}

/// The classical Möbius function.
pub fn moebius(n: u64) -> i32 {
    let f = factorize(n).expect("moebius: n must be positive");
    if !f.is_squarefree() {
        0
    } else if f.num_distinct().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(μ - e)(n)`: `(-1)^Ω(n)` on square-free `n > 1`, zero otherwise
/// (including `n = 1`).
pub fn modified_moebius(n: u64) -> i32 {
    if n == 1 {
        0
    } else {
        moebius(n)
    }
}

/// `(f * g)(n)` by direct divisor sum.
pub fn dirichlet_convolve_eval(f: &FuncExpr, g: &FuncExpr, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(domain("convolution is evaluated at n >= 1"));
    }
    Ok(EvalCache::new().convolve_at(f, g, n))
}

fn factor(n: u64) -> Factorization {
    factorize(n).expect("n must be positive")
}

/// `d_j(n) = 1^{*j}(n) = prod_l binom(a_l + j - 1, a_l)` for any integer `j`.
///
/// # Panics
///
/// Panics if `n == 0`; likewise for every `n`-taking function below.
pub fn d_j(j: i64, n: u64) -> BigInt {
    factor(n)
        .exponents()
        .map(|a| gen_binomial(a as i64 + j - 1, a))
        .product()
}

/// Ordered factorisations of `n` into `j` factors, each at least 2.
pub fn c_j(j: u32, n: u64) -> BigInt {
    c_j_r(j, 0, n)
}

/// Closed form of `c_j^(r)(n)`:
/// `sum_k (-1)^k binom(j, k) prod_l binom(a_l + r + j - k - 1, a_l)`.
pub fn c_j_r(j: u32, r: i64, n: u64) -> BigInt {
    c_j_r_factored(j, r, &factor(n))
}

pub fn c_j_r_factored(j: u32, r: i64, f: &Factorization) -> BigInt {
    if j > f.big_omega() {
        return BigInt::zero();
    }
    let mut acc = BigInt::zero();
    let mut choose = BigInt::one();
    for k in 0..=j {
        let shift = r + j as i64 - k as i64;
        let term: BigInt = f
            .exponents()
            .map(|a| gen_binomial(a as i64 + shift - 1, a))
            .product();
        if k % 2 == 0 {
            acc += &choose * term;
        } else {
            acc -= &choose * term;
        }
        choose = choose * (j - k) / (k + 1);
    }
    acc
}

/// `c_j^(r)(n)` by the Pascal recurrence `c_j^(r+1) = c_{j+1}^(r) + c_j^(r)`,
/// anchored on the diagonal `r = -j` (closed form) and on `c_j = 0` for
/// `j > Ω(n)`.
pub fn c_j_r_recurrence(j: u32, r: i64, n: u64) -> BigInt {
    let f = factor(n);
    let mut memo = HashMap::new();
    recurrence_step(j, r, &f, &mut memo)
}

fn recurrence_step(
    j: u32,
    r: i64,
    f: &Factorization,
    memo: &mut HashMap<(u32, i64), BigInt>,
) -> BigInt {
    if j > f.big_omega() {
        return BigInt::zero();
    }
    let diag = r + j as i64;
    if diag == 0 {
        return c_j_r_factored(j, r, f);
    }
    if let Some(v) = memo.get(&(j, r)) {
        return v.clone();
    }
    let v = if diag > 0 {
        // c_j^(r) = c_j^(r-1) + c_{j+1}^(r-1); the first term moves toward the
        // diagonal, the second keeps j + r fixed while j grows toward Ω(n).
        recurrence_step(j, r - 1, f, memo) + recurrence_step(j + 1, r - 1, f, memo)
    } else {
        // c_j^(r) = c_j^(r+1) - c_{j+1}^(r); both terms move toward the diagonal.
        recurrence_step(j, r + 1, f, memo) - recurrence_step(j + 1, r, f, memo)
    };
    memo.insert((j, r), v.clone());
    v
}

/// `c_j^(-j)(n)`, equal to `(-1)^{Ω(n)+j}` times the number of ordered
/// factorisations of `n` into `j` non-trivial square-free factors.
pub fn c_j_negj(j: u32, n: u64) -> BigInt {
    c_j_r(j, -(j as i64), n)
}

/// Number of ordered factorisations of `n` into `j` square-free factors,
/// each at least 2, by direct recursive enumeration.
pub fn count_squarefree_factorisations(j: u32, n: u64) -> BigInt {
    assert!(n >= 1, "n must be positive");
    let mut memo = HashMap::new();
    BigInt::from(squarefree_chains(j, n, &mut memo))
}

fn squarefree_chains(j: u32, n: u64, memo: &mut HashMap<(u32, u64), u128>) -> u128 {
    if j == 0 {
        return (n == 1) as u128;
    }
    if n == 1 {
        return 0;
    }
    if let Some(&v) = memo.get(&(j, n)) {
        return v;
    }
    let mut total = 0;
    for d in divisors(n).into_iter().skip(1) {
        if factor(d).is_squarefree() {
            total += squarefree_chains(j - 1, n / d, memo);
        }
    }
    memo.insert((j, n), total);
    total
}

/// `sum_{k=0}^{Ω(n)} binom(k + r - 1, k) c_k^(-k)(n)`, which equals `d_r(n)`.
pub fn relation_erel1_rhs(r: i64, n: u64) -> BigInt {
    let f = factor(n);
    let top = f.big_omega();
    debug_assert!(
        c_j_r_factored(top + 1, -(top as i64 + 1), &f).is_zero(),
        "series does not terminate at Ω(n)"
    );
    (0..=top)
        .map(|k| gen_binomial(k as i64 + r - 1, k) * c_j_r_factored(k, -(k as i64), &f))
        .sum()
}

/// `sum_{k=j}^{Ω(n)-u} binom(k + r - 1, k - j) c_{u+k}^(v-k)(n)`, which equals
/// `c_{j+u}^(r+v)(n)`.
pub fn relation_erel2_rhs(j: u32, u: u32, r: i64, v: i64, n: u64) -> BigInt {
    let f = factor(n);
    let omega = f.big_omega();
    if u > omega {
        return BigInt::zero();
    }
    let top = omega - u;
    debug_assert!(
        c_j_r_factored(u + top + 1, v - (top as i64 + 1), &f).is_zero(),
        "series does not terminate at Ω(n) - u"
    );
    (j..=top)
        .map(|k| {
            gen_binomial(k as i64 + r - 1, k - j) * c_j_r_factored(u + k, v - k as i64, &f)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Ordered factorisations of `n` into `len` factors where the first
    /// `nontrivial` must exceed 1.
    fn brute_ordered(n: u64, len: u32, nontrivial: u32) -> i64 {
        if len == 0 {
            return (n == 1) as i64;
        }
        (1..=n)
            .filter(|d| n.is_multiple_of(*d) && (nontrivial == 0 || *d > 1))
            .map(|d| brute_ordered(n / d, len - 1, nontrivial.saturating_sub(1)))
            .sum()
    }

    #[test]
    fn convolve_examples() {
        let one = FuncExpr::one();
        let mu = FuncExpr::moebius();
        assert_eq!(dirichlet_convolve_eval(&one, &one, 6).unwrap(), big(4));
        assert_eq!(dirichlet_convolve_eval(&mu, &one, 12).unwrap(), big(0));
        // mu(1)mu(4) + mu(2)mu(2) + mu(4)mu(1) = 0 + 1 + 0
        assert_eq!(dirichlet_convolve_eval(&mu, &mu, 4).unwrap(), big(1));
        assert!(dirichlet_convolve_eval(&mu, &mu, 0).is_err());
    }

    #[test]
    fn d_j_examples() {
        assert_eq!(d_j(2, 8), big(4));
        assert_eq!(d_j(-2, 4), dirichlet_convolve_eval(&FuncExpr::moebius(), &FuncExpr::moebius(), 4).unwrap());
        assert_eq!(d_j(-2, 4), big(1));
        assert_eq!(d_j(0, 5), big(0));
        assert_eq!(d_j(0, 1), big(1));
    }

    #[test]
    fn c_j_examples() {
        assert_eq!(brute_ordered(12, 2, 2), 4);
        assert_eq!(c_j(2, 12), big(4));
        assert_eq!(c_j(1, 2), big(1));
        assert_eq!(c_j(3, 4), big(0));
        assert_eq!(c_j(0, 1), big(1));
        assert_eq!(c_j(0, 7), big(0));
    }

    #[test]
    fn c_j_r_examples() {
        assert_eq!(c_j_r(0, 2, 8), big(4));
        // ((1-e) * mu)(4) = sum_{d|4, d>1} mu(4/d) = mu(2) + mu(1) = 0
        assert_eq!(c_j_r(1, -1, 4), big(0));
        assert_eq!(c_j_r(2, 0, 12), c_j(2, 12));
    }

    #[test]
    fn c_j_r_matches_brute_force_for_nonnegative_r() {
        for n in 1..=200u64 {
            for j in 0..=4u32 {
                for r in 0..=3u32 {
                    assert_eq!(
                        c_j_r(j, r as i64, n),
                        big(brute_ordered(n, j + r, j)),
                        "j={j} r={r} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn recurrence_examples() {
        for n in [1u64, 6, 12, 97, 360] {
            assert_eq!(c_j_r_recurrence(0, 1, n), c_j_r(1, 0, n) + c_j_r(0, 0, n));
        }
        assert_eq!(c_j_r_recurrence(1, 0, 6), big(1));
        // 3 factors of 12, first two non-trivial: 4 with last factor 1,
        // 2 with last factor 2 (2*3, 3*2), 1 with last factor 3 (2*2).
        assert_eq!(brute_ordered(12, 3, 2), 7);
        assert_eq!(c_j_r_recurrence(2, 1, 12), big(7));
        assert_eq!(c_j_r(2, 1, 12), big(7));
    }

    #[test]
    fn recurrence_matches_closed_form() {
        for n in 1..=300u64 {
            for j in 0..=5u32 {
                for r in -5..=5i64 {
                    assert_eq!(c_j_r_recurrence(j, r, n), c_j_r(j, r, n), "j={j} r={r} n={n}");
                }
            }
        }
    }

    #[test]
    fn negj_examples() {
        assert_eq!(c_j_negj(2, 6), big(2));
        assert_eq!(c_j_negj(2, 12), big(-2));
        assert_eq!(c_j_negj(1, 4), big(0));
    }

    #[test]
    fn squarefree_count_examples() {
        assert_eq!(count_squarefree_factorisations(2, 12), big(2));
        assert_eq!(count_squarefree_factorisations(3, 12), big(3));
        assert_eq!(count_squarefree_factorisations(1, 30), big(1));
        assert_eq!(count_squarefree_factorisations(0, 1), big(1));
        assert_eq!(count_squarefree_factorisations(0, 2), big(0));
    }

    #[test]
    fn modified_moebius_examples() {
        assert_eq!(modified_moebius(1), 0);
        assert_eq!(modified_moebius(6), 1);
        assert_eq!(modified_moebius(30), -1);
        assert_eq!(modified_moebius(12), 0);
        let expr = FuncExpr::modified_moebius();
        for n in 1..200 {
            assert_eq!(expr.eval(n), big(modified_moebius(n) as i64));
        }
    }

    #[test]
    fn erel1_examples() {
        // k=0: 1 * 0, k=1: 2 * c_1^(-1)(12) = 2 * 0, k=2: 3 * (-2), k=3: 4 * 3
        assert_eq!(relation_erel1_rhs(2, 12), big(6));
        assert_eq!(relation_erel1_rhs(2, 12), d_j(2, 12));
        for n in [1u64, 2, 30, 64, 1001] {
            assert_eq!(relation_erel1_rhs(1, n), big(1));
        }
        assert_eq!(relation_erel1_rhs(2, 1), big(1));
    }

    #[test]
    fn erel2_examples() {
        assert_eq!(relation_erel2_rhs(0, 0, 2, 0, 12), big(6));
        assert_eq!(relation_erel2_rhs(1, 0, 1, 0, 6), big(3));
        assert_eq!(c_j_r(1, 1, 6), big(3));
        assert_eq!(relation_erel2_rhs(0, 1, 1, -1, 4), big(1));
        assert_eq!(c_j_r(1, 0, 4), big(1));
    }

    #[test]
    fn pow_rewrites() {
        assert_eq!(FuncExpr::one().pow(-3).unwrap(), FuncExpr::moebius().pow(3).unwrap());
        assert_eq!(FuncExpr::moebius().pow(-1).unwrap(), FuncExpr::one());
        assert_eq!(FuncExpr::nontrivial().pow(0).unwrap(), FuncExpr::unit());
        assert!(FuncExpr::nontrivial().pow(-1).is_err());
        assert!(FuncExpr::modified_moebius().pow(-2).is_err());
    }

    #[test]
    fn general_inverse_power() {
        // A non-generator tree equal to 1 pointwise, so its inverse square is μ^{*2}.
        let f = FuncExpr::one().minus(FuncExpr::nontrivial().minus(FuncExpr::nontrivial()));
        let inv = f.pow(-2).unwrap();
        let mu2 = FuncExpr::moebius().pow(2).unwrap();
        let mut cache = EvalCache::new();
        for n in 1..=200 {
            assert_eq!(cache.eval(&inv, n), cache.eval(&mu2, n), "n={n}");
        }
    }

    #[test]
    fn convolution_is_canonical() {
        let a = FuncExpr::nontrivial().convolve(FuncExpr::moebius());
        let b = FuncExpr::moebius().convolve(FuncExpr::nontrivial());
        assert_eq!(a, b);
        let c = FuncExpr::unit().convolve(FuncExpr::one());
        assert_eq!(c, FuncExpr::one());
    }

    #[test]
    fn cache_hits_match_fresh_evaluation() {
        let f = FuncExpr::associated_divisor(3, -2);
        let mut cache = EvalCache::new();
        let first: Vec<_> = (1..=300).map(|n| cache.eval(&f, n)).collect();
        assert!(!cache.is_empty());
        let second: Vec<_> = (1..=300).map(|n| cache.eval(&f, n)).collect();
        assert_eq!(first, second);
        for (n, v) in (1..=300).zip(&first) {
            assert_eq!(&f.eval(n), v);
        }
    }
}
