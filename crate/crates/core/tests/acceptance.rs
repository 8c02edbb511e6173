//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.
//!
//! Run with `cargo test -p sumsys-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use sumsys_core::arrangements::{
    count_annotated, count_arrangements, count_arrangements_2d, count_arrangements_bruteforce,
    count_collapse_check, ArrangementProfile,
};
use sumsys_core::dirichlet::{
    c_j_negj, c_j_r, c_j_r_recurrence, d_j, relation_erel1_rhs, relation_erel2_rhs, EvalCache,
    FuncExpr,
};
use sumsys_core::jof::{
    check_lower_bound, count_jof, count_jof_2d, count_jof_alternating, count_jof_by_profiles,
    count_jof_enumerated, count_jof_enumerated_par, count_jof_symmetric, DimTuple, Jof,
};
use sumsys_core::number::{divisors, gen_binomial, multinomial, BoxIter};
use sumsys_core::sumsys::{
    build_sum_system, check_forward_map, verify_sum_system, SumSystem, DEFAULT_VERIFY_GUARD,
};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dims(v: &[u64]) -> DimTuple {
    DimTuple::new(v.to_vec()).expect("valid dims")
}

fn tuples(lo: u64, hi: u64, m: usize) -> Vec<Vec<u64>> {
    let lo32 = vec![lo as u32; m];
    let hi32 = vec![hi as u32; m];
    BoxIter::new(&lo32, &hi32)
        .map(|t| t.into_iter().map(u64::from).collect())
        .collect()
}

/// Profiles with `m` in `1..=max_m` positive parts summing to at most `max_size`.
fn profiles(max_m: usize, max_size: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        let lo = vec![1; m];
        let hi = vec![max_size; m];
        out.extend(BoxIter::new(&lo, &hi).filter(|p| p.iter().sum::<u32>() <= max_size));
    }
    out
}

const WORKED_EXAMPLE: &str = include_str!("data/worked_example.json");

// 1. The worked (4, 6, 8, 12, 20) example.
fn worked_example() -> Outcome {
    let doc: serde_json::Value = serde_json::from_str(WORKED_EXAMPLE).map_err(|e| e.to_string())?;
    let jof: Jof = serde_json::from_value(doc["jof"].clone()).map_err(|e| e.to_string())?;
    ensure(jof.dims().parts() == [4, 6, 8, 12, 20], || {
        format!("chain factorises {}", jof.dims())
    })?;
    let expected = SumSystem::from_json(&doc["system"].to_string()).map_err(|e| e.to_string())?;
    let built = build_sum_system(&jof).map_err(|e| e.to_string())?;
    let verdict = verify_sum_system(&built, DEFAULT_VERIFY_GUARD).map_err(|e| e.to_string())?;
    ensure(verdict.valid && verdict.num_sums == 46_080, || {
        format!("verdict {verdict:?}")
    })?;
    let mismatched: Vec<String> = built
        .components()
        .iter()
        .zip(expected.components())
        .enumerate()
        .filter(|(_, (b, e))| b != e)
        .map(|(k, (b, e))| format!("A_{} built {:?} vs listed {:?}", k + 1, b, e))
        .collect();
    ensure(mismatched.is_empty(), || {
        let listed = verify_sum_system(&expected, DEFAULT_VERIFY_GUARD)
            .map(|v| v.valid)
            .unwrap_or(false);
        format!(
            "{}; the built system is valid over 0..46079, and the listed sets \
             (also valid: {listed}) are the image of a different chain",
            mismatched.join("; ")
        )
    })
}

// 2. Counting routes agree with enumeration.
fn counting_equivalence() -> Outcome {
    let mut cases = tuples(2, 12, 2);
    cases.extend(tuples(2, 8, 3));
    for a in cases {
        let a = dims(&a);
        let main = count_jof(&a);
        let profiles = count_jof_by_profiles(&a);
        let alternating = count_jof_alternating(&a);
        let walked = BigInt::from(count_jof_enumerated(&a));
        ensure(main == profiles && main == alternating && main == walked, || {
            format!("a={a}: main {main}, profiles {profiles}, alternating {alternating}, enumerated {walked}")
        })?;
    }
    Ok(())
}

// 3. Two-dimensional and symmetric closed forms.
fn two_dimensional() -> Outcome {
    for a1 in 2..=30u64 {
        for a2 in 2..=30u64 {
            let main = count_jof(&dims(&[a1, a2]));
            let twod = count_jof_2d(a1, a2).map_err(|e| e.to_string())?;
            ensure(main == twod, || format!("({a1},{a2}): main {main}, 2d {twod}"))?;
        }
        let main = count_jof(&dims(&[a1, a1]));
        let sym = count_jof_symmetric(a1).map_err(|e| e.to_string())?;
        ensure(main == sym, || format!("({a1},{a1}): main {main}, symmetric {sym}"))?;
        ensure(main.is_even(), || format!("N({a1},{a1}) = {main} is odd"))?;
    }
    Ok(())
}

// 4. Arrangement counts against brute force and the two identities.
fn arrangement_oracle() -> Outcome {
    for parts in profiles(4, 9) {
        let p = ArrangementProfile::new(parts.clone()).unwrap();
        let formula = count_arrangements(&p);
        let brute = count_arrangements_bruteforce(&p).map_err(|e| e.to_string())?;
        ensure(formula == brute, || format!("{parts:?}: formula {formula}, brute {brute}"))?;
    }
    for n1 in 1..=8u32 {
        for n2 in 1..=8u32 {
            let p = ArrangementProfile::new(vec![n1, n2]).unwrap();
            ensure(count_arrangements(&p) == count_arrangements_2d(n1, n2), || {
                format!("({n1},{n2}) disagrees with the alternating count")
            })?;
        }
    }
    for parts in profiles(4, 10) {
        let p = ArrangementProfile::new(parts.clone()).unwrap();
        let multi = multinomial(p.counts());
        ensure(count_collapse_check(&p) == multi, || {
            format!("{parts:?}: collapse identity fails")
        })?;
        let mut alt = BigInt::zero();
        for t in 0..=p.max_ticks() {
            let a = count_annotated(&p, t);
            if t % 2 == 0 {
                alt += a;
            } else {
                alt -= a;
            }
        }
        ensure(alt == count_arrangements(&p), || {
            format!("{parts:?}: alternating tick sum {alt}")
        })?;
    }
    Ok(())
}

// 5. Divisor-function identities.
fn divisor_identities() -> Outcome {
    for n in 1..=10_000u64 {
        let unit = relation_erel1_rhs(1, n);
        ensure(unit == BigInt::from(1), || format!("unit sum at {n} is {unit}"))?;
        let d2 = relation_erel1_rhs(2, n);
        let direct = BigInt::from(divisors(n).len());
        ensure(d2 == direct, || format!("d_2({n}): series {d2}, divisor count {direct}"))?;
        let manual: BigInt = (0..=32u32)
            .map(|k| BigInt::from(k + 1) * c_j_negj(k, n))
            .sum();
        ensure(manual == direct, || format!("sum (k+1) c_k^(-k)({n}) = {manual}"))?;
    }
    for n in 1..=2000u64 {
        for j in 0..=6u32 {
            for r in -4..=4i64 {
                let lhs = c_j_r(j, r + 1, n);
                let rhs = c_j_r(j + 1, r, n) + c_j_r(j, r, n);
                ensure(lhs == rhs, || format!("Pascal recurrence fails at j={j} r={r} n={n}"))?;
                let rec = c_j_r_recurrence(j, r, n);
                ensure(rec == c_j_r(j, r, n), || {
                    format!("recurrence route differs at j={j} r={r} n={n}")
                })?;
            }
        }
    }
    let mut cache = EvalCache::new();
    for j in 0..=5u32 {
        for r in -3..=3i32 {
            let expr = FuncExpr::associated_divisor(j, r);
            for n in 1..=1000u64 {
                let tree = cache.eval(&expr, n);
                let closed = c_j_r(j, r as i64, n);
                ensure(tree == closed, || {
                    format!("c_{j}^({r})({n}): convolution {tree}, closed form {closed}")
                })?;
            }
        }
    }
    for m in 0..=8u32 {
        let n = 2 * 3u64.pow(m);
        let total: BigInt = (0..=m + 1).map(|k| c_j_negj(k, n).abs()).sum();
        ensure(total == BigInt::from(2 * m + 1), || {
            format!("sum |c_k^(-k)(2*3^{m})| = {total}")
        })?;
    }
    for p in [2u64, 3] {
        for k in 0..=8u32 {
            for j in 0..=10u32 {
                for r in -6..=6i64 {
                    let expected = if j > k {
                        BigInt::zero()
                    } else {
                        gen_binomial(k as i64 + r - 1, k - j)
                    };
                    let got = c_j_r(j, r, p.pow(k));
                    ensure(got == expected, || {
                        format!("c_{j}^({r})({p}^{k}) = {got}, expected {expected}")
                    })?;
                }
            }
        }
    }
    for n in 1..=10_000u64 {
        for r in 1..=6i64 {
            ensure(relation_erel1_rhs(r, n) == d_j(r, n), || {
                format!("d_{r}({n}) series mismatch")
            })?;
        }
    }
    for n in 1..=500u64 {
        for j in 0..=3u32 {
            for u in 0..=3u32 {
                for r in -4..=4i64 {
                    for v in -4..=4i64 {
                        let lhs = c_j_r(j + u, r + v, n);
                        let rhs = relation_erel2_rhs(j, u, r, v, n);
                        ensure(lhs == rhs, || {
                            format!("generalised relation fails at j={j} u={u} r={r} v={v} n={n}")
                        })?;
                    }
                }
            }
        }
    }
    Ok(())
}

// 6. N_a >= m!, with equality exactly on all-prime tuples.
fn lower_bound() -> Outcome {
    let mut cases = tuples(2, 30, 2);
    cases.extend(tuples(2, 10, 3));
    for a in cases {
        let report = check_lower_bound(&dims(&a));
        ensure(report.holds(), || format!("a={a:?}: {report:?}"))?;
    }
    Ok(())
}

// 7. Distinct chains give distinct valid sum systems, N_a of them.
fn forward_bijection() -> Outcome {
    let mut cases = tuples(2, 8, 2);
    cases.extend(tuples(2, 4, 3));
    for a in cases {
        let a = dims(&a);
        let report = check_forward_map(&a, DEFAULT_VERIFY_GUARD).map_err(|e| e.to_string())?;
        let n_a = count_jof(&a);
        ensure(
            report.all_valid
                && report.all_distinct
                && report.cardinalities_match
                && BigInt::from(report.count) == n_a,
            || format!("a={a}: {report:?}, N_a = {n_a}"),
        )?;
    }
    Ok(())
}

// 8. Enumerating all chains of (4, 6, 8, 12, 20).
fn stretch_enumeration() -> Outcome {
    let a = dims(&[4, 6, 8, 12, 20]);
    let formula = count_jof(&a);
    let walked = BigInt::from(count_jof_enumerated_par(&a));
    ensure(formula == walked, || format!("formula {formula}, enumeration {walked}"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "worked example sum system", limit: Some(Duration::from_secs(5)), run: worked_example },
        Criterion { id: 2, name: "counting formulas vs enumeration", limit: Some(Duration::from_secs(60)), run: counting_equivalence },
        Criterion { id: 3, name: "two-dimensional forms", limit: None, run: two_dimensional },
        Criterion { id: 4, name: "arrangement oracle and identities", limit: Some(Duration::from_secs(30)), run: arrangement_oracle },
        Criterion { id: 5, name: "divisor-function identity suite", limit: None, run: divisor_identities },
        Criterion { id: 6, name: "lower bound N_a >= m!", limit: None, run: lower_bound },
        Criterion { id: 7, name: "forward map injective and valid", limit: None, run: forward_bijection },
        Criterion { id: 8, name: "enumeration of (4,6,8,12,20)", limit: Some(Duration::from_secs(600)), run: stretch_enumeration },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let mut outcome = (c.run)();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, c.limit) {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(()) => println!("criterion {} PASS  {} ({:.2?})", c.id, c.name, elapsed),
            Err(msg) => {
                failed += 1;
                println!("criterion {} FAIL  {} ({:.2?}): {}", c.id, c.name, elapsed, msg);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
