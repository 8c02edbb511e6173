//! Browser bindings for the demo page.
//!
//! Each export wraps a plain function returning a JSON string, so the same
//! logic is testable natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use sumsys_core::arrangements::{
    annotated_counts, count_arrangements, count_arrangements_bruteforce, ArrangementProfile,
    BRUTEFORCE_MAX_BLOCKS,
};
use sumsys_core::dirichlet::{c_j_r, count_squarefree_factorisations, d_j, modified_moebius};
use sumsys_core::jof::{
    count_jof, count_jof_2d, count_jof_alternating, count_jof_by_profiles, enumerate_jof,
    DimTuple,
};
use sumsys_core::sumsys::{build_sum_system, verify_sum_system};

/// Most points in one divisor series.
pub const MAX_SERIES: u64 = 10_000;
/// Largest chain index the page may request.
pub const MAX_INDEX: u64 = 1_000_000;
/// Largest number of sums verified in the page.
pub const MAX_SUMS: u64 = 2_000_000;

fn parse_list<T: std::str::FromStr>(csv: &str, what: &str) -> Result<Vec<T>, String> {
    csv.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("{what}: {s:?} is not a valid number")))
        .collect()
}

/// Values of a divisor-type function for `n` in `from..=to`.
///
/// `kind` is `d` (uses `j`), `cjr` (uses `j` and `r`), `F` (uses `j`) or
/// `mu-mod`.
pub fn divisor_series_json(kind: &str, j: i32, r: i32, from: u32, to: u32) -> Result<String, String> {
    if from == 0 || from > to {
        return Err(format!("need 1 <= from <= to, got {from}..{to}"));
    }
    if u64::from(to - from) >= MAX_SERIES {
        return Err(format!("at most {MAX_SERIES} points"));
    }
    let nonneg_j = || u32::try_from(j).map_err(|_| format!("j must be non-negative for {kind}"));
    let f: Box<dyn Fn(u64) -> String> = match kind {
        "d" => Box::new(move |n| d_j(j.into(), n).to_string()),
        "cjr" => {
            let j = nonneg_j()?;
            Box::new(move |n| c_j_r(j, r.into(), n).to_string())
        }
        "F" => {
            let j = nonneg_j()?;
            Box::new(move |n| count_squarefree_factorisations(j, n).to_string())
        }
        "mu-mod" => Box::new(|n| modified_moebius(n).to_string()),
        other => return Err(format!("unknown kind {other:?}")),
    };
    let points: Vec<Value> = (from..=to)
        .map(|n| json!({ "n": n, "value": f(n.into()) }))
        .collect();
    Ok(Value::Array(points).to_string())
}

/// Arrangement count of a profile with its annotated counts `|A_t|` and,
/// for small profiles, a brute-force check.
pub fn arrangements_json(profile_csv: &str) -> Result<String, String> {
    let parts: Vec<u32> = parse_list(profile_csv, "profile")?;
    if parts.is_empty() {
        return Err("profile is empty".into());
    }
    if parts.iter().map(|&p| u64::from(p)).sum::<u64>() > 200 {
        return Err("at most 200 blocks".into());
    }
    let profile = ArrangementProfile::new(parts).map_err(|e| e.to_string())?;
    let count = count_arrangements(&profile);
    let annotated: Vec<String> = annotated_counts(&profile).iter().map(|a| a.to_string()).collect();
    let oracle = if profile.num_blocks() <= BRUTEFORCE_MAX_BLOCKS {
        let b = count_arrangements_bruteforce(&profile).map_err(|e| e.to_string())?;
        Value::String(b.to_string())
    } else {
        Value::Null
    };
    Ok(json!({
        "profile": profile.parts(),
        "count": count.to_string(),
        "annotated": annotated,
        "oracle": oracle,
    })
    .to_string())
}

/// Chain counts for `dims` by every formula, plus chain number `index`
/// (canonical order, 0-based) with its sum system.
pub fn sum_system_json(dims_csv: &str, index: u32) -> Result<String, String> {
    let dims = DimTuple::new(parse_list(dims_csv, "dims")?).map_err(|e| e.to_string())?;
    let main = count_jof(&dims);
    let mut counts = json!({
        "main": main.to_string(),
        "profiles": count_jof_by_profiles(&dims).to_string(),
        "alternating": count_jof_alternating(&dims).to_string(),
    });
    if let &[a1, a2] = dims.parts() {
        counts["2d"] = count_jof_2d(a1, a2).map_err(|e| e.to_string())?.to_string().into();
    }
    if u64::from(index) >= MAX_INDEX {
        return Err(format!("chain index must be below {MAX_INDEX}"));
    }
    if main <= index.into() {
        return Err(format!("index {index} out of range, there are {main} chains"));
    }
    let jof = enumerate_jof(&dims)
        .nth(index as usize)
        .ok_or("chain count and enumeration disagree")?;
    let system = build_sum_system(&jof).map_err(|e| e.to_string())?;
    let valid = match verify_sum_system(&system, MAX_SUMS) {
        Ok(v) => Value::Bool(v.valid),
        Err(_) => Value::Null,
    };
    Ok(json!({
        "dims": dims,
        "counts": counts,
        "index": index,
        "jof": jof,
        "system": system,
        "valid": valid,
    })
    .to_string())
}

#[wasm_bindgen(js_name = divisorSeries)]
pub fn divisor_series(kind: &str, j: i32, r: i32, from: u32, to: u32) -> Result<String, JsError> {
    divisor_series_json(kind, j, r, from, to).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn arrangements(profile: &str) -> Result<String, JsError> {
    arrangements_json(profile).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sumSystem)]
pub fn sum_system(dims: &str, index: u32) -> Result<String, JsError> {
    sum_system_json(dims, index).map_err(|e| JsError::new(&e))
}
