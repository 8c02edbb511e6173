use std::io::{self, BufRead};

use serde::Serialize;
use sumsys_core::arrangements::{
    count_annotated, count_arrangements, count_arrangements_bruteforce, ArrangementProfile,
};
use sumsys_core::dirichlet::{
    c_j, c_j_negj, c_j_r, count_squarefree_factorisations, d_j, modified_moebius,
};
use sumsys_core::jof::{
    count_jof, count_jof_2d, count_jof_alternating, count_jof_by_profiles,
    count_jof_enumerated_par, enumerate_jof, symmetric_quotient, DimTuple, Jof,
};
use sumsys_core::sumsys::{build_all_sum_systems, build_sum_system, verify_sum_system_par, SumSystem};
use sumsys_core::Error;

use crate::output::{Empty, Out, Record};
use crate::{
    ArrangementArgs, CountArgs, CountMethod, DivisorArgs, DivisorKind, EnumerateArgs,
    EnumerateFormat, Failure, SequenceArgs, SumsystemCommand,
};

/// Largest number of arguments per `divisor` invocation.
pub const MAX_RANGE: u64 = 1_000_000;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

#[derive(Serialize)]
struct DivisorInput {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    j: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<i64>,
    n: u64,
}

fn need(v: Option<i64>, flag: &str, kind: &str) -> Result<i64, Failure> {
    v.ok_or_else(|| usage(format!("--kind {kind} requires --{flag}")))
}

fn need_nonneg(v: Option<i64>, flag: &str, kind: &str) -> Result<u32, Failure> {
    let x = need(v, flag, kind)?;
    u32::try_from(x).map_err(|_| usage(format!("--{flag} must be in 0..=2^32-1 for --kind {kind}, got {x}")))
}

pub fn divisor(a: &DivisorArgs, out: &mut Out) -> Result<(), Failure> {
    let (lo, hi) = match (a.n, a.from, a.to) {
        (Some(n), _, _) => (n, n),
        (None, Some(f), Some(t)) => (f, t),
        _ => return Err(usage("give --n or both --from and --to")),
    };
    if lo == 0 {
        return Err(usage("arguments must be positive"));
    }
    if lo > hi {
        return Err(usage(format!("empty range {lo}..={hi}")));
    }
    if hi - lo >= MAX_RANGE {
        return Err(usage(format!("range holds {} values, limit is {MAX_RANGE}", hi - lo + 1)));
    }
    // Resolve parameters once so every line of a range uses the same ones.
    let (name, j, r): (&'static str, Option<i64>, Option<i64>) = match a.kind {
        DivisorKind::D => ("d", Some(need(a.j, "j", "d")?), None),
        DivisorKind::C => ("c", Some(need_nonneg(a.j, "j", "c")?.into()), None),
        DivisorKind::Cjr => (
            "cjr",
            Some(need_nonneg(a.j, "j", "cjr")?.into()),
            Some(need(a.r, "r", "cjr")?),
        ),
        DivisorKind::CjNegj => ("cj-negj", Some(need_nonneg(a.j, "j", "cj-negj")?.into()), None),
        DivisorKind::MuMod => ("mu-mod", None, None),
        DivisorKind::F => ("F", Some(need_nonneg(a.j, "j", "F")?.into()), None),
    };
    for n in lo..=hi {
        let value = match a.kind {
            DivisorKind::D => d_j(j.unwrap(), n).to_string(),
            DivisorKind::C => c_j(j.unwrap() as u32, n).to_string(),
            DivisorKind::Cjr => c_j_r(j.unwrap() as u32, r.unwrap(), n).to_string(),
            DivisorKind::CjNegj => c_j_negj(j.unwrap() as u32, n).to_string(),
            DivisorKind::MuMod => modified_moebius(n).to_string(),
            DivisorKind::F => count_squarefree_factorisations(j.unwrap() as u32, n).to_string(),
        };
        out.emit(&Record {
            op: "divisor",
            input: DivisorInput { kind: name, j, r, n },
            value,
            extra: Empty {},
        })?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ArrangementInput<'a> {
    profile: &'a [u32],
    #[serde(skip_serializing_if = "Option::is_none")]
    ticks: Option<u64>,
}

#[derive(Serialize)]
struct ArrangementExtra {
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    annotated: Option<String>,
}

pub fn arrangements(a: &ArrangementArgs, out: &mut Out) -> Result<(), Failure> {
    let profile = ArrangementProfile::new(a.profile.clone())?;
    let value = count_arrangements(&profile);
    let oracle = if a.oracle {
        Some(count_arrangements_bruteforce(&profile)?)
    } else {
        None
    };
    let extra = ArrangementExtra {
        agree: oracle.as_ref().map(|o| *o == value),
        oracle: oracle.map(|o| o.to_string()),
        annotated: a.ticks.map(|t| count_annotated(&profile, t).to_string()),
    };
    out.emit(&Record {
        op: "arrangements",
        input: ArrangementInput {
            profile: &a.profile,
            ticks: a.ticks,
        },
        value: value.to_string(),
        extra,
    })?;
    Ok(())
}

#[derive(Serialize)]
struct CountInput<'a> {
    dims: &'a DimTuple,
    method: &'static str,
}

pub fn count(a: &CountArgs, guard: u64, out: &mut Out) -> Result<(), Failure> {
    let dims = DimTuple::new(a.dims.clone())?;
    let (method, value) = match a.method {
        CountMethod::Main => ("main", count_jof(&dims)),
        CountMethod::Profiles => ("profiles", count_jof_by_profiles(&dims)),
        CountMethod::Alternating => ("alternating", count_jof_alternating(&dims)),
        CountMethod::TwoD => match dims.parts() {
            &[a1, a2] => ("2d", count_jof_2d(a1, a2)?),
            _ => return Err(usage(format!("method 2d needs two dimensions, got {}", dims.m()))),
        },
        CountMethod::Enumerate => {
            let expected = count_jof(&dims);
            if expected > guard.into() {
                return Err(Error::Guard {
                    what: "number of chains to enumerate",
                    actual: u128::try_from(&expected).unwrap_or(u128::MAX),
                    limit: guard.into(),
                }
                .into());
            }
            ("enumerate", count_jof_enumerated_par(&dims).into())
        }
    };
    out.emit(&Record {
        op: "count",
        input: CountInput {
            dims: &dims,
            method,
        },
        value: value.to_string(),
        extra: Empty {},
    })?;
    Ok(())
}

pub fn enumerate(a: &EnumerateArgs, out: &mut Out) -> Result<(), Failure> {
    let dims = DimTuple::new(a.dims.clone())?;
    let limit = a.limit.map_or(usize::MAX, |l| usize::try_from(l).unwrap_or(usize::MAX));
    let chains = enumerate_jof(&dims).take(limit);
    match a.format {
        EnumerateFormat::Lines => {
            for jof in chains {
                out.line(&jof.to_json())?;
            }
        }
        EnumerateFormat::Json => {
            let all: Vec<Jof> = chains.collect();
            out.emit(&all)?;
        }
    }
    Ok(())
}

/// Non-blank lines of standard input.
fn stdin_lines() -> impl Iterator<Item = io::Result<String>> {
    io::stdin()
        .lock()
        .lines()
        .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
}

fn parse_jof(text: &str) -> Result<Jof, Failure> {
    Ok(Jof::from_json(text.trim())?)
}

/// Accepts a bare system or a record whose `value` is one.
fn parse_system(text: &str) -> Result<SumSystem, Failure> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidSumSystem(format!("malformed JSON: {e}")))?;
    let v = match v {
        serde_json::Value::Object(mut o) if o.contains_key("op") => o
            .remove("value")
            .ok_or_else(|| Error::InvalidSumSystem("record has no value".into()))?,
        other => other,
    };
    Ok(SumSystem::from_json(&v.to_string())?)
}

#[derive(Serialize)]
struct AllExtra {
    valid: bool,
}

pub fn sumsystem(c: &SumsystemCommand, guard: u64, out: &mut Out) -> Result<(), Failure> {
    match c {
        SumsystemCommand::Build { jof } => {
            let mut build = |text: &str| -> Result<(), Failure> {
                let jof = parse_jof(text)?;
                let sys = build_sum_system(&jof)?;
                out.emit(&Record {
                    op: "sumsystem.build",
                    input: &jof,
                    value: &sys,
                    extra: Empty {},
                })?;
                Ok(())
            };
            match jof {
                Some(text) => build(text)?,
                None => {
                    for line in stdin_lines() {
                        build(&line?)?;
                    }
                }
            }
        }
        SumsystemCommand::All { dims } => {
            let dims = DimTuple::new(dims.clone())?;
            for (jof, sys) in build_all_sum_systems(&dims, guard)? {
                let valid = verify_sum_system_par(&sys, guard)?.valid;
                out.emit(&Record {
                    op: "sumsystem.all",
                    input: &jof,
                    value: &sys,
                    extra: AllExtra { valid },
                })?;
            }
        }
        SumsystemCommand::Verify { system } => {
            let mut all_valid = true;
            let mut verify = |text: &str| -> Result<(), Failure> {
                let sys = parse_system(text)?;
                let verdict = verify_sum_system_par(&sys, guard)?;
                all_valid &= verdict.valid;
                out.emit(&Record {
                    op: "sumsystem.verify",
                    input: &sys,
                    value: verdict,
                    extra: Empty {},
                })?;
                Ok(())
            };
            match system {
                Some(text) => verify(text)?,
                None => {
                    for line in stdin_lines() {
                        verify(&line?)?;
                    }
                }
            }
            if !all_valid {
                return Err(Failure::VerificationFailed);
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SequenceInput {
    m: u8,
    a: u64,
}

pub fn sequence(s: &SequenceArgs, out: &mut Out) -> Result<(), Failure> {
    for a in 2..=s.a_max {
        let q = symmetric_quotient(s.m as usize, a)?;
        out.emit(&Record {
            op: "sequence",
            input: SequenceInput { m: s.m, a },
            value: q.to_string(),
            extra: Empty {},
        })?;
    }
    Ok(())
}
