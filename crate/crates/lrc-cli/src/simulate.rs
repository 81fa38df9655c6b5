//! `lrc simulate-repair`: erase coordinates over many trials and repair
//! them, reporting which symbols each repair read.
//!
//! A failed coordinate is repaired locally when its minimal certified
//! recovery set survives intact (for single failures that set is exactly
//! its locality); otherwise the whole word is re-solved from the
//! survivors (a global repair reading all of them), and coordinates the
//! survivors cannot determine are reported unrecoverable — reported, not
//! fatal, since patterns beyond the distance are expected under random
//! failure.

use std::path::Path;

use lrc::{DecodeOutcome, RecoverySet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde_json::json;

use crate::common::{emit, join, load, usage, CmdOutcome, Failure};

/// How each trial picks its failed coordinates.
enum FailurePlan {
    /// Draw this many fresh distinct coordinates per trial.
    Random(usize),
    /// Erase exactly these coordinates in every trial.
    Fixed(Vec<usize>),
}

/// At most this many trials are reported one line at a time.
const DETAIL_LIMIT: u64 = 8;

pub fn run(
    path: &Path,
    failures: &str,
    trials: u64,
    seed: u64,
    json: bool,
) -> CmdOutcome {
    if trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let file = load(path)?;
    let code = &file.code;
    let (n, k) = (code.n(), code.k());
    let q = code.field().order();
    let plan = parse_plan(failures, n)?;

    // Minimal certified recovery sets are a property of the code, not the
    // word; compute them once.
    let recovery: Vec<Option<RecoverySet>> = (0..n)
        .map(|i| Ok(code.locality(i)?.recovery))
        .collect::<Result<_, Failure>>()?;

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut local_repairs: u64 = 0;
    let mut global_repairs: u64 = 0;
    let mut unrecoverable: u64 = 0;
    let mut fan_in_sum: u64 = 0;
    let mut fan_in_max: usize = 0;
    let mut symbols_read: u64 = 0;
    let mut detail_prose: Vec<String> = Vec::new();
    let mut detail_json: Vec<serde_json::Value> = Vec::new();

    for trial in 0..trials {
        let message: Vec<u64> = (0..k).map(|_| rng.gen_range(0..q)).collect();
        let word = code.encode(&message)?;
        let failed: Vec<usize> = match &plan {
            FailurePlan::Fixed(set) => set.clone(),
            FailurePlan::Random(count) => {
                let mut set = rand::seq::index::sample(&mut rng, n, *count).into_vec();
                set.sort_unstable();
                set
            }
        };
        let is_failed = |i: usize| failed.binary_search(&i).is_ok();
        let survivors: Vec<usize> = (0..n).filter(|&i| !is_failed(i)).collect();
        let seen: Vec<Option<u64>> =
            (0..n).map(|i| (!is_failed(i)).then(|| word[i])).collect();
        let whole = code.decode_erasures(&seen)?;
        let survivor_rank = code.rank_of(&survivors);

        let mut read_union = vec![false; n];
        for &i in &failed {
            let outcome = repair_one(
                code, &word, i, &recovery[i], &failed, &survivors, &whole,
                survivor_rank,
            )?;
            match &outcome {
                Repair::Local(set) | Repair::Global(set) => {
                    if matches!(outcome, Repair::Local(_)) {
                        local_repairs += 1;
                    } else {
                        global_repairs += 1;
                    }
                    fan_in_sum += set.len() as u64;
                    fan_in_max = fan_in_max.max(set.len());
                    for &j in set {
                        read_union[j] = true;
                    }
                }
                Repair::Unrecoverable => unrecoverable += 1,
            }
            if trials <= DETAIL_LIMIT {
                let (kind, set) = match &outcome {
                    Repair::Local(set) => ("local", Some(set)),
                    Repair::Global(set) => ("global", Some(set)),
                    Repair::Unrecoverable => ("unrecoverable", None),
                };
                detail_prose.push(match set {
                    Some(set) => format!(
                        "trial {}: coordinate {} {} via [{}]",
                        trial, i, kind, join(set)
                    ),
                    None => format!("trial {}: coordinate {} unrecoverable", trial, i),
                });
                detail_json.push(json!({
                    "trial": trial,
                    "coordinate": i,
                    "outcome": kind,
                    "read": set,
                }));
            }
        }
        symbols_read += read_union.iter().filter(|&&b| b).count() as u64;
    }

    let repaired = local_repairs + global_repairs;
    let mean_fan_in = if repaired == 0 {
        0.0
    } else {
        fan_in_sum as f64 / repaired as f64
    };
    let mut prose = detail_prose;
    prose.push(format!("trials: {}", trials));
    prose.push(format!(
        "repairs: {} local, {} global, {} unrecoverable",
        local_repairs, global_repairs, unrecoverable
    ));
    prose.push(format!("fan-in: mean {:.4}, max {}", mean_fan_in, fan_in_max));
    prose.push(format!("symbols read: {}", symbols_read));
    let mirror = json!({
        "trials": trials,
        "local": local_repairs,
        "global": global_repairs,
        "unrecoverable": unrecoverable,
        "mean_fan_in": mean_fan_in,
        "max_fan_in": fan_in_max,
        "symbols_read": symbols_read,
        "details": if trials <= DETAIL_LIMIT {
            serde_json::Value::from(detail_json)
        } else {
            serde_json::Value::Null
        },
    });
    emit(json, &mirror, &prose);
    Ok(0)
}

enum Repair {
    Local(Vec<usize>),
    Global(Vec<usize>),
    Unrecoverable,
}

#[allow(clippy::too_many_arguments)]
fn repair_one(
    code: &lrc::LinearCode,
    word: &[u64],
    i: usize,
    recovery: &Option<RecoverySet>,
    failed: &[usize],
    survivors: &[usize],
    whole: &DecodeOutcome,
    survivor_rank: usize,
) -> Result<Repair, Failure> {
    if let Some(set) = recovery {
        let intact = set.indices.iter().all(|j| failed.binary_search(j).is_err());
        if intact {
            // Certify the recovery rule against the actual word.
            let f = code.field();
            let value = set
                .indices
                .iter()
                .zip(&set.coefficients)
                .fold(0, |acc, (&j, &c)| f.add(acc, f.mul(c, word[j])));
            if value != word[i] {
                return Err(Failure {
                    code: 6,
                    message: format!("recovery set for coordinate {} is not certified", i),
                });
            }
            return Ok(Repair::Local(set.indices.clone()));
        }
    }
    match whole {
        DecodeOutcome::Decoded(_) => Ok(Repair::Global(survivors.to_vec())),
        DecodeOutcome::Undecodable => {
            // The pattern as a whole is beyond repair, but this symbol may
            // still be determined by the survivors.
            let mut with = survivors.to_vec();
            with.push(i);
            with.sort_unstable();
            if code.rank_of(&with) == survivor_rank {
                Ok(Repair::Global(survivors.to_vec()))
            } else {
                Ok(Repair::Unrecoverable)
            }
        }
    }
}

fn parse_plan(text: &str, n: usize) -> Result<FailurePlan, Failure> {
    if let Some(rest) = text.strip_prefix("random:") {
        let count: usize = rest
            .parse()
            .map_err(|_| usage(format!("bad failure count `{}`", rest)))?;
        if count == 0 || count > n {
            return Err(usage(format!(
                "failure count must be between 1 and {}",
                n
            )));
        }
        return Ok(FailurePlan::Random(count));
    }
    let mut set: Vec<usize> = text
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad coordinate `{}`", tok)))
        })
        .collect::<Result<_, Failure>>()?;
    set.sort_unstable();
    set.dedup();
    if set.is_empty() {
        return Err(usage("at least one failed coordinate is required"));
    }
    if let Some(&worst) = set.last() {
        if worst >= n {
            return Err(usage(format!(
                "coordinate {} out of range for length {}",
                worst, n
            )));
        }
    }
    Ok(FailurePlan::Fixed(set))
}
