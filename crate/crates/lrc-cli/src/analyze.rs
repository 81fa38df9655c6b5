//! `lrc analyze`: measure a stored code and run every structural report
//! that applies at the given (or measured) locality parameter.

use std::path::Path;

use lrc::bounds::{
    check_structure, detect_canonical, is_optimal, redundancy_bound,
    verify_parity_floor, CanonicalOutcome,
};
use lrc::Error;
use serde_json::{json, Value};

use crate::codefile::CodeFile;
use crate::common::{
    emit, join, load, locality_json, locality_text, CmdOutcome, Failure,
};

pub fn run(path: &Path, r_flag: Option<usize>, verify: bool, json: bool) -> CmdOutcome {
    let file = load(path)?;
    let code = &file.code;
    let (n, k) = (code.n(), code.k());
    let distance = code.min_distance()?;
    let profile = code.locality_profile()?;
    if verify {
        verify_metadata(&file, distance)?;
    }

    let r = r_flag.or(profile.information_locality.finite());
    let mut prose = vec![
        format!("code: [{}, {}] over {}", n, k, code.field()),
        format!("distance: {}", distance),
        format!(
            "localities: {}",
            join(&profile.values().iter().map(|&l| locality_text(l)).collect::<Vec<_>>())
        ),
        format!("code locality: {}", locality_text(profile.code_locality)),
        format!(
            "information locality: {}",
            locality_text(profile.information_locality)
        ),
    ];
    let mut mirror = json!({
        "file": path.display().to_string(),
        "n": n,
        "k": k,
        "field": code.field().to_string(),
        "distance": distance,
        "localities": profile.values().iter().map(|&l| locality_json(l)).collect::<Vec<_>>(),
        "code_locality": locality_json(profile.code_locality),
        "information_locality": locality_json(profile.information_locality),
        "r": r,
        "bound": Value::Null,
        "optimal": Value::Null,
        "structure": Value::Null,
        "canonical": Value::Null,
        "parity_floor": Value::Null,
    });

    let Some(r) = r else {
        prose.push(
            "structural reports skipped: no finite information locality (pass --r)"
                .to_string(),
        );
        emit(json, &mirror, &prose);
        return Ok(0);
    };

    let required = redundancy_bound(k, r, distance);
    let redundancy = n - k;
    prose.push(format!(
        "redundancy bound (r={}): n-k = {} >= {}{}",
        r,
        redundancy,
        required,
        if redundancy == required { " — meets with equality" } else { "" }
    ));
    mirror["bound"] = json!({
        "required": required,
        "redundancy": redundancy,
        "meets_with_equality": redundancy == required,
    });

    let optimal = is_optimal(code, r)?;
    prose.push(format!("optimal (r={}): {}", r, optimal));
    mirror["optimal"] = Value::from(optimal);

    let report = check_structure(code, r)?;
    let verdict = match report.pass {
        None => {
            let reason = if r >= code.k() {
                "r >= k".to_string()
            } else if code.k() % r != 0 {
                "r does not divide k".to_string()
            } else {
                format!(
                    "n = {}, shape needs k + k/r + d - 2 = {}",
                    code.n(),
                    code.k() + code.k() / r + report.distance - 2
                )
            };
            format!("not claimed ({})", reason)
        }
        Some(true) => format!(
            "pass ({} repair groups, isolated [{}])",
            report.edges.len(),
            join(&report.isolated)
        ),
        Some(false) => "fail (repair groups violate the expected shape)".to_string(),
    };
    prose.push(format!("structure (r={}): {}", r, verdict));
    mirror["structure"] = json!({
        "optimal_shape": report.optimal_shape,
        "canonical_scope": report.canonical_scope,
        "edges": report.edges.iter().map(|e| e.vertices.clone()).collect::<Vec<_>>(),
        "isolated": report.isolated,
        "edges_disjoint": report.edges_disjoint,
        "edges_sized": report.edges_sized,
        "expected_edge_count": report.expected_edge_count,
        "expected_isolated": report.expected_isolated,
        "pass": report.pass,
    });

    match detect_canonical(code, r) {
        Ok(CanonicalOutcome::Canonical(p)) => {
            prose.push(format!(
                "canonical (r={}): yes (info [{}]; locals [{}]; heavies [{}])",
                r,
                join(&p.info),
                join(&p.local),
                join(&p.heavy)
            ));
            mirror["canonical"] = json!({
                "canonical": true,
                "info": p.info,
                "local": p.local,
                "heavy": p.heavy,
            });
        }
        Ok(CanonicalOutcome::NotCanonical { reason }) => {
            prose.push(format!("canonical (r={}): no ({})", r, reason));
            mirror["canonical"] = json!({ "canonical": false, "reason": reason });
        }
        Err(Error::NotApplicable(reason)) => {
            prose.push(format!("canonical (r={}): not applicable ({})", r, reason));
            mirror["canonical"] = json!({ "not_applicable": reason });
        }
        Err(e) => return Err(e.into()),
    }

    match verify_parity_floor(code, r) {
        Ok(report) => {
            prose.push(format!(
                "parity floor (r={}): floor {}; locals exact: {}; heavies meet floor: {}; attained: {} — {}",
                r,
                report.floor,
                report.locals_exact,
                report.heavies_meet_floor,
                report.floor_attained,
                if report.pass { "pass" } else { "fail" }
            ));
            mirror["parity_floor"] = json!({
                "floor": report.floor,
                "local": report.local.iter()
                    .map(|&(i, l)| json!([i, locality_json(l)])).collect::<Vec<_>>(),
                "heavy": report.heavy.iter()
                    .map(|&(i, l)| json!([i, locality_json(l)])).collect::<Vec<_>>(),
                "locals_exact": report.locals_exact,
                "heavies_meet_floor": report.heavies_meet_floor,
                "floor_attained": report.floor_attained,
                "pass": report.pass,
            });
        }
        Err(Error::NotApplicable(reason)) => {
            prose.push(format!("parity floor (r={}): not applicable ({})", r, reason));
            mirror["parity_floor"] = json!({ "not_applicable": reason });
        }
        Err(e) => return Err(e.into()),
    }

    emit(json, &mirror, &prose);
    Ok(0)
}

/// Re-derives everything the metadata claims and demands agreement.
fn verify_metadata(file: &CodeFile, distance: usize) -> Result<(), Failure> {
    let code = &file.code;
    let checks: [(&str, u64); 4] = [
        ("k", code.k() as u64),
        ("n", code.n() as u64),
        ("q", code.field().order()),
        ("distance", distance as u64),
    ];
    for (key, measured) in checks {
        let Some(text) = file.meta_value(key) else { continue };
        let stored: u64 = text
            .trim()
            .parse()
            .map_err(|_| integrity(format!("metadata {} is not a number: {}", key, text)))?;
        if stored != measured {
            return Err(integrity(format!(
                "metadata {} claims {} but measurement gives {}",
                key, stored, measured
            )));
        }
    }
    Ok(())
}

fn integrity(message: String) -> Failure {
    Failure { code: 6, message }
}
