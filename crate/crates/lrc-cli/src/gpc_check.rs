//! `lrc gpc-check`: read a systematic code file as a generalized pyramid
//! code and run the full battery: general position, locality vs degree,
//! the elimination bound, support enumeration, and union closure.

use std::path::Path;

use lrc::gpc::support_closure_check;
use lrc::Error;
use serde_json::{json, Value};

use crate::common::{emit, load, locality_json, locality_text, usage, CmdOutcome};

pub fn run(path: &Path, max_parities: usize, json: bool) -> CmdOutcome {
    if !(1..=12).contains(&max_parities) {
        return Err(usage("--max-parities must be between 1 and 12"));
    }
    let file = load(path)?;
    let mut code = lrc::gpc::GpcCode::from_systematic_code(&file.code)?;
    let degrees: Vec<usize> = (0..code.h()).map(|j| code.graph().degree(j)).collect();
    let general_position = code.verify_general_position()?;
    let locality = code.locality_report()?;
    let elimination = code.check_elimination_bound(max_parities)?;
    // The span sweeps are enrichment: skip them (with a note) when the
    // field is too large to enumerate.
    let supports = match code.enumerate_supports() {
        Ok(s) => Some(s),
        Err(Error::BudgetExceeded(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let closure =
        match support_closure_check(code.field(), code.k(), code.parity_points()) {
            Ok(c) => Some(c),
            Err(Error::BudgetExceeded(_)) => None,
            Err(e) => return Err(e.into()),
        };

    let mut prose = vec![
        format!(
            "graph: {} message positions, {} parities; degrees [{}]",
            code.k(),
            code.h(),
            crate::common::join(&degrees)
        ),
        format!("general position: {}", general_position),
        format!(
            "parity locality: [{}] — {}",
            crate::common::join(
                &locality.entries.iter().map(|e| locality_text(e.locality)).collect::<Vec<_>>()
            ),
            if locality.matches_degree {
                "matches degrees"
            } else {
                "drops below degree"
            }
        ),
        format!(
            "elimination bound (|J| <= {}): {} pairs examined, {} witnessed, {} violations — {}",
            max_parities,
            elimination.examined,
            elimination.witnessed,
            elimination.violations.len(),
            if elimination.pass { "pass" } else { "fail" }
        ),
    ];
    match &supports {
        Some(s) => prose.push(format!(
            "support enumeration: {} by span vs {} combinatorial — {}{}",
            s.by_span.len(),
            s.by_combinatorics.len(),
            if s.agree { "agree" } else { "disagree" },
            if s.comparable { "" } else { " (field too small to be conclusive)" }
        )),
        None => prose.push("support enumeration: skipped (field too large)".into()),
    }
    match &closure {
        Some(c) => prose.push(format!(
            "support closure: {}closed{}",
            if c.closed { "" } else { "not " },
            match c.pass {
                Some(true) => " — pass",
                Some(false) => " — fail",
                None => " (not applicable: field smaller than the ambient length)",
            }
        )),
        None => prose.push("support closure: skipped (field too large)".into()),
    }

    let mirror = json!({
        "file": path.display().to_string(),
        "k": code.k(),
        "h": code.h(),
        "degrees": degrees,
        "general_position": general_position,
        "locality": locality.entries.iter().map(|e| json!({
            "parity": e.parity,
            "degree": e.degree,
            "locality": locality_json(e.locality),
        })).collect::<Vec<_>>(),
        "matches_degree": locality.matches_degree,
        "elimination": {
            "max_parities": max_parities,
            "examined": elimination.examined,
            "witnessed": elimination.witnessed,
            "violations": elimination.violations,
            "pass": elimination.pass,
        },
        "supports": supports.as_ref().map(|s| json!({
            "by_span": s.by_span,
            "by_combinatorics": s.by_combinatorics,
            "comparable": s.comparable,
            "agree": s.agree,
        })).unwrap_or(Value::Null),
        "closure": closure.as_ref().map(|c| json!({
            "applicable": c.applicable,
            "dimension": c.dimension,
            "closed": c.closed,
            "violation": c.violation,
            "pass": c.pass,
        })).unwrap_or(Value::Null),
    });
    emit(json, &mirror, &prose);
    Ok(0)
}
