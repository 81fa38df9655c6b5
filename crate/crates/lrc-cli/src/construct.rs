//! `lrc construct`: build a code, print its headline figures, and
//! optionally persist it as a code file.

use std::path::PathBuf;

use lrc::construct::{canonical_d4, optimal_general, pyramid, uniform_locality};
use lrc::gpc::{sample_gpc, SupportGraph};
use lrc::{Field, LinearCode};
use serde_json::json;

use crate::codefile::CodeFile;
use crate::common::{emit, store, usage, CmdOutcome, Failure};
use crate::Construction;

pub fn run(which: Construction, seed: u64, json: bool) -> CmdOutcome {
    let built = match which {
        Construction::Pyramid { k, r, d, q, out, verify } => Built {
            code: pyramid(k, r, d, &field(q)?)?,
            name: "pyramid",
            params: vec![("k", k), ("r", r), ("d", d)],
            graph: None,
            seed: None,
            out,
            verify,
        },
        Construction::CanonicalD4 { k, r, q, out, verify } => Built {
            code: canonical_d4(k, r, &field(q)?)?.code().clone(),
            name: "canonical-d4",
            params: vec![("k", k), ("r", r)],
            graph: None,
            seed: None,
            out,
            verify,
        },
        Construction::OptimalGeneral { k, r, d, q, out, verify } => {
            let (code, accepted) = optimal_general(k, r, d, &field(q)?, seed)?;
            Built {
                code,
                name: "optimal-general",
                params: vec![("k", k), ("r", r), ("d", d)],
                graph: None,
                seed: Some(accepted),
                out,
                verify,
            }
        }
        Construction::Uniform { n, k, r, d, q, out, verify } => {
            let (code, accepted) = uniform_locality(n, k, r, d, &field(q)?, seed)?;
            Built {
                code,
                name: "uniform",
                params: vec![("n", n), ("k", k), ("r", r), ("d", d)],
                graph: None,
                seed: Some(accepted),
                out,
                verify,
            }
        }
        Construction::Gpc { k, graph, q, out, verify } => {
            let graph = parse_graph(k, &graph)?;
            let (code, accepted) = sample_gpc(&graph, &field(q)?, seed)?;
            Built {
                code: code.to_linear_code(),
                name: "gpc",
                params: vec![("k", k)],
                graph: Some(render_graph(&graph)),
                seed: Some(accepted),
                out,
                verify,
            }
        }
    };
    finish(built, json)
}

struct Built {
    code: LinearCode,
    name: &'static str,
    params: Vec<(&'static str, usize)>,
    graph: Option<String>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    verify: bool,
}

fn field(q: u64) -> Result<Field, Failure> {
    Ok(Field::from_order(q)?)
}

fn parse_graph(k: usize, text: &str) -> Result<SupportGraph, Failure> {
    let neighborhoods: Vec<Vec<usize>> = text
        .split(';')
        .map(|part| {
            part.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<usize>()
                        .map_err(|_| usage(format!("bad graph position `{}`", tok)))
                })
                .collect()
        })
        .collect::<Result<_, Failure>>()?;
    Ok(SupportGraph::new(k, neighborhoods)?)
}

fn render_graph(graph: &SupportGraph) -> String {
    (0..graph.h())
        .map(|j| {
            graph
                .neighborhood(j)
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn finish(built: Built, json: bool) -> CmdOutcome {
    let mut file = CodeFile::new(built.code);
    file.push_meta("construction", built.name);
    for (key, value) in &built.params {
        file.push_meta(key, value);
    }
    file.push_meta("q", file.code.field().order());
    if let Some(g) = &built.graph {
        file.push_meta("graph", g);
    }
    if let Some(s) = built.seed {
        file.push_meta("seed", s);
    }
    let distance = if built.verify {
        let d = file.code.min_distance()?;
        file.push_meta("distance", d);
        Some(d)
    } else {
        None
    };
    if let Some(path) = &built.out {
        store(path, &file)?;
    }

    let code = &file.code;
    let mut prose = vec![match &built.out {
        Some(path) => format!(
            "wrote {}: [{}, {}] over {}",
            path.display(),
            code.n(),
            code.k(),
            code.field()
        ),
        None => format!("constructed [{}, {}] over {}", code.n(), code.k(), code.field()),
    }];
    if let Some(d) = distance {
        prose.push(format!("distance: {}", d));
    }
    if let Some(s) = built.seed {
        prose.push(format!("seed: {}", s));
    }
    let mirror = json!({
        "construction": built.name,
        "n": code.n(),
        "k": code.k(),
        "field": code.field().to_string(),
        "distance": distance,
        "seed": built.seed,
        "file": built.out.as_ref().map(|p| p.display().to_string()),
    });
    emit(json, &mirror, &prose);
    Ok(0)
}
