//! `lrc decode`: fill in the erased symbols of a received word, choosing
//! the decoder that matches how the code was built.

use std::path::Path;

use lrc::construct::canonical_d4;
use lrc::gpc::GpcCode;
use lrc::{DecodeOutcome, Result};
use serde_json::json;

use crate::codefile::CodeFile;
use crate::common::{emit, join, load, parse_word, usage, CmdOutcome};

pub fn run(code_path: &Path, word_path: &Path, json: bool) -> CmdOutcome {
    let file = load(code_path)?;
    let text = std::fs::read_to_string(word_path)
        .map_err(|e| usage(format!("cannot read {}: {}", word_path.display(), e)))?;
    let word = parse_word(&text, file.code.n())?;
    match dispatch(&file, &word)? {
        DecodeOutcome::Decoded(full) => {
            let mirror = json!({ "outcome": "decoded", "word": full });
            emit(json, &mirror, &[join(&full)]);
            Ok(0)
        }
        DecodeOutcome::Undecodable => {
            let mirror = json!({ "outcome": "undecodable" });
            emit(json, &mirror, &["UNDECODABLE".to_string()]);
            Ok(5)
        }
    }
}

/// Uses the construction-specific decoder when the file provably carries
/// that construction; falls back to the generic linear solve.
fn dispatch(file: &CodeFile, word: &[Option<u64>]) -> Result<DecodeOutcome> {
    let code = &file.code;
    match file.meta_value("construction") {
        Some("canonical-d4") => {
            let params = (
                file.meta_value("k").and_then(|t| t.parse::<usize>().ok()),
                file.meta_value("r").and_then(|t| t.parse::<usize>().ok()),
            );
            if let (Some(k), Some(r)) = params {
                if let Ok(built) = canonical_d4(k, r, code.field()) {
                    if built.code().points() == code.points() {
                        return built.decode_erasures(word);
                    }
                }
            }
            code.decode_erasures(word)
        }
        Some("gpc") => match GpcCode::from_systematic_code(code) {
            Ok(gpc) => gpc.correct_erasures(word),
            Err(_) => code.decode_erasures(word),
        },
        _ => code.decode_erasures(word),
    }
}
