//! Shared plumbing: the exit-code contract, file loading, word parsing,
//! and report emission.

use std::path::Path;

use lrc::{Error, Locality};
use serde_json::Value;

use crate::codefile::CodeFile;

/// A command failure carrying its contractual exit code.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

/// Commands resolve to an exit code (0, or 5 for undecodable) or a failure.
pub type CmdOutcome = Result<u8, Failure>;

pub fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::SamplingFailed { .. } | Error::VerificationFailed(_) => 3,
            Error::BudgetExceeded(_) => 4,
            Error::Integrity(_) => 6,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

pub fn load(path: &Path) -> Result<CodeFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {}", path.display(), e)))?;
    Ok(CodeFile::parse(&text)?)
}

pub fn store(path: &Path, file: &CodeFile) -> Result<(), Failure> {
    std::fs::write(path, file.serialize())
        .map_err(|e| usage(format!("cannot write {}: {}", path.display(), e)))
}

/// Parses a received word: n whitespace-separated symbols, `?` = erased.
pub fn parse_word(text: &str, n: usize) -> Result<Vec<Option<u64>>, Failure> {
    let word: Vec<Option<u64>> = text
        .split_whitespace()
        .map(|tok| {
            if tok == "?" {
                Ok(None)
            } else {
                tok.parse::<u64>()
                    .map(Some)
                    .map_err(|_| usage(format!("bad symbol `{}`", tok)))
            }
        })
        .collect::<Result<_, Failure>>()?;
    if word.len() != n {
        return Err(usage(format!(
            "word has {} symbols, code length is {}",
            word.len(),
            n
        )));
    }
    Ok(word)
}

/// Prints either the JSON mirror or the prose lines.
///
/// Write errors (e.g. a closed pipe when output is fed to `head`) are
/// swallowed rather than turned into a panic.
pub fn emit(json: bool, mirror: &Value, prose: &[String]) {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if json {
        let text = serde_json::to_string_pretty(mirror).expect("valid JSON");
        let _ = writeln!(out, "{}", text);
    } else {
        for line in prose {
            if writeln!(out, "{}", line).is_err() {
                return;
            }
        }
    }
}

/// Locality as JSON: a number, or the string "inf".
pub fn locality_json(l: Locality) -> Value {
    match l {
        Locality::Finite(v) => Value::from(v),
        Locality::Infinite => Value::from("inf"),
    }
}

/// Locality as prose.
pub fn locality_text(l: Locality) -> String {
    match l {
        Locality::Finite(v) => v.to_string(),
        Locality::Infinite => "inf".to_string(),
    }
}

/// `a b c` rendering for index lists and symbol lists.
pub fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}
