//! Line-oriented on-disk format for codes. Human-diffable, and round-trips
//! bit-exactly:
//!
//! ```text
//! lrc 1
//! field <p> <m> <modulus coefficients, lowest degree first>
//! code <k> <n>
//! systematic <k message positions>        (optional)
//! col <k column entries>                  (n lines, code order)
//! meta <key> <value...>                   (any number, untrusted)
//! ```

use lrc::{Error, Field, LinearCode, Result};

/// A code plus its untrusted provenance metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeFile {
    pub code: LinearCode,
    /// Ordered key/value pairs; values may contain spaces.
    pub meta: Vec<(String, String)>,
}

impl CodeFile {
    pub fn new(code: LinearCode) -> CodeFile {
        CodeFile { code, meta: Vec::new() }
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn serialize(&self) -> String {
        let code = &self.code;
        let f = code.field();
        let mut out = String::from("lrc 1\n");
        out.push_str(&format!("field {} {}", f.characteristic(), f.degree()));
        for &c in f.modulus() {
            out.push_str(&format!(" {}", c));
        }
        out.push('\n');
        out.push_str(&format!("code {} {}\n", code.k(), code.n()));
        if let Some(info) = code.systematic_info() {
            out.push_str("systematic");
            for &i in info {
                out.push_str(&format!(" {}", i));
            }
            out.push('\n');
        }
        for i in 0..code.n() {
            out.push_str("col");
            for &v in code.point(i) {
                out.push_str(&format!(" {}", v));
            }
            out.push('\n');
        }
        for (key, value) in &self.meta {
            out.push_str(&format!("meta {} {}\n", key, value));
        }
        out
    }

    pub fn parse(text: &str) -> Result<CodeFile> {
        let mut lines = text.lines().enumerate();
        let mut next = |what: &str| -> Result<(usize, &str)> {
            lines
                .next()
                .ok_or_else(|| bad(0, &format!("missing {} line", what)))
        };

        let (ln, header) = next("header")?;
        if header.trim() != "lrc 1" {
            return Err(bad(ln, "expected header `lrc 1`"));
        }
        let (ln, field_line) = next("field")?;
        let toks = tokens(field_line, "field", ln)?;
        if toks.len() < 2 {
            return Err(bad(ln, "field line needs p and m"));
        }
        let p = parse_u64(toks[0], ln)?;
        let m = parse_u64(toks[1], ln)? as u32;
        let modulus: Vec<u64> =
            toks[2..].iter().map(|t| parse_u64(t, ln)).collect::<Result<_>>()?;
        let field = Field::from_parts(p, m, modulus)?;

        let (ln, code_line) = next("code")?;
        let toks = tokens(code_line, "code", ln)?;
        if toks.len() != 2 {
            return Err(bad(ln, "code line needs k and n"));
        }
        let k = parse_u64(toks[0], ln)? as usize;
        let n = parse_u64(toks[1], ln)? as usize;

        let mut systematic: Option<Vec<usize>> = None;
        let mut points: Vec<Vec<u64>> = Vec::with_capacity(n);
        let mut meta = Vec::new();
        for (ln, line) in lines {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            let (tag, rest) = line.split_once(' ').unwrap_or((line, ""));
            match tag {
                "systematic" => {
                    if systematic.is_some() || !points.is_empty() {
                        return Err(bad(ln, "stray systematic line"));
                    }
                    let idx: Vec<usize> = rest
                        .split_whitespace()
                        .map(|t| parse_u64(t, ln).map(|v| v as usize))
                        .collect::<Result<_>>()?;
                    systematic = Some(idx);
                }
                "col" => {
                    let col: Vec<u64> = rest
                        .split_whitespace()
                        .map(|t| parse_u64(t, ln))
                        .collect::<Result<_>>()?;
                    if col.len() != k {
                        return Err(bad(ln, &format!("column needs {} entries", k)));
                    }
                    points.push(col);
                }
                "meta" => {
                    let (key, value) = rest.split_once(' ').unwrap_or((rest, ""));
                    if key.is_empty() {
                        return Err(bad(ln, "meta line needs a key"));
                    }
                    meta.push((key.to_string(), value.to_string()));
                }
                other => return Err(bad(ln, &format!("unknown line tag `{}`", other))),
            }
        }
        if points.len() != n {
            return Err(Error::InvalidParameter(format!(
                "expected {} col lines, found {}",
                n,
                points.len()
            )));
        }
        let code = match systematic {
            Some(info) => LinearCode::new_systematic(field, points, info)?,
            None => LinearCode::new(field, points)?,
        };
        if code.k() != k {
            return Err(Error::InvalidParameter(format!(
                "declared dimension {} but columns have {} entries",
                k,
                code.k()
            )));
        }
        Ok(CodeFile { code, meta })
    }
}

fn bad(line: usize, what: &str) -> Error {
    Error::InvalidParameter(format!("code file line {}: {}", line + 1, what))
}

fn tokens<'a>(line: &'a str, tag: &str, ln: usize) -> Result<Vec<&'a str>> {
    let mut it = line.split_whitespace();
    if it.next() != Some(tag) {
        return Err(bad(ln, &format!("expected a `{}` line", tag)));
    }
    Ok(it.collect())
}

fn parse_u64(tok: &str, ln: usize) -> Result<u64> {
    tok.parse::<u64>().map_err(|_| bad(ln, &format!("bad integer `{}`", tok)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use lrc::construct::pyramid;

    #[test]
    fn round_trip_is_bit_exact() {
        let code = pyramid(4, 2, 4, &Field::from_order(7).unwrap()).unwrap();
        let mut file = CodeFile::new(code);
        file.push_meta("construction", "pyramid");
        file.push_meta("seed", 0);
        let text = file.serialize();
        let back = CodeFile::parse(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.serialize(), text);
    }

    #[test]
    fn extension_fields_round_trip() {
        let f = Field::from_order(8).unwrap();
        let code = LinearCode::new(
            f,
            vec![vec![1, 0], vec![0, 1], vec![1, 3], vec![2, 7]],
        )
        .unwrap();
        let file = CodeFile::new(code);
        let back = CodeFile::parse(&file.serialize()).unwrap();
        assert_eq!(back.code.field().modulus(), file.code.field().modulus());
        assert_eq!(back.code.points(), file.code.points());
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(CodeFile::parse("nonsense").is_err());
        assert!(CodeFile::parse("lrc 1\nfield 7 1 0 1\ncode 2 2\ncol 1 0\n").is_err());
        assert!(CodeFile::parse(
            "lrc 1\nfield 7 1 0 1\ncode 1 1\ncol 1\nbogus tag\n"
        )
        .is_err());
        // Value out of field range.
        assert!(CodeFile::parse("lrc 1\nfield 7 1 0 1\ncode 1 1\ncol 9\n").is_err());
    }

    #[test]
    fn meta_preserves_spaces_and_order() {
        let f = Field::from_order(5).unwrap();
        let code = LinearCode::new(f, vec![vec![1], vec![2]]).unwrap();
        let mut file = CodeFile::new(code);
        file.push_meta("params", "k=1 n=2 q=5");
        file.push_meta("construction", "adhoc");
        let back = CodeFile::parse(&file.serialize()).unwrap();
        assert_eq!(back.meta_value("params"), Some("k=1 n=2 q=5"));
        assert_eq!(back.meta, file.meta);
    }
}
