//! Text and JSON encodings of a poset.
//!
//! Text: one item per line, `#` starts a comment.
//!
//! ```text
//! n 6
//! cover 1 2
//! cover 2 4
//! ```
//!
//! JSON: `{"n": 6, "covers": [[1,2],[2,4]]}`.

use super::{parse_poset, Poset};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub n: usize,
    pub covers: Vec<(usize, usize)>,
}

impl From<&Poset> for PosetJson {
    fn from(p: &Poset) -> Self {
        PosetJson {
            n: p.n(),
            covers: p.covers().to_vec(),
        }
    }
}

fn parse_label(tok: Option<&str>, line_no: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse(format!("line {line_no}: missing number")))?;
    tok.parse::<usize>().map_err(|_| {
        Error::Parse(format!(
            "line {line_no}: `{tok}` is not a non-negative integer"
        ))
    })
}

pub fn parse_text(src: &str) -> Result<Poset> {
    let mut n = None;
    let mut covers = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("n") => {
                if n.is_some() {
                    return Err(Error::Parse(format!("line {line_no}: `n` given twice")));
                }
                n = Some(parse_label(toks.next(), line_no)?);
            }
            Some("cover") => {
                let a = parse_label(toks.next(), line_no)?;
                let b = parse_label(toks.next(), line_no)?;
                covers.push((a, b));
            }
            Some(other) => {
                return Err(Error::Parse(format!(
                    "line {line_no}: unknown keyword `{other}`"
                )))
            }
            None => unreachable!(),
        }
        if let Some(extra) = toks.next() {
            return Err(Error::Parse(format!(
                "line {line_no}: unexpected token `{extra}`"
            )));
        }
    }
    let n = n.ok_or_else(|| Error::Parse("missing `n <count>` line".into()))?;
    parse_poset(n, &covers)
}

pub fn parse_json(src: &str) -> Result<Poset> {
    let raw: PosetJson = serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
    parse_poset(raw.n, &raw.covers)
}

/// Reads a poset file, choosing JSON when the first non-blank character is `{`.
pub fn parse_poset_file(path: impl AsRef<Path>) -> Result<Poset> {
    let path = path.as_ref();
    let src =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if src.trim_start().starts_with('{') {
        parse_json(&src)
    } else {
        parse_text(&src)
    }
}

impl Poset {
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        for &(a, b) in self.covers() {
            out.push_str(&format!("cover {a} {b}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PosetJson::from(self)).expect("plain struct serializes")
    }
}
