//! File formats: datum files, trace files and presentation files.
//!
//! Datum files are pretty-printed JSON of the canonical datum. Trace files
//! are JSON lines: a header object with an optional `target`, then one step
//! per line. Presentation files are plain text:
//!
//! ```text
//! generators: a b
//! a b -a -b
//! a a a
//! ```
//!
//! one relator per line, letters separated by spaces, `#` starts a comment.

use serde::{Deserialize, Serialize};

use crate::datum::KirbyDatum;
use crate::error::{Error, Result};
use crate::invariants::GroupPresentation;
use crate::moves::{MoveTrace, TraceStep, TraceTarget};
use crate::word::Word;

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), message: e.to_string() }
}

pub fn datum_to_string(d: &KirbyDatum) -> String {
    let mut s = serde_json::to_string_pretty(&d.canonical()).expect("datum serializes");
    s.push('\n');
    s
}

/// Parses and validates a datum file; the result is canonical.
pub fn datum_from_str(text: &str) -> Result<KirbyDatum> {
    let d: KirbyDatum = serde_json::from_str(text).map_err(json_err)?;
    let report = d.validate();
    if let Some(v) = report.violations.first() {
        return Err(Error::Parse { line: 0, message: format!("invalid datum: {} ({})", v.message, v.handles.join(", ")) });
    }
    Ok(d.canonical())
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct TraceHeader {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<TraceTarget>,
    steps: usize,
}

pub fn trace_to_string(t: &MoveTrace) -> String {
    let header = TraceHeader { target: t.target.clone(), steps: t.steps.len() };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for s in &t.steps {
        out.push_str(&serde_json::to_string(s).expect("step serializes"));
        out.push('\n');
    }
    out
}

pub fn trace_from_str(text: &str) -> Result<MoveTrace> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or(Error::Parse { line: 1, message: "empty trace file".into() })?;
    let header: TraceHeader =
        serde_json::from_str(first).map_err(|e| Error::Parse { line: 1, message: e.to_string() })?;
    let mut steps = Vec::new();
    for (k, l) in lines {
        let step: TraceStep =
            serde_json::from_str(l).map_err(|e| Error::Parse { line: k + 1, message: e.to_string() })?;
        steps.push(step);
    }
    if steps.len() != header.steps {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("header declares {} steps, found {}", header.steps, steps.len()),
        });
    }
    Ok(MoveTrace { target: header.target, steps })
}

pub fn presentation_to_string(p: &GroupPresentation) -> String {
    let mut out = format!("generators: {}\n", p.generators.join(" "));
    for r in &p.relators {
        let letters: Vec<String> = r.letters().iter().map(|l| l.to_string()).collect();
        out.push_str(&letters.join(" "));
        out.push('\n');
    }
    out
}

pub fn presentation_from_str(text: &str) -> Result<GroupPresentation> {
    let mut generators: Option<Vec<String>> = None;
    let mut relators = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("generators:") {
            if generators.is_some() {
                return Err(Error::Parse { line: k + 1, message: "duplicate generators line".into() });
            }
            generators = Some(rest.split_whitespace().map(String::from).collect());
            continue;
        }
        let gens = generators
            .as_ref()
            .ok_or(Error::Parse { line: k + 1, message: "relator before generators line".into() })?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        for t in &tokens {
            let g = t.strip_prefix('-').unwrap_or(t);
            if g == "1" && tokens.len() == 1 {
                continue;
            }
            if !gens.iter().any(|x| x == g) {
                return Err(Error::Parse { line: k + 1, message: format!("unknown generator {g}") });
            }
        }
        if tokens == ["1"] {
            relators.push(Word::empty());
        } else {
            relators.push(Word::parse(&tokens));
        }
    }
    let generators = generators.ok_or(Error::Parse { line: 1, message: "missing generators line".into() })?;
    GroupPresentation::new(generators, relators)
}
