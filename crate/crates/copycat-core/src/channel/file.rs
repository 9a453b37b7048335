//! Newline-delimited trace file format.
//!
//! ```text
//! #copycat-trace v1 variant=<id> kind=<branch|weight|step>
//! E <event-name>   (branch traces)
//! W <decimal>      (weight traces)
//! S <decimal>      (step traces)
//! ```
//!
//! Other `#` lines are comments and are ignored.

use std::fmt;

use crate::victims::{BranchEvent, BranchTrace, Variant};

use super::{StepTrace, WeightTrace};

pub const TRACE_HEADER_MAGIC: &str = "#copycat-trace v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceFile {
    Branch(BranchTrace),
    Weight(WeightTrace),
    Step { variant: Variant, trace: StepTrace },
}

impl TraceFile {
    pub fn variant(&self) -> Variant {
        match self {
            TraceFile::Branch(t) => t.variant,
            TraceFile::Weight(t) => t.variant,
            TraceFile::Step { variant, .. } => *variant,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TraceFile::Branch(_) => "branch",
            TraceFile::Weight(_) => "weight",
            TraceFile::Step { .. } => "step",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for TraceParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for TraceParseError {}

pub fn write_trace(trace: &TraceFile) -> String {
    let mut out = format!(
        "{TRACE_HEADER_MAGIC} variant={} kind={}\n",
        trace.variant().id(),
        trace.kind()
    );
    match trace {
        TraceFile::Branch(t) => {
            for ev in &t.events {
                out.push_str("E ");
                out.push_str(ev.name());
                out.push('\n');
            }
        }
        TraceFile::Weight(t) => {
            for w in &t.weights {
                out.push_str(&format!("W {w}\n"));
            }
        }
        TraceFile::Step { trace, .. } => {
            for s in &trace.steps {
                out.push_str(&format!("S {s}\n"));
            }
        }
    }
    out
}

pub fn read_trace(text: &str) -> Result<TraceFile, TraceParseError> {
    let err = |line: usize, message: String| TraceParseError { line, message };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| err(1, "empty trace file".into()))?;
    if !header.starts_with(TRACE_HEADER_MAGIC) {
        return Err(err(1, format!("missing `{TRACE_HEADER_MAGIC}` header")));
    }
    let mut variant = None;
    let mut kind = None;
    for field in header[TRACE_HEADER_MAGIC.len()..].split_whitespace() {
        match field.split_once('=') {
            Some(("variant", v)) => {
                variant = Some(
                    Variant::from_id(v).ok_or_else(|| err(1, format!("unknown variant `{v}`")))?,
                )
            }
            Some(("kind", k)) => kind = Some(k.to_string()),
            _ => return Err(err(1, format!("bad header field `{field}`"))),
        }
    }
    let variant = variant.ok_or_else(|| err(1, "header missing variant".into()))?;
    let kind = kind.ok_or_else(|| err(1, "header missing kind".into()))?;

    let mut events = Vec::new();
    let mut weights = Vec::new();
    let mut steps = Vec::new();
    for (idx, raw) in lines {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (tag, rest) = line
            .split_once(' ')
            .ok_or_else(|| err(lineno, format!("bad record `{line}`")))?;
        match (tag, kind.as_str()) {
            ("E", "branch") => events.push(
                BranchEvent::from_name(rest.trim())
                    .ok_or_else(|| err(lineno, format!("unknown event `{rest}`")))?,
            ),
            ("W", "weight") => weights.push(
                rest.trim()
                    .parse::<u32>()
                    .map_err(|_| err(lineno, format!("bad weight `{rest}`")))?,
            ),
            ("S", "step") => steps.push(
                rest.trim()
                    .parse::<u32>()
                    .map_err(|_| err(lineno, format!("bad step `{rest}`")))?,
            ),
            _ => {
                return Err(err(
                    lineno,
                    format!("record `{tag}` does not match trace kind `{kind}`"),
                ))
            }
        }
    }
    match kind.as_str() {
        "branch" => {
            let trace = BranchTrace { variant, events };
            trace
                .check_alphabet()
                .map_err(|e| err(1, e.to_string()))?;
            Ok(TraceFile::Branch(trace))
        }
        "weight" => Ok(TraceFile::Weight(WeightTrace { variant, weights })),
        "step" => Ok(TraceFile::Step { variant, trace: StepTrace { steps } }),
        other => Err(err(1, format!("unknown trace kind `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::victims::beea_compact;
    use num_bigint::BigUint;

    #[test]
    fn branch_trace_round_trip_is_byte_identical() {
        let (_, t) = beea_compact(&BigUint::from(43u32), &BigUint::from(101u32)).unwrap();
        let file = TraceFile::Branch(t);
        let text = write_trace(&file);
        let parsed = read_trace(&text).unwrap();
        assert_eq!(parsed, file);
        assert_eq!(write_trace(&parsed), text);
    }

    #[test]
    fn comments_are_ignored() {
        let text = "#copycat-trace v1 variant=ecc-mulmod kind=step\n# a comment\nS 49\nS 46\n";
        match read_trace(text).unwrap() {
            TraceFile::Step { trace, .. } => assert_eq!(trace.steps, vec![49, 46]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn record_kind_mismatch_reports_line() {
        let text = "#copycat-trace v1 variant=compact-beea kind=branch\nW 7\n";
        let e = read_trace(text).unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn foreign_event_rejected() {
        let text = "#copycat-trace v1 variant=compact-beea kind=branch\nE DIV_STEP\n";
        assert!(read_trace(text).is_err());
    }
}
