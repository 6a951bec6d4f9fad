//! The update-stream text format.
//!
//! ```text
//! n=4 delta=3
//! + 0 1
//! - 0 1
//! ```
//!
//! The header is the first line that is not a `#` comment. Each event line is
//! `+` or `-` followed by two distinct 0-based vertex ids below `n`, separated
//! by single spaces.

use std::fmt::Write as _;

use serde::Serialize;

use super::WorkloadError;
use crate::types::{UpdateEvent, UpdateKind};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StreamHeader {
    pub n: usize,
    pub delta: u32,
}

fn parse_header(line: &str, lineno: usize) -> Result<StreamHeader, WorkloadError> {
    let bad = |message: &str| WorkloadError::Parse { line: lineno, message: message.to_string() };
    let mut parts = line.split(' ');
    let (Some(n), Some(delta), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(bad("header must be `n=<int> delta=<int>`"));
    };
    let n: usize = n
        .strip_prefix("n=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("bad `n=` field"))?;
    let delta: u32 = delta
        .strip_prefix("delta=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("bad `delta=` field"))?;
    if n == 0 || delta == 0 {
        return Err(bad("n and delta must be at least 1"));
    }
    Ok(StreamHeader { n, delta })
}

fn parse_event(line: &str, lineno: usize, n: usize) -> Result<UpdateEvent, WorkloadError> {
    let bad = |message: String| WorkloadError::Parse { line: lineno, message };
    let mut parts = line.split(' ');
    let (Some(op), Some(u), Some(v), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
        return Err(bad("event must be `+ <u> <v>` or `- <u> <v>`".into()));
    };
    let kind = match op {
        "+" => UpdateKind::Insert,
        "-" => UpdateKind::Delete,
        other => return Err(bad(format!("unknown operation `{other}`"))),
    };
    let id = |s: &str| -> Result<u32, WorkloadError> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad(format!("`{s}` is not a vertex id")));
        }
        match s.parse::<u32>() {
            Ok(x) if (x as usize) < n => Ok(x),
            _ => Err(bad(format!("vertex id {s} out of range for n={n}"))),
        }
    };
    let (u, v) = (id(u)?, id(v)?);
    if u == v {
        return Err(bad(format!("self-loop on {u}")));
    }
    Ok(UpdateEvent { kind, u: u.into(), v: v.into() })
}

/// Parses a whole stream. Errors carry 1-based line numbers.
pub fn parse_stream(text: &str) -> Result<(StreamHeader, Vec<UpdateEvent>), WorkloadError> {
    let mut header = None;
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.starts_with('#') {
            continue;
        }
        match header {
            None => header = Some(parse_header(line, lineno)?),
            Some(StreamHeader { n, .. }) => events.push(parse_event(line, lineno, n)?),
        }
    }
    let header = header.ok_or(WorkloadError::HeaderMissing)?;
    Ok((header, events))
}

/// Canonical text form: header, one event per line, trailing newline.
pub fn write_stream(header: &StreamHeader, events: &[UpdateEvent]) -> String {
    let mut out = String::with_capacity(16 + events.len() * 12);
    writeln!(out, "n={} delta={}", header.n, header.delta).unwrap();
    for e in events {
        let op = match e.kind {
            UpdateKind::Insert => '+',
            UpdateKind::Delete => '-',
        };
        writeln!(out, "{op} {} {}", e.u.0, e.v.0).unwrap();
    }
    out
}
