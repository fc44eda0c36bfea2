//! Reader for the line-oriented diagram format.
//!
//! ```text
//! vertices 8
//! u1: 1 2 3 4
//! u2: 5 6 7 8
//! v1: 1+ 5- 2+ 6-
//! v2: 3+ 7- 4+ 8-
//! ```

use super::{CurveId, DiagramError, HeegaardDiagram};

fn syntax(line: usize, msg: impl Into<String>) -> DiagramError {
    DiagramError::SyntaxError {
        line,
        msg: msg.into(),
    }
}

/// Parses and validates a diagram file.
pub fn parse_diagram(text: &str) -> Result<HeegaardDiagram, DiagramError> {
    let mut count: Option<usize> = None;
    let mut u: [Vec<u32>; 2] = Default::default();
    let mut v: [Vec<(u32, i8)>; 2] = Default::default();
    let mut last_slot: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some(n) = count else {
            let mut it = body.split_whitespace();
            if it.next() != Some("vertices") {
                return Err(syntax(line, "expected `vertices N`"));
            }
            let n = it
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| syntax(line, "expected a vertex count"))?;
            if it.next().is_some() {
                return Err(syntax(line, "trailing tokens after vertex count"));
            }
            count = Some(n);
            continue;
        };
        let (name, rest) = body
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected `name: ...`"))?;
        let curve = CurveId::ALL
            .into_iter()
            .find(|c| c.name() == name.trim())
            .ok_or_else(|| syntax(line, format!("unknown curve `{}`", name.trim())))?;
        if last_slot.is_some_and(|s| s >= curve.slot()) {
            return Err(syntax(line, "curve lines must appear once each, in the order u1, u2, v1, v2"));
        }
        last_slot = Some(curve.slot());
        for tok in rest.split_whitespace() {
            match curve {
                CurveId::U1 | CurveId::U2 => {
                    let x = parse_id(tok, n).ok_or_else(|| syntax(line, format!("bad vertex `{tok}`")))?;
                    u[curve.index()].push(x);
                }
                CurveId::V1 | CurveId::V2 => {
                    let (num, s) = match tok.as_bytes().last() {
                        Some(b'+') => (&tok[..tok.len() - 1], 1),
                        Some(b'-') => (&tok[..tok.len() - 1], -1),
                        _ => return Err(syntax(line, format!("`{tok}` lacks a crossing sign"))),
                    };
                    let x = parse_id(num, n).ok_or_else(|| syntax(line, format!("bad vertex `{tok}`")))?;
                    v[curve.index()].push((x, s));
                }
            }
        }
    }
    let n = count.ok_or_else(|| syntax(1, "missing `vertices N` header"))?;
    let [u1, u2] = u;
    let [v1, v2] = v;
    HeegaardDiagram::new(n, u1, u2, v1, v2)
}

fn parse_id(tok: &str, n: usize) -> Option<u32> {
    let x: u32 = tok.parse().ok()?;
    (x >= 1 && x as usize <= n).then_some(x)
}
