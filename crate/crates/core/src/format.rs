//! Line-oriented text formats for instances and solutions.
//!
//! Instances:
//!
//! ```text
//! c optional comment
//! p pvc <n> <m>          | p dpvc <n> <m>
//! e <u> <v> <w>          | e <u> <v> <w_uv> <w_vu>
//! ```
//!
//! Solutions: `s <value> <support>` followed by `v <id> <power>` for every
//! vertex with positive power. Vertex ids are 1-indexed on the wire.

use std::fmt::Write as _;

use thiserror::Error;

use crate::instance::{DpvcInstance, Edge, InstanceError, PowerAssignment};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: InstanceError,
    },
    #[error("missing header line")]
    MissingHeader,
    #[error("header announced {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn number<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid {what} `{tok}`")))
}

fn vertex(tok: Option<&str>, line: usize, n: usize) -> Result<usize, ParseError> {
    let v: usize = number(tok, line, "vertex")?;
    if v == 0 || v > n {
        return Err(ParseError::Invalid {
            line,
            source: InstanceError::VertexOutOfRange {
                vertex: v.wrapping_sub(1),
                n,
            },
        });
    }
    Ok(v - 1)
}

/// Parses an instance, validating every edge as it is read.
pub fn parse_instance(text: &str) -> Result<DpvcInstance, ParseError> {
    let mut header: Option<(bool, usize, usize)> = None;
    let mut edges: Vec<Edge> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(syntax(line, "duplicate header"));
                }
                let directed = match toks.next() {
                    Some("pvc") => false,
                    Some("dpvc") => true,
                    other => {
                        return Err(syntax(
                            line,
                            format!("expected `pvc` or `dpvc`, found {other:?}"),
                        ))
                    }
                };
                let n = number(toks.next(), line, "vertex count")?;
                let m = number(toks.next(), line, "edge count")?;
                if toks.next().is_some() {
                    return Err(syntax(line, "trailing tokens in header"));
                }
                header = Some((directed, n, m));
            }
            "e" => {
                let (directed, n, _) = header.ok_or(ParseError::MissingHeader)?;
                let u = vertex(toks.next(), line, n)?;
                let v = vertex(toks.next(), line, n)?;
                let w_uv: u64 = number(toks.next(), line, "demand")?;
                let w_vu: u64 = if directed {
                    number(toks.next(), line, "demand")?
                } else {
                    w_uv
                };
                if toks.next().is_some() {
                    return Err(syntax(line, "trailing tokens in edge line"));
                }
                let invalid = |source| ParseError::Invalid { line, source };
                if u == v {
                    return Err(invalid(InstanceError::SelfLoop(u)));
                }
                if w_uv == 0 || w_vu == 0 {
                    return Err(invalid(InstanceError::ZeroDemand(u, v)));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(invalid(InstanceError::DuplicateEdge(u.min(v), u.max(v))));
                }
                edges.push(Edge::new(u, v, w_uv, w_vu));
            }
            other => return Err(syntax(line, format!("unknown line tag `{other}`"))),
        }
    }
    let (_, n, m) = header.ok_or(ParseError::MissingHeader)?;
    if edges.len() != m {
        return Err(ParseError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    DpvcInstance::new(n, edges).map_err(|source| ParseError::Invalid { line: 0, source })
}

/// Writes an instance; symmetric instances use the `pvc` form.
pub fn write_instance(inst: &DpvcInstance) -> String {
    let mut out = String::new();
    let sym = inst.is_symmetric();
    let kind = if sym { "pvc" } else { "dpvc" };
    writeln!(out, "p {kind} {} {}", inst.num_vertices(), inst.num_edges()).unwrap();
    for e in inst.edges() {
        if sym {
            writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.w_uv).unwrap();
        } else {
            writeln!(out, "e {} {} {} {}", e.u + 1, e.v + 1, e.w_uv, e.w_vu).unwrap();
        }
    }
    out
}

pub fn write_solution(a: &PowerAssignment) -> String {
    let mut out = String::new();
    writeln!(out, "s {} {}", a.value(), a.support()).unwrap();
    for (v, p) in a.positive() {
        writeln!(out, "v {} {}", v + 1, p).unwrap();
    }
    out
}

/// Parses a solution file. The `s` line is checked against the `v` lines.
pub fn parse_solution(text: &str, n: usize) -> Result<PowerAssignment, ParseError> {
    let mut a = PowerAssignment::zeros(n);
    let mut summary: Option<(u64, usize, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("s") => {
                let value = number(toks.next(), line, "value")?;
                let support = number(toks.next(), line, "support")?;
                summary = Some((value, support, line));
            }
            Some("v") => {
                let v = vertex(toks.next(), line, n)?;
                let p: u64 = number(toks.next(), line, "power")?;
                a.set(v, p);
            }
            Some(other) => return Err(syntax(line, format!("unknown line tag `{other}`"))),
        }
    }
    if let Some((value, support, line)) = summary {
        if value != a.value() || support != a.support() {
            return Err(syntax(
                line,
                format!(
                    "summary says value {value} support {support}, vertex lines give {} {}",
                    a.value(),
                    a.support()
                ),
            ));
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pvc_and_dpvc() {
        let pvc = parse_instance("p pvc 2 1\ne 1 2 5\n").unwrap();
        assert_eq!(pvc.num_vertices(), 2);
        assert_eq!(pvc.edges(), &[Edge::new(0, 1, 5, 5)]);
        assert!(pvc.is_symmetric());

        let dpvc = parse_instance("c comment\np dpvc 2 1\ne 1 2 5 1\n").unwrap();
        assert_eq!(dpvc.edges(), &[Edge::new(0, 1, 5, 1)]);
        assert!(!dpvc.is_symmetric());
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_instance("p pvc 2 1\ne 1 1 5\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Invalid {
                line: 2,
                source: InstanceError::SelfLoop(0)
            }
        );
        let err = parse_instance("p pvc 2 1\n\ne 1 2 0\n").unwrap_err();
        assert!(matches!(err, ParseError::Invalid { line: 3, .. }));
        let err = parse_instance("p pvc 3 2\ne 1 2 1\ne 2 1 1\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Invalid {
                line: 3,
                source: InstanceError::DuplicateEdge(0, 1)
            }
        ));
        let err = parse_instance("p pvc 2 1\ne 1 3 1\n").unwrap_err();
        assert!(matches!(err, ParseError::Invalid { line: 2, .. }));
        assert!(matches!(
            parse_instance("p pvc two 1\n"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
        assert_eq!(parse_instance("e 1 2 3\n"), Err(ParseError::MissingHeader));
        assert!(matches!(
            parse_instance("p pvc 2 2\ne 1 2 3\n"),
            Err(ParseError::EdgeCount { .. })
        ));
    }

    #[test]
    fn solution_round_trip() {
        let a = PowerAssignment::from_vec(vec![0, 3, 0, 2]);
        let text = write_solution(&a);
        assert_eq!(text, "s 5 2\nv 2 3\nv 4 2\n");
        assert_eq!(parse_solution(&text, 4).unwrap(), a);
        assert!(parse_solution("s 4 2\nv 2 3\nv 4 2\n", 4).is_err());
    }
}
