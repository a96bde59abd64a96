//! Line-oriented graph files.
//!
//! ```text
//! # free monoid on one letter
//! alphabet a
//! start q
//! vertex q
//! edge q q a
//! ```
//!
//! `#` starts a comment, blank lines are ignored. At most one `alphabet` and
//! one `start` line; `alphabet` must come before any `edge`, and edge
//! endpoints must already be declared by `vertex` lines.

use std::fmt::Write as _;

use markov_growth::graph::{is_valid_name, Arc, LabelledGraph};

use crate::ParseError;

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn check_name(line: usize, what: &str, name: &str) -> Result<(), ParseError> {
    if is_valid_name(name) {
        Ok(())
    } else {
        Err(ParseError::at(line, format!("invalid {what} name '{name}'")))
    }
}

pub fn parse_graph(text: &str) -> Result<LabelledGraph, ParseError> {
    let mut alphabet: Option<(usize, Vec<String>)> = None;
    let mut start: Option<(usize, String)> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arcs: Vec<Arc> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        let Some((&keyword, args)) = tokens.split_first() else {
            continue;
        };
        match keyword {
            "alphabet" => {
                if let Some((first, _)) = alphabet {
                    return Err(ParseError::at(
                        line,
                        format!("second alphabet declaration (first on line {first})"),
                    ));
                }
                let mut symbols: Vec<String> = Vec::with_capacity(args.len());
                for &s in args {
                    check_name(line, "symbol", s)?;
                    if symbols.iter().any(|t| t == s) {
                        return Err(ParseError::at(line, format!("duplicate symbol '{s}'")));
                    }
                    symbols.push(s.to_string());
                }
                alphabet = Some((line, symbols));
            }
            "start" => {
                if let Some((first, _)) = start {
                    return Err(ParseError::at(
                        line,
                        format!("second start declaration (first on line {first})"),
                    ));
                }
                let [name] = args else {
                    return Err(ParseError::at(line, "expected 'start <vertex>'"));
                };
                start = Some((line, name.to_string()));
            }
            "vertex" => {
                let [name] = args else {
                    return Err(ParseError::at(line, "expected 'vertex <name>'"));
                };
                check_name(line, "vertex", name)?;
                if vertices.iter().any(|v| v == name) {
                    return Err(ParseError::at(line, format!("duplicate vertex '{name}'")));
                }
                vertices.push(name.to_string());
            }
            "edge" => {
                let [tail, head, label] = args else {
                    return Err(ParseError::at(line, "expected 'edge <tail> <head> <label>'"));
                };
                let Some((_, symbols)) = &alphabet else {
                    return Err(ParseError::at(line, "edge before the alphabet declaration"));
                };
                let find = |name: &str| {
                    vertices
                        .iter()
                        .position(|v| v == name)
                        .ok_or_else(|| ParseError::at(line, format!("unknown vertex '{name}'")))
                };
                let tail = find(tail)?;
                let head = find(head)?;
                let label = symbols
                    .iter()
                    .position(|s| s == label)
                    .ok_or_else(|| ParseError::at(line, format!("unknown symbol '{label}'")))?;
                arcs.push(Arc { tail, head, label });
            }
            other => {
                return Err(ParseError::at(line, format!("unknown directive '{other}'")));
            }
        }
    }

    if vertices.is_empty() {
        return Err(ParseError::whole("graph declares no vertices"));
    }
    let start = match start {
        Some((line, name)) => Some(
            vertices
                .iter()
                .position(|v| *v == name)
                .ok_or_else(|| ParseError::at(line, format!("unknown vertex '{name}'")))?,
        ),
        None => None,
    };
    let alphabet = alphabet.map(|(_, s)| s).unwrap_or_default();
    LabelledGraph::new(vertices, alphabet, arcs, start).map_err(|e| ParseError::whole(e.to_string()))
}

/// Canonical text: alphabet, start, vertices, edges, each in stored order.
pub fn serialize_graph(g: &LabelledGraph) -> String {
    let mut out = String::new();
    if !g.alphabet().is_empty() {
        writeln!(out, "alphabet {}", g.alphabet().join(" ")).unwrap();
    }
    if let Some(s) = g.start() {
        writeln!(out, "start {}", g.vertex_name(s)).unwrap();
    }
    for v in g.vertices() {
        writeln!(out, "vertex {v}").unwrap();
    }
    for a in g.arcs() {
        writeln!(
            out,
            "edge {} {} {}",
            g.vertex_name(a.tail),
            g.vertex_name(a.head),
            g.symbol_name(a.label)
        )
        .unwrap();
    }
    out
}
