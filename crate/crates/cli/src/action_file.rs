//! Action files.
//!
//! ```text
//! points x y z
//! weights 1/2 1/4 1/4     # optional, uniform by default
//! map a x z y             # images of x, y, z under a
//! ```
//!
//! There must be exactly one `map` line per symbol of the graph alphabet.

use std::fmt::Write as _;

use markov_growth::action::{FiniteAction, FiniteSpace};
use markov_growth::graph::LabelledGraph;
use num_rational::BigRational;

use crate::graph_file::strip_comment;
use crate::ParseError;

pub fn parse_action(text: &str, g: &LabelledGraph) -> Result<FiniteAction, ParseError> {
    let mut points: Option<Vec<String>> = None;
    let mut weights: Option<(usize, Vec<BigRational>)> = None;
    let mut maps: Vec<(usize, String, Vec<String>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        let Some((&keyword, args)) = tokens.split_first() else {
            continue;
        };
        match keyword {
            "points" => {
                if points.is_some() {
                    return Err(ParseError::at(line, "second points declaration"));
                }
                if args.is_empty() {
                    return Err(ParseError::at(line, "no points listed"));
                }
                points = Some(args.iter().map(|s| s.to_string()).collect());
            }
            "weights" => {
                if weights.is_some() {
                    return Err(ParseError::at(line, "second weights declaration"));
                }
                let parsed = args
                    .iter()
                    .map(|w| {
                        w.parse::<BigRational>()
                            .map_err(|_| ParseError::at(line, format!("invalid weight '{w}'")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                weights = Some((line, parsed));
            }
            "map" => {
                let Some((&symbol, images)) = args.split_first() else {
                    return Err(ParseError::at(line, "expected 'map <symbol> <images...>'"));
                };
                if maps.iter().any(|(_, s, _)| s == symbol) {
                    return Err(ParseError::at(line, format!("second map for '{symbol}'")));
                }
                maps.push((line, symbol.to_string(), images.iter().map(|s| s.to_string()).collect()));
            }
            other => return Err(ParseError::at(line, format!("unknown directive '{other}'"))),
        }
    }

    let points = points.ok_or_else(|| ParseError::whole("missing points declaration"))?;
    let space = match weights {
        Some((line, w)) => FiniteSpace::new(points, w).map_err(|e| ParseError::at(line, e.to_string()))?,
        None => FiniteSpace::uniform(points).map_err(|e| ParseError::whole(e.to_string()))?,
    };

    for (line, symbol, _) in &maps {
        if g.symbol_index(symbol).is_none() {
            return Err(ParseError::at(
                *line,
                format!("symbol '{symbol}' is not in the graph alphabet"),
            ));
        }
    }
    let mut symbols = Vec::with_capacity(g.alphabet().len());
    let mut images = Vec::with_capacity(g.alphabet().len());
    for s in g.alphabet() {
        let (line, _, imgs) = maps
            .iter()
            .find(|(_, t, _)| t == s)
            .ok_or_else(|| ParseError::whole(format!("no map for symbol '{s}'")))?;
        let map = imgs
            .iter()
            .map(|p| {
                space
                    .point_index(p)
                    .ok_or_else(|| ParseError::at(*line, format!("unknown point '{p}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        symbols.push(s.clone());
        images.push((line, map));
    }
    let lines: Vec<usize> = images.iter().map(|(l, _)| **l).collect();
    let maps: Vec<Vec<usize>> = images.into_iter().map(|(_, m)| m).collect();
    FiniteAction::new(space, symbols.clone(), maps).map_err(|e| {
        let line = match &e {
            markov_growth::action::ActionError::NotBijective { symbol, .. }
            | markov_growth::action::ActionError::MeasureNotPreserved { symbol, .. }
            | markov_growth::action::ActionError::MapLength { symbol, .. } => {
                symbols.iter().position(|s| s == symbol).map(|i| lines[i])
            }
            _ => None,
        };
        ParseError {
            line,
            message: e.to_string(),
        }
    })
}

pub fn serialize_action(act: &FiniteAction) -> String {
    let space = act.space();
    let mut out = String::new();
    writeln!(out, "points {}", space.points().join(" ")).unwrap();
    if !space.is_uniform() {
        let ws: Vec<String> = (0..space.len()).map(|i| space.weight(i).to_string()).collect();
        writeln!(out, "weights {}", ws.join(" ")).unwrap();
    }
    for s in act.symbols() {
        let map = act.map(s).expect("listed symbol");
        let imgs: Vec<&str> = map.iter().map(|&y| space.points()[y].as_str()).collect();
        writeln!(out, "map {s} {}", imgs.join(" ")).unwrap();
    }
    out
}
