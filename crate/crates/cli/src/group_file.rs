//! Multiplication tables of finite groups.
//!
//! ```text
//! e, r, s
//! e, r, s      # row of e: e*e, e*r, e*s
//! r, s, e
//! s, e, r
//! generators: r
//! ```
//!
//! Entries are separated by commas and/or whitespace.

use std::fmt::Write as _;

use markov_growth::codings::FiniteGroupTable;

use crate::graph_file::strip_comment;
use crate::ParseError;

fn fields(line: &str) -> Vec<&str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect()
}

pub fn parse_group_table(text: &str) -> Result<FiniteGroupTable, ParseError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let Some(((head_line, head), rest)) = lines.split_first() else {
        return Err(ParseError::whole("empty group table"));
    };
    let Some(((gen_line, gen), rows)) = rest.split_last() else {
        return Err(ParseError::whole("missing 'generators:' line"));
    };
    let elements: Vec<String> = fields(head).into_iter().map(String::from).collect();
    let index = |line: usize, name: &str| {
        elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| ParseError::at(line, format!("unknown element '{name}'")))
    };
    let Some(gen_list) = gen.strip_prefix("generators:") else {
        return Err(ParseError::at(*gen_line, "last line must be 'generators: <names>'"));
    };
    let generators = fields(gen_list)
        .into_iter()
        .map(|g| index(*gen_line, g))
        .collect::<Result<Vec<_>, _>>()?;
    if rows.len() != elements.len() {
        return Err(ParseError::at(
            *head_line,
            format!("{} elements but {} table rows", elements.len(), rows.len()),
        ));
    }
    let mut table = Vec::with_capacity(rows.len());
    for (line, row) in rows {
        let entries = fields(row);
        if entries.len() != elements.len() {
            return Err(ParseError::at(
                *line,
                format!("row has {} entries, expected {}", entries.len(), elements.len()),
            ));
        }
        table.push(
            entries
                .into_iter()
                .map(|e| index(*line, e))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    FiniteGroupTable::new(elements, table, generators).map_err(|e| ParseError::whole(e.to_string()))
}

pub fn serialize_group_table(t: &FiniteGroupTable) -> String {
    let names = t.elements();
    let mut out = String::new();
    writeln!(out, "{}", names.join(", ")).unwrap();
    for row in t.table() {
        let r: Vec<&str> = row.iter().map(|&x| names[x].as_str()).collect();
        writeln!(out, "{}", r.join(", ")).unwrap();
    }
    writeln!(out, "generators: {}", t.generator_names().join(", ")).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_round_trip() {
        let z6 = FiniteGroupTable::cyclic(6).unwrap();
        let text = serialize_group_table(&z6);
        assert!(text.ends_with("generators: 1, 5\n"));
        assert_eq!(parse_group_table(&text).unwrap(), z6);
    }

    #[test]
    fn rejects_broken_tables() {
        let err = parse_group_table("e, r\ne, r\nr, e\ngenerators: q\n").unwrap_err();
        assert!(err.message.contains("'q'"));
        let err = parse_group_table("e, r\ne, r\ngenerators: r\n").unwrap_err();
        assert!(err.message.contains("table rows"));
        let err = parse_group_table("e r\ne r\nr r\ngenerators: r\n").unwrap_err();
        assert!(err.message.contains("inverse"), "{err}");
    }
}
