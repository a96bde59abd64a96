//! File formats, CSV reports and the command implementations behind the
//! `markov-growth` binary.

pub mod action_file;
pub mod commands;
pub mod graph_file;
pub mod group_file;
pub mod report;

use std::fmt;

pub use action_file::{parse_action, serialize_action};
pub use commands::{run, Builtin, Command, Outcome, RunConfig};
pub use graph_file::{parse_graph, serialize_graph};
pub use group_file::{parse_group_table, serialize_group_table};

/// Input file error; `line` is 1-based when the problem is local to a line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn whole(message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Graph(#[from] markov_growth::GraphError),
    #[error(transparent)]
    Count(#[from] markov_growth::counting::CountError),
    #[error(transparent)]
    Regularity(#[from] markov_growth::regularity::RegularityError),
    #[error(transparent)]
    Action(#[from] markov_growth::action::ActionError),
    #[error(transparent)]
    Coding(#[from] markov_growth::codings::CodingError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }
}

pub(crate) fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

pub(crate) fn write_file(path: &str, contents: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}
