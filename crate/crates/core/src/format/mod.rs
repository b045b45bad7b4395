//! Text formats: set files, mask files, and TSV interval exports.

mod lexer;
pub mod maskfile;
pub mod setfile;
pub mod tsv;

use std::fmt;

pub use maskfile::{parse_mask, parse_rational, print_mask, ParsedMask};
pub use setfile::{parse_set, print_set, print_stream};
pub use tsv::{parse_intervals, write_rows, write_set_intervals, write_table_intervals};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}
