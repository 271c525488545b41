//! Strict parsing of dialect documents and their embedded CSS.
//!
//! There is no browser-style error recovery: documents here are machine
//! generated, and malformed output should be rejected rather than repaired.
//! Errors carry the byte offset plus 1-based line and column.

mod css;
mod html;

pub use css::{parse_declarations, parse_selector, parse_stylesheet};
pub use html::parse_document;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unclosed <{tag}> at line {line}, column {column} (byte {offset})")]
    UnclosedTag {
        tag: String,
        offset: usize,
        line: usize,
        column: usize,
    },
    #[error("expected </{expected}> but found </{found}> at line {line}, column {column} (byte {offset})")]
    MismatchedTag {
        expected: String,
        found: String,
        offset: usize,
        line: usize,
        column: usize,
    },
    #[error("malformed attribute ({detail}) at line {line}, column {column} (byte {offset})")]
    MalformedAttribute {
        detail: String,
        offset: usize,
        line: usize,
        column: usize,
    },
    #[error("unbalanced braces in stylesheet at line {line}, column {column} (byte {offset})")]
    UnbalancedBraces {
        offset: usize,
        line: usize,
        column: usize,
    },
    #[error("invalid document structure ({detail}) at line {line}, column {column} (byte {offset})")]
    InvalidStructure {
        detail: String,
        offset: usize,
        line: usize,
        column: usize,
    },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::UnclosedTag { offset, .. }
            | ParseError::MismatchedTag { offset, .. }
            | ParseError::MalformedAttribute { offset, .. }
            | ParseError::UnbalancedBraces { offset, .. }
            | ParseError::InvalidStructure { offset, .. } => *offset,
        }
    }
}

/// 1-based (line, column) of a byte offset, counting columns in bytes.
pub(crate) fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let clamped = offset.min(src.len());
    let before = &src.as_bytes()[..clamped];
    let line = 1 + before.iter().filter(|&&b| b == b'\n').count();
    let col = 1 + before.iter().rev().take_while(|&&b| b != b'\n').count();
    (line, col)
}
