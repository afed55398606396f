//! The model-file language: lexer, parser, canonical printer and name
//! resolution into core objects.

pub mod ast;
pub mod build;
mod lexer;
pub mod parser;
pub mod printer;

use thiserror::Error;

pub use ast::{ModelFile, Span};
pub use build::{build_model, Config, Kind, Model, Overrides};
pub use parser::{parse_expr, parse_model};
pub use printer::{print_expr, print_model};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    UnknownName,
    Degree,
    Duplicate,
    Invalid,
}

impl ErrorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorKind::Syntax => "syntax",
            ErrorKind::UnknownName => "unknown-name",
            ErrorKind::Degree => "degree",
            ErrorKind::Duplicate => "duplicate",
            ErrorKind::Invalid => "invalid",
        }
    }
}

/// An error in a model file, with its 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(kind: ErrorKind, at: Span, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            line: at.line,
            col: at.col,
            message: message.into(),
        }
    }

    pub fn syntax(at: Span, message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Syntax, at, message)
    }
}
