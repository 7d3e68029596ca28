//! Reading and writing networks as text.
//!
//! Two formats: a native JSON document (see [`native`]) and a subset of the
//! BIF interchange format (see [`bif`], grammar in `docs/bif-grammar.md`).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::ModelError;

pub mod bif;
pub mod native;

pub use bif::{parse_bif, parse_bif_with_warnings};
pub use native::{parse_native, write_native};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

/// A message tied to a 1-based line and column of the source text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseErrorKind {
    Syntax,
    /// Well-formed text describing an invalid network.
    Semantic,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{diagnostic}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub diagnostic: ParseDiagnostic,
    /// Set when the network itself was rejected.
    pub model: Option<ModelError>,
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, pos: Pos, message: impl Into<String>) -> Self {
        Self {
            kind,
            diagnostic: ParseDiagnostic {
                severity: Severity::Error,
                line: pos.line,
                column: pos.column,
                message: message.into(),
            },
            model: None,
        }
    }

    pub(crate) fn from_model(pos: Pos, err: ModelError) -> Self {
        let mut e = Self::new(ParseErrorKind::Semantic, pos, err.to_string());
        e.model = Some(err);
        e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub(crate) const START: Pos = Pos { line: 1, column: 1 };

    /// Position of byte offset `at` in `text`.
    pub(crate) fn of_offset(text: &str, at: usize) -> Pos {
        let before = &text[..at];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        Pos {
            line,
            column: before[line_start..].chars().count() + 1,
        }
    }
}

/// The variable a model error is about, if any.
pub(crate) fn model_error_variable(err: &ModelError) -> Option<&str> {
    use ModelError::*;
    match err {
        TooFewOutcomes { var, .. }
        | DuplicateOutcome { var, .. }
        | ParentOrder { var, .. }
        | DuplicateParent { var, .. }
        | ColumnCount { var, .. }
        | ColumnLength { var, .. }
        | InvalidProbability { var, .. }
        | NotNormalized { var, .. }
        | OutcomeOutOfRange { var, .. }
        | NotAncestral { var, .. } => Some(var),
        DuplicateVariable(var) | UnknownVariable(var) => Some(var),
        Empty | StateCountOverflow | DimensionMismatch { .. } | IndexOutOfRange { .. } => None,
    }
}
