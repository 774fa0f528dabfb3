//! Line/column diagnostics shared by the text formats.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagCode {
    Syntax,
    UnknownLetter,
    UnknownState,
    MissingTransition,
    DuplicateState,
    DuplicateTransition,
    DuplicateDeclaration,
    MissingDeclaration,
    BadProbability,
    OutOfRange,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::Syntax => "syntax",
            DiagCode::UnknownLetter => "unknown-letter",
            DiagCode::UnknownState => "unknown-state",
            DiagCode::MissingTransition => "missing-transition",
            DiagCode::DuplicateState => "duplicate-state",
            DiagCode::DuplicateTransition => "duplicate-transition",
            DiagCode::DuplicateDeclaration => "duplicate-declaration",
            DiagCode::MissingDeclaration => "missing-declaration",
            DiagCode::BadProbability => "bad-probability",
            DiagCode::OutOfRange => "out-of-range",
        }
    }
}

/// One problem in a text input. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub code: DiagCode,
    pub message: String,
}

impl Diagnostic {
    pub fn new(line: usize, column: usize, code: DiagCode, message: impl Into<String>) -> Self {
        Diagnostic { line, column, code, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: error[{}]: {}", self.line, self.column, self.code.as_str(), self.message)
    }
}

/// Splits a line into whitespace-separated tokens with their 1-based columns,
/// dropping anything after `#`.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let content = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in content.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &content[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &content[s..]));
    }
    out
}
