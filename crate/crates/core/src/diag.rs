//! Source positions and rendered diagnostics.

use std::fmt;

/// A 1-based line/column position in a source file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }

    /// True for spans synthesized by the compiler (no source position).
    pub fn is_dummy(&self) -> bool {
        self.line == 0
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A frontend error ready to be printed as `file:line:col: error: <msg>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        Diagnostic { span, message: message.into() }
    }

    pub fn render(&self, file: &str) -> String {
        if self.span.is_dummy() {
            format!("{file}: error: {}", self.message)
        } else {
            format!("{file}:{}: error: {}", self.span, self.message)
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.span.is_dummy() {
            write!(f, "error: {}", self.message)
        } else {
            write!(f, "{}: error: {}", self.span, self.message)
        }
    }
}

impl std::error::Error for Diagnostic {}
