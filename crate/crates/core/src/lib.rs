//! Compiler for a small total array language.
//!
//! Source programs are parsed, type-checked, normalized by evaluation,
//! lowered to a flat indexed administrative normal form, and optimized.
//! Interpreters for both the term language and the flat form let every
//! stage be checked against the original program.

pub mod ainf;
pub mod cli;
pub mod diag;
pub mod eval;
pub mod lower;
pub mod nbe;
pub mod opt;
pub mod pipeline;
pub mod syntax;
pub mod types;

pub use diag::{Diagnostic, Span};
