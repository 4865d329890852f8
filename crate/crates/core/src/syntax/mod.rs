//! Surface language: lexer, parser, pretty printer, and desugaring to core terms.

mod ast;
mod desugar;
pub mod lexer;
pub(crate) mod parser;
mod pretty;

pub use ast::*;
pub use desugar::{desugar, resolve_sizes, Desugared};
pub use parser::{parse_expr, parse_program, parse_type, SyntaxError};

/// True if every constant application in `t` has exactly its arity.
pub fn is_desugared(t: &CoreTerm) -> bool {
    match &t.kind {
        CoreKind::Var(_) => true,
        CoreKind::ConstApp(c, args) => args.len() == c.arity() && args.iter().all(is_desugared),
        CoreKind::Fun(_, _, b) => is_desugared(b),
        CoreKind::For(_, _, b) => is_desugared(b),
        CoreKind::Ite(c, a, b) => is_desugared(c) && is_desugared(a) && is_desugared(b),
        CoreKind::Let(_, _, a, b) => is_desugared(a) && is_desugared(b),
    }
}
