//! Reference semantics: values, the term interpreter, value literals and a
//! random program generator.

mod gen;
mod interp;
mod literal;
pub mod ops;
mod value;

pub use gen::{gen_program, gen_typed_term, Gen, GenProgram};
pub use interp::{eval_term, eval_with_params, Interp};
pub use literal::{fmt_flt, parse_value, LiteralError};
pub use value::{values_agree, FunV, Value, REL_TOL};
