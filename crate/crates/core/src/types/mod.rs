//! Types, constants, typed terms, and the type checker.

mod check;
mod sig;
mod term;
mod verify;

pub use check::{check, check_program, Checked, Ctx, TypeError};
pub use sig::{const_sig, SigError};
pub use term::{alpha_eq, forget, Term, TermKind};
pub use verify::{verify, VerifyError};

use std::fmt;
use std::hash::{Hash, Hasher};

/// Concrete (monomorphic) types. Sizes are plain naturals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Fin(u64),
    Flt,
    Prod(Box<Type>, Box<Type>),
    Arrow(Box<Type>, Box<Type>),
    Array(u64, Box<Type>),
}

impl Type {
    pub fn prod(a: Type, b: Type) -> Type {
        Type::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    pub fn array(n: u64, elem: Type) -> Type {
        Type::Array(n, Box::new(elem))
    }

    /// True for types without function components. Values of such types can
    /// be printed, parsed and compared.
    pub fn is_first_order(&self) -> bool {
        match self {
            Type::Fin(_) | Type::Flt => true,
            Type::Prod(a, b) => a.is_first_order() && b.is_first_order(),
            Type::Array(_, t) => t.is_first_order(),
            Type::Arrow(..) => false,
        }
    }

    /// Strips `params` leading arrows, returning the final codomain.
    pub fn result_after(&self, params: usize) -> &Type {
        let mut t = self;
        for _ in 0..params {
            match t {
                Type::Arrow(_, b) => t = b,
                _ => break,
            }
        }
        t
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            Type::Flt => write!(f, "flt"),
            Type::Fin(n) => write!(f, "fin {n}"),
            Type::Prod(a, b) => {
                write!(f, "(")?;
                a.fmt_prec(f, 2)?;
                write!(f, " × ")?;
                b.fmt_prec(f, 2)?;
                write!(f, ")")
            }
            Type::Array(n, t) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                write!(f, "{n} => ")?;
                t.fmt_prec(f, 1)?;
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Type::Arrow(a, b) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 1)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 0)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// An `f64` compared and hashed by bit pattern, so literals can key tables.
/// All NaNs are one value.
#[derive(Clone, Copy, Debug)]
pub struct Float(pub f64);

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits() || (self.0.is_nan() && other.0.is_nan())
    }
}

impl Eq for Float {}

impl Hash for Float {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let x = if self.0.is_nan() { f64::NAN } else { self.0 };
        x.to_bits().hash(state);
    }
}

/// Constants of the core language, including float intrinsics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Const {
    Nat(u64),
    Flt(Float),
    Add,
    Mul,
    Sub,
    Div,
    App,
    Get,
    Pair,
    Fst,
    Snd,
    Sum,
    Max,
    Log,
    Sqrt,
    Exp,
    NormCdf,
}

impl Const {
    pub fn flt(x: f64) -> Const {
        Const::Flt(Float(x))
    }

    pub fn arity(&self) -> usize {
        match self {
            Const::Nat(_) | Const::Flt(_) => 0,
            Const::Fst | Const::Snd | Const::Sum | Const::Log | Const::Sqrt | Const::Exp | Const::NormCdf => 1,
            Const::Add | Const::Mul | Const::Sub | Const::Div | Const::App | Const::Get | Const::Pair | Const::Max => 2,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Const::Nat(_) | Const::Flt(_))
    }

    pub fn is_arith(&self) -> bool {
        matches!(self, Const::Add | Const::Mul | Const::Sub | Const::Div)
    }

    /// Named builtins usable by juxtaposition or call syntax in source.
    pub fn builtin(name: &str) -> Option<Const> {
        Some(match name {
            "app" => Const::App,
            "get" => Const::Get,
            "pair" => Const::Pair,
            "fst" => Const::Fst,
            "snd" => Const::Snd,
            "sum" => Const::Sum,
            "max" => Const::Max,
            "log" => Const::Log,
            "sqrt" => Const::Sqrt,
            "exp" => Const::Exp,
            "normCdf" => Const::NormCdf,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Const::Nat(_) => "nat",
            Const::Flt(_) => "float",
            Const::Add => "+",
            Const::Mul => "*",
            Const::Sub => "-",
            Const::Div => "/",
            Const::App => "app",
            Const::Get => "get",
            Const::Pair => "pair",
            Const::Fst => "fst",
            Const::Snd => "snd",
            Const::Sum => "sum",
            Const::Max => "max",
            Const::Log => "log",
            Const::Sqrt => "sqrt",
            Const::Exp => "exp",
            Const::NormCdf => "normCdf",
        }
    }
}

/// Float literal text: six fixed decimals when that is exact, otherwise the
/// shortest representation that reads back to the same bits.
pub fn fmt_float_literal(x: f64) -> String {
    let fixed = format!("{x:.6}");
    match fixed.parse::<f64>() {
        Ok(y) if y.to_bits() == x.to_bits() => fixed,
        _ => format!("{x:?}"),
    }
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const::Nat(n) => write!(f, "{n}"),
            Const::Flt(x) => write!(f, "{}", fmt_float_literal(x.0)),
            other => write!(f, "{}", other.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_display_round_shapes() {
        let t = Type::array(2, Type::array(3, Type::Flt));
        assert_eq!(t.to_string(), "2 => 3 => flt");
        let t = Type::array(4, Type::prod(Type::Flt, Type::Flt));
        assert_eq!(t.to_string(), "4 => (flt × flt)");
        let t = Type::arrow(Type::arrow(Type::Flt, Type::Flt), Type::Fin(3));
        assert_eq!(t.to_string(), "(flt -> flt) -> fin 3");
        let t = Type::array(2, Type::arrow(Type::Flt, Type::Flt));
        assert_eq!(t.to_string(), "2 => (flt -> flt)");
    }

    #[test]
    fn float_literal_text() {
        assert_eq!(fmt_float_literal(1.5), "1.500000");
        assert_eq!(fmt_float_literal(0.0), "0.000000");
        assert_eq!(fmt_float_literal(0.1), "0.100000");
        assert_eq!(fmt_float_literal(1.0 / 3.0), "0.3333333333333333");
        assert_eq!(fmt_float_literal(f64::INFINITY), "inf");
    }

    #[test]
    fn float_keys_by_bits() {
        assert_ne!(Const::flt(0.0), Const::flt(-0.0));
        assert_eq!(Const::flt(f64::NAN), Const::flt(f64::NAN));
    }
}
