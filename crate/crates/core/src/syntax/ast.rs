use std::collections::BTreeMap;

use crate::diag::Span;
use crate::types::{Const, Type};

/// Size expressions appearing in types and loop bounds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SizeExpr {
    Lit(u64),
    Var(String),
    Bin(SizeOp, Box<SizeExpr>, Box<SizeExpr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SizeOp {
    Add,
    Sub,
    Mul,
}

/// Size parameters bound to concrete naturals.
pub type SizeEnv = BTreeMap<String, u64>;

impl SizeExpr {
    pub fn eval(&self, sizes: &SizeEnv) -> Result<u64, String> {
        match self {
            SizeExpr::Lit(n) => Ok(*n),
            SizeExpr::Var(v) => sizes.get(v).copied().ok_or_else(|| format!("unbound size variable {v}")),
            SizeExpr::Bin(op, a, b) => {
                let (x, y) = (a.eval(sizes)?, b.eval(sizes)?);
                match op {
                    SizeOp::Add => x.checked_add(y).ok_or_else(|| format!("size `{self}` overflows")),
                    SizeOp::Mul => x.checked_mul(y).ok_or_else(|| format!("size `{self}` overflows")),
                    SizeOp::Sub => x.checked_sub(y).ok_or_else(|| format!("size `{self}` is negative ({x} - {y})")),
                }
            }
        }
    }

    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            SizeExpr::Lit(_) => {}
            SizeExpr::Var(v) => out.push(v.clone()),
            SizeExpr::Bin(_, a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }
}

/// Surface types; sizes stay symbolic until checking.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SType {
    Flt,
    Fin(SizeExpr),
    Array(SizeExpr, Box<SType>),
    Arrow(Box<SType>, Box<SType>),
    Prod(Box<SType>, Box<SType>),
}

impl SType {
    pub fn eval(&self, sizes: &SizeEnv) -> Result<Type, String> {
        Ok(match self {
            SType::Flt => Type::Flt,
            SType::Fin(n) => Type::Fin(n.eval(sizes)?),
            SType::Array(n, t) => Type::array(n.eval(sizes)?, t.eval(sizes)?),
            SType::Arrow(a, b) => Type::arrow(a.eval(sizes)?, b.eval(sizes)?),
            SType::Prod(a, b) => Type::prod(a.eval(sizes)?, b.eval(sizes)?),
        })
    }

    pub fn from_type(t: &Type) -> SType {
        match t {
            Type::Flt => SType::Flt,
            Type::Fin(n) => SType::Fin(SizeExpr::Lit(*n)),
            Type::Array(n, t) => SType::Array(SizeExpr::Lit(*n), Box::new(SType::from_type(t))),
            Type::Arrow(a, b) => SType::Arrow(Box::new(SType::from_type(a)), Box::new(SType::from_type(b))),
            Type::Prod(a, b) => SType::Prod(Box::new(SType::from_type(a)), Box::new(SType::from_type(b))),
        }
    }

    pub fn size_vars(&self, out: &mut Vec<String>) {
        match self {
            SType::Flt => {}
            SType::Fin(n) => n.vars(out),
            SType::Array(n, t) => {
                n.vars(out);
                t.size_vars(out);
            }
            SType::Arrow(a, b) | SType::Prod(a, b) => {
                a.size_vars(out);
                b.size_vars(out);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    pub fn constant(self) -> Const {
        match self {
            BinOp::Add => Const::Add,
            BinOp::Sub => Const::Sub,
            BinOp::Mul => Const::Mul,
            BinOp::Div => Const::Div,
        }
    }
}

/// Surface expression. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Nat(u64),
    Float(f64),
    Var(String),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// `head a b`: builtin or curried application by juxtaposition.
    Juxt(Box<Expr>, Vec<Expr>),
    /// `f(a, b)`: call syntax.
    Call(Box<Expr>, Vec<Expr>),
    /// `a[i]` or `a[i, j]`.
    Index(Box<Expr>, Vec<Expr>),
    /// `e.1` / `e.2`.
    Proj(Box<Expr>, u8),
    Pair(Box<Expr>, Box<Expr>),
    Let {
        name: String,
        ann: Option<SType>,
        bound: Box<Expr>,
        body: Box<Expr>,
    },
    Fun {
        binders: Vec<(String, SType)>,
        body: Box<Expr>,
    },
    For {
        binders: Vec<(String, Option<SizeExpr>)>,
        body: Box<Expr>,
    },
    Sum {
        binders: Vec<(String, SizeExpr)>,
        body: Box<Expr>,
    },
    If {
        cond: Box<Expr>,
        then: Box<Expr>,
        els: Box<Expr>,
    },
}

#[derive(Clone, Debug)]
pub struct Param {
    pub name: String,
    pub ty: SType,
    pub span: Span,
}

impl PartialEq for Param {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.ty == other.ty
    }
}

#[derive(Clone, Debug)]
pub struct Def {
    pub name: String,
    pub params: Vec<Param>,
    pub ret: Option<SType>,
    pub body: Expr,
    pub span: Span,
}

impl PartialEq for Def {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.params == other.params && self.ret == other.ret && self.body == other.body
    }
}

#[derive(Clone, Debug)]
pub struct SizeDecl {
    pub name: String,
    pub default: Option<u64>,
    pub span: Span,
}

impl PartialEq for SizeDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.default == other.default
    }
}

/// A parsed source file: size parameters and definitions in order.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SurfaceProgram {
    pub sizes: Vec<SizeDecl>,
    pub defs: Vec<Def>,
}

impl SurfaceProgram {
    pub fn def(&self, name: &str) -> Option<&Def> {
        self.defs.iter().find(|d| d.name == name)
    }
}

/// Desugared core term: six forms only.
#[derive(Clone, Debug)]
pub struct CoreTerm {
    pub kind: CoreKind,
    pub span: Span,
}

impl PartialEq for CoreTerm {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CoreKind {
    Var(String),
    ConstApp(Const, Vec<CoreTerm>),
    Fun(String, SType, Box<CoreTerm>),
    /// A missing bound is only legal where the array type is known.
    For(String, Option<SizeExpr>, Box<CoreTerm>),
    Ite(Box<CoreTerm>, Box<CoreTerm>, Box<CoreTerm>),
    Let(String, Option<SType>, Box<CoreTerm>, Box<CoreTerm>),
}

impl CoreTerm {
    pub fn new(kind: CoreKind, span: Span) -> Self {
        CoreTerm { kind, span }
    }

    pub fn is_nat_literal(&self) -> bool {
        matches!(&self.kind, CoreKind::ConstApp(Const::Nat(_), args) if args.is_empty())
    }
}
