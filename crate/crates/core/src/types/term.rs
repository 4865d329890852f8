use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use super::{Const, Type};
use crate::diag::Span;
use crate::syntax::{CoreKind, CoreTerm, SType};

/// A type-annotated core term. Every node carries its type; binders carry
/// their declared type or bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub kind: TermKind,
    pub ty: Type,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TermKind {
    Var(String),
    Const(Const, Vec<Rc<Term>>),
    Fun(String, Type, Rc<Term>),
    For(String, u64, Rc<Term>),
    Ite(Rc<Term>, Rc<Term>, Rc<Term>),
    Let(String, Rc<Term>, Rc<Term>),
}

impl Term {
    pub fn new(kind: TermKind, ty: Type) -> Rc<Term> {
        Rc::new(Term { kind, ty })
    }

    pub fn var(name: impl Into<String>, ty: Type) -> Rc<Term> {
        Term::new(TermKind::Var(name.into()), ty)
    }

    pub fn lit(c: Const, ty: Type) -> Rc<Term> {
        Term::new(TermKind::Const(c, Vec::new()), ty)
    }

    pub fn app(c: Const, args: Vec<Rc<Term>>, ty: Type) -> Rc<Term> {
        Term::new(TermKind::Const(c, args), ty)
    }

    /// The literal constant at this node, if it is a nullary literal.
    pub fn as_literal(&self) -> Option<Const> {
        match &self.kind {
            TermKind::Const(c, args) if args.is_empty() && c.is_literal() => Some(*c),
            _ => None,
        }
    }

    /// Number of nodes, for reporting.
    pub fn size(&self) -> usize {
        1 + match &self.kind {
            TermKind::Var(_) => 0,
            TermKind::Const(_, args) => args.iter().map(|a| a.size()).sum(),
            TermKind::Fun(_, _, b) | TermKind::For(_, _, b) => b.size(),
            TermKind::Ite(c, a, b) => c.size() + a.size() + b.size(),
            TermKind::Let(_, a, b) => a.size() + b.size(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // 0: binder bodies, 1: additive, 2: multiplicative, 3: application, 4: atom
        let open = |f: &mut fmt::Formatter<'_>, need: u8| -> fmt::Result {
            if prec > need {
                write!(f, "(")
            } else {
                Ok(())
            }
        };
        let close = |f: &mut fmt::Formatter<'_>, need: u8| -> fmt::Result {
            if prec > need {
                write!(f, ")")
            } else {
                Ok(())
            }
        };
        match &self.kind {
            TermKind::Var(x) => write!(f, "{x}"),
            TermKind::Const(c, args) if args.is_empty() => write!(f, "{c}"),
            TermKind::Const(c, args) => match (c, args.as_slice()) {
                (Const::Add | Const::Sub, [a, b]) => {
                    open(f, 1)?;
                    a.fmt_prec(f, 1)?;
                    write!(f, " {} ", c.name())?;
                    b.fmt_prec(f, 2)?;
                    close(f, 1)
                }
                (Const::Mul | Const::Div, [a, b]) => {
                    open(f, 2)?;
                    a.fmt_prec(f, 2)?;
                    write!(f, " {} ", c.name())?;
                    b.fmt_prec(f, 3)?;
                    close(f, 2)
                }
                (Const::Get, [a, i]) => {
                    a.fmt_prec(f, 4)?;
                    write!(f, "[")?;
                    i.fmt_prec(f, 0)?;
                    write!(f, "]")
                }
                (Const::Pair, [a, b]) => {
                    write!(f, "(")?;
                    a.fmt_prec(f, 0)?;
                    write!(f, ", ")?;
                    b.fmt_prec(f, 0)?;
                    write!(f, ")")
                }
                (Const::App, [g, a]) => {
                    open(f, 3)?;
                    g.fmt_prec(f, 3)?;
                    write!(f, " ")?;
                    a.fmt_prec(f, 4)?;
                    close(f, 3)
                }
                _ => {
                    open(f, 3)?;
                    write!(f, "{}", c.name())?;
                    for a in args {
                        write!(f, " ")?;
                        a.fmt_prec(f, 4)?;
                    }
                    close(f, 3)
                }
            },
            TermKind::Fun(x, t, body) => {
                open(f, 0)?;
                write!(f, "fun {x}: {t}. ")?;
                body.fmt_prec(f, 0)?;
                close(f, 0)
            }
            TermKind::For(i, n, body) => {
                open(f, 0)?;
                write!(f, "for {i}:{n}. ")?;
                body.fmt_prec(f, 0)?;
                close(f, 0)
            }
            TermKind::Ite(c, a, b) => {
                open(f, 0)?;
                write!(f, "if ")?;
                c.fmt_prec(f, 0)?;
                write!(f, " then ")?;
                a.fmt_prec(f, 0)?;
                write!(f, " else ")?;
                b.fmt_prec(f, 0)?;
                close(f, 0)
            }
            TermKind::Let(x, a, b) => {
                open(f, 0)?;
                write!(f, "let {x} := ")?;
                a.fmt_prec(f, 1)?;
                write!(f, "; ")?;
                b.fmt_prec(f, 0)?;
                close(f, 0)
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

fn type_to_stype(t: &Type) -> SType {
    SType::from_type(t)
}

/// Drops node annotations, producing a core term the checker can re-check.
/// Binder types, loop bounds and `let` types are kept.
pub fn forget(t: &Term) -> CoreTerm {
    let kind = match &t.kind {
        TermKind::Var(x) => CoreKind::Var(x.clone()),
        TermKind::Const(c, args) => CoreKind::ConstApp(*c, args.iter().map(|a| forget(a)).collect()),
        TermKind::Fun(x, ty, body) => CoreKind::Fun(x.clone(), type_to_stype(ty), Box::new(forget(body))),
        TermKind::For(i, n, body) => {
            CoreKind::For(i.clone(), Some(crate::syntax::SizeExpr::Lit(*n)), Box::new(forget(body)))
        }
        TermKind::Ite(c, a, b) => CoreKind::Ite(Box::new(forget(c)), Box::new(forget(a)), Box::new(forget(b))),
        TermKind::Let(x, a, b) => {
            CoreKind::Let(x.clone(), Some(type_to_stype(&a.ty)), Box::new(forget(a)), Box::new(forget(b)))
        }
    };
    CoreTerm { kind, span: Span::default() }
}

/// Structural equality up to consistent renaming of bound names.
/// Free names must match exactly.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go(
        a: &Term,
        b: &Term,
        left: &mut HashMap<String, usize>,
        right: &mut HashMap<String, usize>,
        depth: usize,
    ) -> bool {
        if a.ty != b.ty {
            return false;
        }
        let bind = |m: &mut HashMap<String, usize>, x: &str, d: usize| m.insert(x.to_string(), d);
        let restore = |m: &mut HashMap<String, usize>, x: &str, old: Option<usize>| match old {
            Some(v) => {
                m.insert(x.to_string(), v);
            }
            None => {
                m.remove(x);
            }
        };
        match (&a.kind, &b.kind) {
            (TermKind::Var(x), TermKind::Var(y)) => match (left.get(x), right.get(y)) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            },
            (TermKind::Const(c, xs), TermKind::Const(d, ys)) => {
                c == d && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| go(x, y, left, right, depth))
            }
            (TermKind::Fun(x, t, p), TermKind::Fun(y, u, q)) if t == u => {
                let (ox, oy) = (bind(left, x, depth), bind(right, y, depth));
                let r = go(p, q, left, right, depth + 1);
                restore(left, x, ox);
                restore(right, y, oy);
                r
            }
            (TermKind::For(x, n, p), TermKind::For(y, m, q)) if n == m => {
                let (ox, oy) = (bind(left, x, depth), bind(right, y, depth));
                let r = go(p, q, left, right, depth + 1);
                restore(left, x, ox);
                restore(right, y, oy);
                r
            }
            (TermKind::Ite(c1, a1, b1), TermKind::Ite(c2, a2, b2)) => {
                go(c1, c2, left, right, depth) && go(a1, a2, left, right, depth) && go(b1, b2, left, right, depth)
            }
            (TermKind::Let(x, e1, p), TermKind::Let(y, e2, q)) => {
                if !go(e1, e2, left, right, depth) {
                    return false;
                }
                let (ox, oy) = (bind(left, x, depth), bind(right, y, depth));
                let r = go(p, q, left, right, depth + 1);
                restore(left, x, ox);
                restore(right, y, oy);
                r
            }
            _ => false,
        }
    }
    go(a, b, &mut HashMap::new(), &mut HashMap::new(), 0)
}
