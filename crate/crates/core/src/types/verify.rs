//! Re-derives every annotation of a typed term from its children.
//!
//! Unlike re-running the checker on a forgotten term, this accepts literals
//! annotated at any sufficiently large `fin` bound, which transformed terms
//! legitimately contain.

use thiserror::Error;

use super::{const_sig, Const, Term, TermKind, Type};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("ill-typed term `{term}`: {message}")]
pub struct VerifyError {
    pub term: String,
    pub message: String,
}

/// Checks that every node's type follows from its children and `free`.
pub fn verify(t: &Term, free: &[(String, Type)]) -> Result<(), VerifyError> {
    let mut ctx: Vec<(String, Type)> = free.to_vec();
    go(t, &mut ctx)
}

fn fail(t: &Term, message: String) -> Result<(), VerifyError> {
    let mut term = t.to_string();
    if term.len() > 120 {
        term.truncate(117);
        term.push_str("...");
    }
    Err(VerifyError { term, message })
}

fn go(t: &Term, ctx: &mut Vec<(String, Type)>) -> Result<(), VerifyError> {
    match &t.kind {
        TermKind::Var(x) => match ctx.iter().rev().find(|(y, _)| y == x) {
            Some((_, ty)) if *ty == t.ty => Ok(()),
            Some((_, ty)) => fail(t, format!("`{x}` is bound at `{ty}` but annotated `{}`", t.ty)),
            None => fail(t, format!("unbound variable `{x}`")),
        },
        TermKind::Const(Const::Nat(n), args) if args.is_empty() => match t.ty {
            Type::Fin(m) if *n < m => Ok(()),
            _ => fail(t, format!("literal {n} annotated `{}`", t.ty)),
        },
        TermKind::Const(c, args) => {
            for a in args {
                go(a, ctx)?;
            }
            let tys: Vec<Type> = args.iter().map(|a| a.ty.clone()).collect();
            match const_sig(c, &tys) {
                Ok(ty) if ty == t.ty => Ok(()),
                Ok(ty) => fail(t, format!("signature gives `{ty}` but annotated `{}`", t.ty)),
                Err(e) => fail(t, e.to_string()),
            }
        }
        TermKind::Fun(x, a, body) => {
            ctx.push((x.clone(), a.clone()));
            let r = go(body, ctx);
            ctx.pop();
            r?;
            if t.ty != Type::arrow(a.clone(), body.ty.clone()) {
                return fail(t, format!("function annotated `{}`", t.ty));
            }
            Ok(())
        }
        TermKind::For(i, n, body) => {
            ctx.push((i.clone(), Type::Fin(*n)));
            let r = go(body, ctx);
            ctx.pop();
            r?;
            if t.ty != Type::array(*n, body.ty.clone()) {
                return fail(t, format!("loop annotated `{}`", t.ty));
            }
            Ok(())
        }
        TermKind::Ite(c, a, b) => {
            go(c, ctx)?;
            go(a, ctx)?;
            go(b, ctx)?;
            if c.ty != Type::Fin(2) {
                return fail(t, format!("condition has type `{}`", c.ty));
            }
            if a.ty != t.ty || b.ty != t.ty {
                return fail(t, format!("branches `{}` and `{}` under `{}`", a.ty, b.ty, t.ty));
            }
            Ok(())
        }
        TermKind::Let(x, a, b) => {
            go(a, ctx)?;
            ctx.push((x.clone(), a.ty.clone()));
            let r = go(b, ctx);
            ctx.pop();
            r?;
            if b.ty != t.ty {
                return fail(t, format!("let body has type `{}` under `{}`", b.ty, t.ty));
            }
            Ok(())
        }
    }
}
