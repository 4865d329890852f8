//! Surface pretty printer. Output re-parses to the same program.

use std::fmt;

use super::ast::*;

fn size_prec(s: &SizeExpr, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
    match s {
        SizeExpr::Lit(n) => write!(f, "{n}"),
        SizeExpr::Var(v) => write!(f, "{v}"),
        SizeExpr::Bin(op, a, b) => {
            let (level, sym) = match op {
                SizeOp::Add => (1, "+"),
                SizeOp::Sub => (1, "-"),
                SizeOp::Mul => (2, "*"),
            };
            if prec > level {
                write!(f, "(")?;
            }
            size_prec(a, f, level)?;
            write!(f, " {sym} ")?;
            size_prec(b, f, level + 1)?;
            if prec > level {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for SizeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        size_prec(self, f, 0)
    }
}

fn is_size_atom(s: &SizeExpr) -> bool {
    !matches!(s, SizeExpr::Bin(..))
}

fn stype_prec(t: &SType, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
    // 0: arrow, 1: array, 2: product operand
    match t {
        SType::Flt => write!(f, "flt"),
        SType::Fin(n) if is_size_atom(n) => write!(f, "fin {n}"),
        SType::Fin(n) => write!(f, "fin ({n})"),
        SType::Prod(a, b) => {
            write!(f, "(")?;
            stype_prec(a, f, 0)?;
            write!(f, ", ")?;
            stype_prec(b, f, 0)?;
            write!(f, ")")
        }
        SType::Array(n, e) => {
            if prec > 1 {
                write!(f, "(")?;
            }
            if is_size_atom(n) {
                write!(f, "{n} => ")?;
            } else {
                write!(f, "({n}) => ")?;
            }
            stype_prec(e, f, 1)?;
            if prec > 1 {
                write!(f, ")")?;
            }
            Ok(())
        }
        SType::Arrow(a, b) => {
            if prec > 0 {
                write!(f, "(")?;
            }
            stype_prec(a, f, 1)?;
            write!(f, " -> ")?;
            stype_prec(b, f, 0)?;
            if prec > 0 {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for SType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        stype_prec(self, f, 0)
    }
}

fn comma_sep<T>(
    f: &mut fmt::Formatter<'_>,
    items: &[T],
    mut each: impl FnMut(&mut fmt::Formatter<'_>, &T) -> fmt::Result,
) -> fmt::Result {
    for (k, x) in items.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        each(f, x)?;
    }
    Ok(())
}

fn expr_prec(e: &Expr, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
    // 0: binder forms, 1: additive, 2: multiplicative, 3: juxtaposition, 4: postfix/atom
    let level = match &e.kind {
        ExprKind::Let { .. }
        | ExprKind::Fun { .. }
        | ExprKind::For { .. }
        | ExprKind::Sum { .. }
        | ExprKind::If { .. } => 0,
        ExprKind::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        ExprKind::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        ExprKind::Juxt(..) => 3,
        _ => 4,
    };
    let paren = prec > level;
    if paren {
        write!(f, "(")?;
    }
    match &e.kind {
        ExprKind::Nat(n) => write!(f, "{n}")?,
        ExprKind::Float(x) => write!(f, "{x:?}")?,
        ExprKind::Var(x) => write!(f, "{x}")?,
        ExprKind::Binary(op, a, b) => {
            expr_prec(a, f, level)?;
            write!(f, " {} ", op.symbol())?;
            expr_prec(b, f, level + 1)?;
        }
        ExprKind::Juxt(h, args) => {
            expr_prec(h, f, 4)?;
            for a in args {
                write!(f, " ")?;
                expr_prec(a, f, 4)?;
            }
        }
        ExprKind::Call(h, args) => {
            expr_prec(h, f, 4)?;
            write!(f, "(")?;
            comma_sep(f, args, |f, a| expr_prec(a, f, 0))?;
            write!(f, ")")?;
        }
        ExprKind::Index(h, idx) => {
            expr_prec(h, f, 4)?;
            write!(f, "[")?;
            comma_sep(f, idx, |f, a| expr_prec(a, f, 0))?;
            write!(f, "]")?;
        }
        ExprKind::Proj(h, k) => {
            // `3.1` would lex as a float.
            if matches!(h.kind, ExprKind::Nat(_) | ExprKind::Float(_)) {
                write!(f, "(")?;
                expr_prec(h, f, 0)?;
                write!(f, ")")?;
            } else {
                expr_prec(h, f, 4)?;
            }
            write!(f, ".{k}")?;
        }
        ExprKind::Pair(a, b) => {
            write!(f, "(")?;
            expr_prec(a, f, 0)?;
            write!(f, ", ")?;
            expr_prec(b, f, 0)?;
            write!(f, ")")?;
        }
        ExprKind::Let { name, ann, bound, body } => {
            write!(f, "let {name}")?;
            if let Some(t) = ann {
                write!(f, ": {t}")?;
            }
            write!(f, " := ")?;
            expr_prec(bound, f, 0)?;
            write!(f, "; ")?;
            expr_prec(body, f, 0)?;
        }
        ExprKind::Fun { binders, body } => {
            write!(f, "fun ")?;
            comma_sep(f, binders, |f, (x, t)| write!(f, "{x}: {t}"))?;
            write!(f, ". ")?;
            expr_prec(body, f, 0)?;
        }
        ExprKind::For { binders, body } => {
            write!(f, "for ")?;
            comma_sep(f, binders, |f, (i, n)| match n {
                Some(n) => write!(f, "{i}:{n}"),
                None => write!(f, "{i}"),
            })?;
            write!(f, ". ")?;
            expr_prec(body, f, 0)?;
        }
        ExprKind::Sum { binders, body } => {
            write!(f, "sum ")?;
            comma_sep(f, binders, |f, (i, n)| write!(f, "{i}:{n}"))?;
            write!(f, ". ")?;
            expr_prec(body, f, 0)?;
        }
        ExprKind::If { cond, then, els } => {
            write!(f, "if ")?;
            expr_prec(cond, f, 0)?;
            write!(f, " then ")?;
            expr_prec(then, f, 0)?;
            write!(f, " else ")?;
            expr_prec(els, f, 0)?;
        }
    }
    if paren {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        expr_prec(self, f, 0)
    }
}

impl fmt::Display for Def {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        comma_sep(f, &self.params, |f, p| write!(f, "{}: {}", p.name, p.ty))?;
        write!(f, ")")?;
        if let Some(r) = &self.ret {
            write!(f, ": {r}")?;
        }
        write!(f, " :=\n  {}\n", self.body)
    }
}

impl fmt::Display for SurfaceProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sizes {
            match s.default {
                Some(d) => writeln!(f, "size {} = {d}", s.name)?,
                None => writeln!(f, "size {}", s.name)?,
            }
        }
        for (k, d) in self.defs.iter().enumerate() {
            if k > 0 || !self.sizes.is_empty() {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}
