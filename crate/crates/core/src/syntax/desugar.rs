//! Surface programs to single core terms.

use std::collections::HashSet;

use super::ast::*;
use crate::diag::{Diagnostic, Span};
use crate::types::Const;

/// The entry definition of a program as one core term.
#[derive(Clone, Debug, PartialEq)]
pub struct Desugared {
    pub entry: String,
    /// Entry parameters, outermost first; `term` begins with one `fun` per parameter.
    pub params: Vec<(String, SType)>,
    /// Declared return type of the entry, if any.
    pub ret: Option<SType>,
    pub term: CoreTerm,
    pub sizes: SizeEnv,
}

impl Desugared {
    /// Full type of `term` when the entry declares its return type.
    pub fn declared_type(&self) -> Option<SType> {
        let ret = self.ret.clone()?;
        Some(curried(self.params.iter().map(|(_, t)| t.clone()), ret))
    }
}

fn curried(params: impl DoubleEndedIterator<Item = SType>, ret: SType) -> SType {
    params.rev().fold(ret, |acc, p| SType::Arrow(Box::new(p), Box::new(acc)))
}

/// Binds every declared size from `given` or its default.
pub fn resolve_sizes(p: &SurfaceProgram, given: &SizeEnv) -> Result<SizeEnv, Diagnostic> {
    for name in given.keys() {
        if !p.sizes.iter().any(|s| &s.name == name) {
            return Err(Diagnostic::new(Span::default(), format!("size parameter `{name}` is not declared")));
        }
    }
    let mut out = SizeEnv::new();
    for s in &p.sizes {
        let v = given
            .get(&s.name)
            .copied()
            .or(s.default)
            .ok_or_else(|| Diagnostic::new(s.span, format!("unbound size variable {}", s.name)))?;
        out.insert(s.name.clone(), v);
    }
    Ok(out)
}

pub fn desugar(p: &SurfaceProgram, sizes: &SizeEnv, entry: Option<&str>) -> Result<Desugared, Diagnostic> {
    let sizes = resolve_sizes(p, sizes)?;
    let k = match entry {
        Some(name) => p
            .defs
            .iter()
            .position(|d| d.name == name)
            .ok_or_else(|| Diagnostic::new(Span::default(), format!("no definition named `{name}`")))?,
        None => {
            if p.defs.is_empty() {
                return Err(Diagnostic::new(Span::default(), "program has no definitions"));
            }
            p.defs.len() - 1
        }
    };
    let entry_def = &p.defs[k];
    let earlier = &p.defs[..k];

    for prm in &entry_def.params {
        if earlier.iter().any(|d| d.name == prm.name) {
            return Err(Diagnostic::new(
                prm.span,
                format!("parameter `{}` of the entry shadows definition `{}`", prm.name, prm.name),
            ));
        }
    }

    let mut ds = Desugarer { defs: HashSet::new(), locals: Vec::new() };
    let mut lets = Vec::new();
    for d in earlier {
        let term = ds.def_value(d)?;
        let ann = d.ret.clone().map(|r| curried(d.params.iter().map(|p| p.ty.clone()), r));
        lets.push((d.name.clone(), ann, term, d.span));
        ds.defs.insert(d.name.clone());
    }

    ds.locals = entry_def.params.iter().map(|p| p.name.clone()).collect();
    let mut term = ds.expr(&entry_def.body)?;
    for (name, ann, bound, span) in lets.into_iter().rev() {
        term = CoreTerm::new(CoreKind::Let(name, ann, Box::new(bound), Box::new(term)), span);
    }
    for prm in entry_def.params.iter().rev() {
        term = CoreTerm::new(CoreKind::Fun(prm.name.clone(), prm.ty.clone(), Box::new(term)), prm.span);
    }
    Ok(Desugared {
        entry: entry_def.name.clone(),
        params: entry_def.params.iter().map(|p| (p.name.clone(), p.ty.clone())).collect(),
        ret: entry_def.ret.clone(),
        term,
        sizes,
    })
}

struct Desugarer {
    /// Definitions visible so far.
    defs: HashSet<String>,
    /// Local scope, innermost last.
    locals: Vec<String>,
}

impl Desugarer {
    /// A non-entry definition as a curried `fun`.
    fn def_value(&mut self, d: &Def) -> Result<CoreTerm, Diagnostic> {
        self.locals = d.params.iter().map(|p| p.name.clone()).collect();
        let mut t = self.expr(&d.body)?;
        for prm in d.params.iter().rev() {
            t = CoreTerm::new(CoreKind::Fun(prm.name.clone(), prm.ty.clone(), Box::new(t)), prm.span);
        }
        self.locals.clear();
        Ok(t)
    }

    fn scoped<T>(&mut self, names: &[String], f: impl FnOnce(&mut Self) -> T) -> T {
        let depth = self.locals.len();
        self.locals.extend(names.iter().cloned());
        let r = f(self);
        self.locals.truncate(depth);
        r
    }

    fn is_local(&self, x: &str) -> bool {
        self.locals.iter().any(|l| l == x)
    }

    /// A builtin constant named `x`, unless shadowed.
    fn builtin(&self, x: &str) -> Option<Const> {
        if self.is_local(x) || self.defs.contains(x) {
            None
        } else {
            Const::builtin(x)
        }
    }

    fn expr(&mut self, e: &Expr) -> Result<CoreTerm, Diagnostic> {
        let span = e.span;
        let mk = |kind| CoreTerm::new(kind, span);
        Ok(match &e.kind {
            ExprKind::Nat(n) => mk(CoreKind::ConstApp(Const::Nat(*n), vec![])),
            ExprKind::Float(x) => mk(CoreKind::ConstApp(Const::flt(*x), vec![])),
            ExprKind::Var(x) => {
                if self.is_local(x) || self.defs.contains(x) {
                    mk(CoreKind::Var(x.clone()))
                } else if let Some(c) = Const::builtin(x) {
                    return Err(Diagnostic::new(
                        span,
                        format!("builtin `{}` must be applied to {} argument(s)", c.name(), c.arity()),
                    ));
                } else {
                    return Err(Diagnostic::new(span, format!("reference to undefined name `{x}`")));
                }
            }
            ExprKind::Binary(op, a, b) => {
                let (a, b) = (self.expr(a)?, self.expr(b)?);
                mk(CoreKind::ConstApp(op.constant(), vec![a, b]))
            }
            ExprKind::Juxt(head, args) | ExprKind::Call(head, args) => {
                if let ExprKind::Var(x) = &head.kind {
                    if let Some(c) = self.builtin(x) {
                        if args.len() != c.arity() {
                            return Err(Diagnostic::new(
                                span,
                                format!("`{}` expects {} argument(s), found {}", c.name(), c.arity(), args.len()),
                            ));
                        }
                        let args = args.iter().map(|a| self.expr(a)).collect::<Result<Vec<_>, _>>()?;
                        return Ok(mk(CoreKind::ConstApp(c, args)));
                    }
                }
                let mut f = self.expr(head)?;
                for a in args {
                    let a = self.expr(a)?;
                    f = mk(CoreKind::ConstApp(Const::App, vec![f, a]));
                }
                f
            }
            ExprKind::Index(base, idx) => {
                let mut t = self.expr(base)?;
                for i in idx {
                    let i = self.expr(i)?;
                    t = mk(CoreKind::ConstApp(Const::Get, vec![t, i]));
                }
                t
            }
            ExprKind::Proj(base, k) => {
                let c = if *k == 1 { Const::Fst } else { Const::Snd };
                mk(CoreKind::ConstApp(c, vec![self.expr(base)?]))
            }
            ExprKind::Pair(a, b) => {
                let (a, b) = (self.expr(a)?, self.expr(b)?);
                mk(CoreKind::ConstApp(Const::Pair, vec![a, b]))
            }
            ExprKind::Let { name, ann, bound, body } => {
                let bound = self.expr(bound)?;
                let body = self.scoped(std::slice::from_ref(name), |s| s.expr(body))?;
                mk(CoreKind::Let(name.clone(), ann.clone(), Box::new(bound), Box::new(body)))
            }
            ExprKind::Fun { binders, body } => {
                let names: Vec<String> = binders.iter().map(|(x, _)| x.clone()).collect();
                let mut t = self.scoped(&names, |s| s.expr(body))?;
                for (x, ty) in binders.iter().rev() {
                    t = mk(CoreKind::Fun(x.clone(), ty.clone(), Box::new(t)));
                }
                t
            }
            ExprKind::For { binders, body } => {
                let names: Vec<String> = binders.iter().map(|(x, _)| x.clone()).collect();
                let mut t = self.scoped(&names, |s| s.expr(body))?;
                for (i, n) in binders.iter().rev() {
                    t = mk(CoreKind::For(i.clone(), n.clone(), Box::new(t)));
                }
                t
            }
            ExprKind::Sum { binders, body } => {
                let names: Vec<String> = binders.iter().map(|(x, _)| x.clone()).collect();
                let mut t = self.scoped(&names, |s| s.expr(body))?;
                for (i, n) in binders.iter().rev() {
                    let lp = mk(CoreKind::For(i.clone(), Some(n.clone()), Box::new(t)));
                    t = mk(CoreKind::ConstApp(Const::Sum, vec![lp]));
                }
                t
            }
            ExprKind::If { cond, then, els } => {
                let (c, a, b) = (self.expr(cond)?, self.expr(then)?, self.expr(els)?);
                mk(CoreKind::Ite(Box::new(c), Box::new(a), Box::new(b)))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn core(src: &str) -> CoreTerm {
        let p = parse_program(src).unwrap();
        desugar(&p, &SizeEnv::new(), None).unwrap().term
    }

    fn strip_funs(mut t: &CoreTerm) -> &CoreTerm {
        while let CoreKind::Fun(_, _, b) = &t.kind {
            t = b;
        }
        t
    }

    fn v(x: &str) -> CoreTerm {
        CoreTerm::new(CoreKind::Var(x.into()), Span::default())
    }

    fn app(c: Const, args: Vec<CoreTerm>) -> CoreTerm {
        CoreTerm::new(CoreKind::ConstApp(c, args), Span::default())
    }

    #[test]
    fn sum_binder_becomes_sum_of_for() {
        let t = core("f(v: 3 => flt): flt := sum j:3. v[j]");
        let expected = app(
            Const::Sum,
            vec![CoreTerm::new(
                CoreKind::For("j".into(), Some(SizeExpr::Lit(3)), Box::new(app(Const::Get, vec![v("v"), v("j")]))),
                Span::default(),
            )],
        );
        assert_eq!(strip_funs(&t), &expected);
    }

    #[test]
    fn multi_subscript_is_nested_get() {
        let t = core("f(A: 2 => 2 => flt, i: fin 2, j: fin 2): flt := A[i,j]");
        let expected = app(Const::Get, vec![app(Const::Get, vec![v("A"), v("i")]), v("j")]);
        assert_eq!(strip_funs(&t), &expected);
    }

    #[test]
    fn calls_are_curried_applications() {
        let t = core("g(a: flt, b: flt): flt := a * b\nh(x: flt): flt := g(x, 1.0)\n");
        let CoreKind::Let(name, ann, _, body) = &strip_funs(&t).kind else { panic!("{t:?}") };
        assert_eq!(name, "g");
        assert!(matches!(ann, Some(SType::Arrow(..))));
        let expected = app(Const::App, vec![app(Const::App, vec![v("g"), v("x")]), app(Const::flt(1.0), vec![])]);
        assert_eq!(**body, expected);
    }

    #[test]
    fn missing_size_is_reported() {
        let p = parse_program("size n\nf(x: n => flt): flt := sum i:n. x[i]").unwrap();
        let err = desugar(&p, &SizeEnv::new(), None).unwrap_err();
        assert_eq!(err.message, "unbound size variable n");
    }

    #[test]
    fn undefined_reference_is_reported() {
        let p = parse_program("f(x: flt): flt := g(x)").unwrap();
        let err = desugar(&p, &SizeEnv::new(), None).unwrap_err();
        assert!(err.message.contains("undefined name `g`"), "{}", err.message);
    }

    #[test]
    fn later_definitions_are_not_visible() {
        let p = parse_program("f(x: flt): flt := g(x)\ng(x: flt): flt := x\n").unwrap();
        let err = desugar(&p, &SizeEnv::new(), Some("f")).unwrap_err();
        assert!(err.message.contains("undefined name `g`"));
    }

    #[test]
    fn builtins_can_be_shadowed() {
        let t = core("f(max: flt -> flt): flt := max 1.0");
        assert_eq!(strip_funs(&t), &app(Const::App, vec![v("max"), app(Const::flt(1.0), vec![])]));
    }

    #[test]
    fn deterministic() {
        let src = "size n = 2\ng(a: flt): flt := a\nf(x: n => flt): n => flt := for i. g(x[i])\n";
        let p = parse_program(src).unwrap();
        let a = desugar(&p, &SizeEnv::new(), None).unwrap();
        let b = desugar(&p, &SizeEnv::new(), None).unwrap();
        assert_eq!(a, b);
    }
}
