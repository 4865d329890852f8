//! Bidirectional type checker producing annotated terms.

use std::rc::Rc;

use thiserror::Error;

use super::{const_sig, Const, Term, TermKind, Type};
use crate::diag::{Diagnostic, Span};
use crate::syntax::{CoreKind, CoreTerm, Desugared, SType, SizeEnv};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct TypeError {
    pub span: Span,
    pub message: String,
}

impl From<TypeError> for Diagnostic {
    fn from(e: TypeError) -> Self {
        Diagnostic::new(e.span, e.message)
    }
}

fn err<T>(span: Span, message: impl Into<String>) -> Result<T, TypeError> {
    Err(TypeError { span, message: message.into() })
}

/// Typing context; later bindings shadow earlier ones.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Ctx {
    entries: Vec<(String, Type)>,
}

impl Ctx {
    pub fn new() -> Self {
        Ctx::default()
    }

    pub fn lookup(&self, x: &str) -> Option<&Type> {
        self.entries.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn push(&mut self, x: impl Into<String>, t: Type) {
        self.entries.push((x.into(), t));
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    pub fn extended(&self, x: impl Into<String>, t: Type) -> Ctx {
        let mut c = self.clone();
        c.push(x, t);
        c
    }

    pub fn entries(&self) -> &[(String, Type)] {
        &self.entries
    }
}

impl FromIterator<(String, Type)> for Ctx {
    fn from_iter<I: IntoIterator<Item = (String, Type)>>(iter: I) -> Self {
        Ctx { entries: iter.into_iter().collect() }
    }
}

/// Checks `e` against `expected`, or synthesizes its type when `None`.
pub fn check(ctx: &Ctx, sizes: &SizeEnv, e: &CoreTerm, expected: Option<&Type>) -> Result<Rc<Term>, TypeError> {
    Checker { sizes, ctx: ctx.clone() }.go(e, expected)
}

/// The checked entry definition of a program.
#[derive(Clone, Debug)]
pub struct Checked {
    pub entry: String,
    pub params: Vec<(String, Type)>,
    /// Entry body wrapped in one `fun` per parameter.
    pub term: Rc<Term>,
    /// Type of the entry after all parameters are supplied.
    pub result: Type,
}

impl Checked {
    /// The entry body under its parameter binders.
    pub fn body(&self) -> &Rc<Term> {
        let mut t = &self.term;
        for _ in 0..self.params.len() {
            match &t.kind {
                TermKind::Fun(_, _, b) => t = b,
                _ => break,
            }
        }
        t
    }
}

pub fn check_program(d: &Desugared) -> Result<Checked, Diagnostic> {
    let eval = |t: &SType, span: Span| t.eval(&d.sizes).map_err(|m| Diagnostic::new(span, m));
    let expected = match d.declared_type() {
        Some(t) => Some(eval(&t, d.term.span)?),
        None => None,
    };
    let params =
        d.params.iter().map(|(x, t)| Ok((x.clone(), eval(t, d.term.span)?))).collect::<Result<Vec<_>, Diagnostic>>()?;
    let term = check(&Ctx::new(), &d.sizes, &d.term, expected.as_ref())?;
    let result = term.ty.result_after(params.len()).clone();
    Ok(Checked { entry: d.entry.clone(), params, term, result })
}

struct Checker<'a> {
    sizes: &'a SizeEnv,
    ctx: Ctx,
}

impl Checker<'_> {
    fn eval_ty(&self, t: &SType, span: Span) -> Result<Type, TypeError> {
        t.eval(self.sizes).map_err(|message| TypeError { span, message })
    }

    fn with<T>(&mut self, x: &str, t: Type, f: impl FnOnce(&mut Self) -> T) -> T {
        self.ctx.push(x, t);
        let r = f(self);
        self.ctx.pop();
        r
    }

    fn matches(span: Span, expected: Option<&Type>, actual: Type) -> Result<Type, TypeError> {
        match expected {
            Some(t) if *t != actual => err(span, format!("type mismatch: expected `{t}`, found `{actual}`")),
            _ => Ok(actual),
        }
    }

    fn go(&mut self, e: &CoreTerm, expected: Option<&Type>) -> Result<Rc<Term>, TypeError> {
        let span = e.span;
        match &e.kind {
            CoreKind::Var(x) => {
                let t = match self.ctx.lookup(x) {
                    Some(t) => t.clone(),
                    None => return err(span, format!("unbound variable `{x}`")),
                };
                let t = Self::matches(span, expected, t)?;
                Ok(Term::var(x.clone(), t))
            }
            CoreKind::ConstApp(c, args) => self.constant(span, c, args, expected),
            CoreKind::Fun(x, sty, body) => {
                let a = self.eval_ty(sty, span)?;
                let body = match expected {
                    Some(Type::Arrow(ea, eb)) => {
                        if **ea != a {
                            return err(
                                span,
                                format!("type mismatch: parameter `{x}` has type `{a}`, expected `{ea}`"),
                            );
                        }
                        self.with(x, a.clone(), |c| c.go(body, Some(eb)))?
                    }
                    Some(t) => return err(span, format!("type mismatch: expected `{t}`, found a function")),
                    None => self.with(x, a.clone(), |c| c.go(body, None))?,
                };
                let ty = Type::arrow(a.clone(), body.ty.clone());
                Ok(Term::new(TermKind::Fun(x.clone(), a, body), ty))
            }
            CoreKind::For(i, bound, body) => {
                let bound = match bound {
                    Some(s) => Some(s.eval(self.sizes).map_err(|message| TypeError { span, message })?),
                    None => None,
                };
                let (n, body) = match expected {
                    Some(Type::Array(n, elem)) => {
                        if let Some(b) = bound {
                            if b != *n {
                                return err(span, format!("type mismatch: loop `{i}` has bound {b}, expected {n}"));
                            }
                        }
                        (*n, self.with(i, Type::Fin(*n), |c| c.go(body, Some(elem)))?)
                    }
                    Some(t) => return err(span, format!("type mismatch: expected `{t}`, found an array")),
                    None => match bound {
                        Some(n) => (n, self.with(i, Type::Fin(n), |c| c.go(body, None))?),
                        None => {
                            return err(span, format!("cannot infer the bound of `for {i}`; write `for {i}:n.`"));
                        }
                    },
                };
                let ty = Type::array(n, body.ty.clone());
                Ok(Term::new(TermKind::For(i.clone(), n, body), ty))
            }
            CoreKind::Ite(c, a, b) => {
                let c = self.go(c, Some(&Type::Fin(2)))?;
                let (a, b) = match expected {
                    Some(t) => (self.go(a, Some(t))?, self.go(b, Some(t))?),
                    None if a.is_nat_literal() && !b.is_nat_literal() => {
                        let b = self.go(b, None)?;
                        (self.go(a, Some(&b.ty))?, b)
                    }
                    None => {
                        let a = self.go(a, None)?;
                        (a.clone(), self.go(b, Some(&a.ty))?)
                    }
                };
                let ty = a.ty.clone();
                Ok(Term::new(TermKind::Ite(c, a, b), ty))
            }
            CoreKind::Let(x, ann, bound, body) => {
                let bound = match ann {
                    Some(t) => {
                        let t = self.eval_ty(t, span)?;
                        self.go(bound, Some(&t))?
                    }
                    None => self.go(bound, None)?,
                };
                let body = self.with(x, bound.ty.clone(), |c| c.go(body, expected))?;
                let ty = body.ty.clone();
                Ok(Term::new(TermKind::Let(x.clone(), bound, body), ty))
            }
        }
    }

    fn constant(
        &mut self,
        span: Span,
        c: &Const,
        args: &[CoreTerm],
        expected: Option<&Type>,
    ) -> Result<Rc<Term>, TypeError> {
        if args.len() != c.arity() {
            return err(span, format!("`{}` expects {} argument(s), found {}", c.name(), c.arity(), args.len()));
        }
        match c {
            Const::Nat(n) => {
                return match expected {
                    None => Ok(Term::lit(*c, Type::Fin(n + 1))),
                    Some(Type::Fin(m)) if n < m => Ok(Term::lit(*c, Type::Fin(*m))),
                    Some(Type::Fin(m)) => err(span, format!("literal {n} is out of bounds for `fin {m}`")),
                    Some(Type::Flt) => Ok(Term::lit(Const::flt(*n as f64), Type::Flt)),
                    Some(t) => err(span, format!("type mismatch: expected `{t}`, found literal {n}")),
                };
            }
            Const::Flt(_) => {
                let t = Self::matches(span, expected, Type::Flt)?;
                return Ok(Term::lit(*c, t));
            }
            _ => {}
        }
        let flt = Type::Flt;
        let typed: Vec<Rc<Term>> = match c {
            _ if c.is_arith() => {
                if expected == Some(&flt) {
                    args.iter().map(|a| self.go(a, Some(&flt))).collect::<Result<_, _>>()?
                } else {
                    let mut out: Vec<Option<Rc<Term>>> = vec![None; args.len()];
                    for (k, a) in args.iter().enumerate() {
                        if !a.is_nat_literal() {
                            out[k] = Some(self.go(a, None)?);
                        }
                    }
                    let any_flt = out.iter().flatten().any(|t| t.ty == Type::Flt);
                    for (k, a) in args.iter().enumerate() {
                        if out[k].is_none() {
                            out[k] = Some(self.go(a, if any_flt { Some(&flt) } else { None })?);
                        }
                    }
                    out.into_iter().flatten().collect()
                }
            }
            Const::Max | Const::Log | Const::Sqrt | Const::Exp | Const::NormCdf => {
                args.iter().map(|a| self.go(a, Some(&flt))).collect::<Result<_, _>>()?
            }
            Const::Get => {
                let arr = self.go(&args[0], None)?;
                let Type::Array(n, _) = &arr.ty else {
                    return err(args[0].span, format!("type mismatch: expected an array, found `{}`", arr.ty));
                };
                let idx = self.go(&args[1], Some(&Type::Fin(*n)))?;
                vec![arr, idx]
            }
            Const::App => {
                let f = self.go(&args[0], None)?;
                let Type::Arrow(a, _) = &f.ty else {
                    return err(args[0].span, format!("type mismatch: expected a function, found `{}`", f.ty));
                };
                let a = (**a).clone();
                let x = self.go(&args[1], Some(&a))?;
                vec![f, x]
            }
            Const::Pair => match expected {
                Some(Type::Prod(a, b)) => vec![self.go(&args[0], Some(a))?, self.go(&args[1], Some(b))?],
                _ => vec![self.go(&args[0], None)?, self.go(&args[1], None)?],
            },
            Const::Sum => {
                let arg = match &args[0].kind {
                    CoreKind::For(_, Some(bound), _) => {
                        let n = bound.eval(self.sizes).map_err(|message| TypeError { span: args[0].span, message })?;
                        self.go(&args[0], Some(&Type::array(n, Type::Flt)))?
                    }
                    _ => self.go(&args[0], None)?,
                };
                vec![arg]
            }
            _ => args.iter().map(|a| self.go(a, None)).collect::<Result<_, _>>()?,
        };
        let tys: Vec<Type> = typed.iter().map(|t| t.ty.clone()).collect();
        let ty = const_sig(c, &tys).map_err(|e| TypeError { span, message: e.to_string() })?;
        let ty = Self::matches(span, expected, ty)?;
        Ok(Term::app(*c, typed, ty))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{desugar, parse_program};
    use crate::types::forget;

    fn sizes() -> SizeEnv {
        SizeEnv::new()
    }

    fn core_of(src: &str) -> CoreTerm {
        // Wrap in a definition to reuse desugaring.
        let p = parse_program(&format!("f() :=\n  {src}\n")).unwrap();
        desugar(&p, &sizes(), None).unwrap().term
    }

    #[test]
    fn tabulate_synthesizes_fin_21() {
        let t = check(&Ctx::new(), &sizes(), &core_of("for i:3. 10 * i"), None).unwrap();
        assert_eq!(t.ty, Type::array(3, Type::Fin(21)));
    }

    #[test]
    fn ite_condition_must_be_fin_2() {
        let p = parse_program("f(c: flt, a: flt) :=\n  if c then a else a\n").unwrap();
        let d = desugar(&p, &sizes(), None).unwrap();
        let err = check_program(&d).unwrap_err();
        assert!(err.message.contains("expected `fin 2`, found `flt`"), "{}", err.message);
    }

    #[test]
    fn dense_layer_type() {
        let src = "size n\nsize m\ndense(b: n => flt, W: n => m => flt, x: m => flt): n => flt :=\n  for i. max(0, (sum j:m. W[i][j] * x[j]) + b[i])\n";
        let p = parse_program(src).unwrap();
        let s: SizeEnv = [("n".to_string(), 2), ("m".to_string(), 3)].into_iter().collect();
        let d = desugar(&p, &s, None).unwrap();
        let c = check_program(&d).unwrap();
        assert_eq!(c.result, Type::array(2, Type::Flt));
        assert_eq!(c.params.len(), 3);
    }

    #[test]
    fn zero_reads_as_float_in_float_position() {
        let p = parse_program("f(x: flt) :=\n  max 0 x\n").unwrap();
        let d = desugar(&p, &sizes(), None).unwrap();
        let c = check_program(&d).unwrap();
        let TermKind::Const(Const::Max, args) = &c.body().kind else { panic!() };
        assert_eq!(args[0].as_literal(), Some(Const::flt(0.0)));
    }

    #[test]
    fn literal_out_of_bounds() {
        let p = parse_program("f(a: 3 => flt) :=\n  a[3]\n").unwrap();
        let d = desugar(&p, &sizes(), None).unwrap();
        let err = check_program(&d).unwrap_err();
        assert!(err.message.contains("out of bounds"), "{}", err.message);
        assert_eq!(err.span, Span::new(2, 5));
    }

    #[test]
    fn for_without_bound_needs_context() {
        let err = check(&Ctx::new(), &sizes(), &core_of("for i. 1.0"), None).unwrap_err();
        assert!(err.message.contains("cannot infer the bound"));
        let ok = check(&Ctx::new(), &sizes(), &core_of("for i. 1.0"), Some(&Type::array(4, Type::Flt))).unwrap();
        assert_eq!(ok.ty, Type::array(4, Type::Flt));
    }

    #[test]
    fn unbound_variable() {
        let t = CoreTerm::new(CoreKind::Var("zz".into()), Span::new(3, 4));
        let err = check(&Ctx::new(), &sizes(), &t, None).unwrap_err();
        assert_eq!(err.span, Span::new(3, 4));
        assert!(err.message.contains("unbound variable `zz`"));
    }

    #[test]
    fn recheck_reproduces_annotations() {
        let t = check(&Ctx::new(), &sizes(), &core_of("let a: fin 5 := 1; for i:3. a + i"), None).unwrap();
        let again = check(&Ctx::new(), &sizes(), &forget(&t), None).unwrap();
        assert_eq!(t, again);
    }

    #[test]
    fn weakening() {
        let e = core_of("for i:2. 1.5");
        let a = check(&Ctx::new(), &sizes(), &e, None).unwrap();
        let ctx: Ctx = [("unused".to_string(), Type::Fin(7))].into_iter().collect();
        let b = check(&ctx, &sizes(), &e, None).unwrap();
        assert_eq!(a, b);
    }
}
