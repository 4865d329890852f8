//! Scope and type validation.
//!
//! A variable bound under env `E` may be used under env `U` when `E` is an
//! order-preserving subsequence of `U`. The branches of an `ite` on `c` may
//! additionally use variables bound under `U, if c!=0` and `U, if c=0`.

use std::collections::HashMap;
use std::fmt;

use super::{Binding, Env, EnvEntry, Prim, Program, VPar};
use crate::types::{const_sig, Const, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationKind {
    OutOfScope,
    EnvMismatch,
    TypeMismatch,
    Duplicate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationError {
    pub kind: ValidationKind,
    /// Variable of the offending binding, or `None` for the result.
    pub binding: Option<String>,
    pub message: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ValidationKind::OutOfScope => "out of scope",
            ValidationKind::EnvMismatch => "env mismatch",
            ValidationKind::TypeMismatch => "type mismatch",
            ValidationKind::Duplicate => "duplicate",
        };
        match &self.binding {
            Some(x) => write!(f, "{kind} in binding `{x}`: {}", self.message),
            None => write!(f, "{kind} in result: {}", self.message),
        }
    }
}

/// True if `sub` appears in `env` in order (not necessarily contiguously).
pub fn is_subsequence(sub: &[EnvEntry], env: &[EnvEntry]) -> bool {
    let mut it = env.iter();
    sub.iter().all(|e| it.any(|f| f == e))
}

struct Validator<'a> {
    params: HashMap<&'a str, &'a Type>,
    vars: HashMap<&'a str, &'a Binding>,
    indices: HashMap<String, Type>,
    errors: Vec<ValidationError>,
    current: Option<String>,
}

impl<'a> Validator<'a> {
    fn error(&mut self, kind: ValidationKind, message: String) {
        self.errors.push(ValidationError { kind, binding: self.current.clone(), message });
    }

    fn register_index(&mut self, name: &str, ty: Type) {
        if self.params.contains_key(name) || self.vars.contains_key(name) {
            self.error(ValidationKind::Duplicate, format!("index `{name}` clashes with a variable"));
        }
        match self.indices.get(name) {
            Some(t) if *t != ty => {
                let msg = format!("index `{name}` has type `{ty}` here but `{t}` elsewhere");
                self.error(ValidationKind::EnvMismatch, msg);
            }
            Some(_) => {}
            None => {
                self.indices.insert(name.to_string(), ty);
            }
        }
    }

    fn resolve(&mut self, v: &VPar, env: &[EnvEntry]) -> bool {
        match v {
            VPar::Var(x, t) => {
                if let Some(b) = self.vars.get(x.as_str()).copied() {
                    if !is_subsequence(&b.env, env) {
                        let msg =
                            format!("`{x}` is bound under [{}] but used under [{}]", fmt_env(&b.env), fmt_env(env));
                        self.error(ValidationKind::EnvMismatch, msg);
                        return false;
                    }
                    if b.ty != *t {
                        self.error(ValidationKind::TypeMismatch, format!("`{x}` has type `{}`, used at `{t}`", b.ty));
                        return false;
                    }
                    true
                } else if let Some(pt) = self.params.get(x.as_str()).copied() {
                    if pt != t {
                        self.error(
                            ValidationKind::TypeMismatch,
                            format!("parameter `{x}` has type `{pt}`, used at `{t}`"),
                        );
                        return false;
                    }
                    true
                } else {
                    self.error(ValidationKind::OutOfScope, format!("undefined variable `{x}`"));
                    false
                }
            }
            VPar::Idx(i, t) => match env.iter().find(|e| e.index() == Some(i.as_str())) {
                Some(e) => {
                    let et = e.index_type().expect("index entry");
                    if et != *t {
                        self.error(ValidationKind::TypeMismatch, format!("index `{i}` has type `{et}`, used at `{t}`"));
                        return false;
                    }
                    true
                }
                None => {
                    self.error(ValidationKind::OutOfScope, format!("index `{i}` is not in scope"));
                    false
                }
            },
        }
    }

    fn check_env(&mut self, env: &Env) {
        for (k, e) in env.iter().enumerate() {
            match e {
                EnvEntry::For(i, _) | EnvEntry::Fun(i, _) => {
                    if env[..k].iter().any(|f| f.index() == Some(i.as_str())) {
                        self.error(ValidationKind::Duplicate, format!("index `{i}` appears twice in one env"));
                    }
                    self.register_index(i, e.index_type().expect("index entry"));
                }
                EnvEntry::IfTrue(c) | EnvEntry::IfFalse(c) => {
                    let v = VPar::Var(c.clone(), Type::Fin(2));
                    self.resolve(&v, &env[..k]);
                }
            }
        }
    }

    fn check_binding(&mut self, b: &'a Binding) {
        self.current = Some(b.var.clone());
        if self.vars.contains_key(b.var.as_str()) || self.params.contains_key(b.var.as_str()) {
            self.error(ValidationKind::Duplicate, format!("variable `{}` is bound twice", b.var));
        }
        if self.indices.contains_key(&b.var) {
            self.error(ValidationKind::Duplicate, format!("variable `{}` clashes with an index", b.var));
        }
        self.check_env(&b.env);
        let ty_err = |me: &mut Self, what: String| me.error(ValidationKind::TypeMismatch, what);
        match &b.prim {
            Prim::Const(Const::Nat(n), args) if args.is_empty() => {
                if !matches!(b.ty, Type::Fin(m) if *n < m) {
                    ty_err(self, format!("literal {n} bound at `{}`", b.ty));
                }
            }
            Prim::Const(c, args) => {
                // resolve every operand so each unbound one is reported
                let mut ok = true;
                for a in args {
                    ok &= self.resolve(a, &b.env);
                }
                if ok {
                    let tys: Vec<Type> = args.iter().map(|a| a.ty().clone()).collect();
                    match const_sig(c, &tys) {
                        Ok(t) if t == b.ty => {}
                        Ok(t) => ty_err(self, format!("`{}` yields `{t}` but is bound at `{}`", c.name(), b.ty)),
                        Err(e) => ty_err(self, e.to_string()),
                    }
                }
            }
            Prim::IdxRef(i) => match b.env.iter().find(|e| e.index() == Some(i.as_str())) {
                Some(e) => {
                    let t = e.index_type().expect("index entry");
                    if t != b.ty {
                        ty_err(self, format!("index `{i}` has type `{t}` but is bound at `{}`", b.ty));
                    }
                }
                None => self.error(ValidationKind::OutOfScope, format!("index `{i}` is not in scope")),
            },
            Prim::For(i, ..) | Prim::Fun(i, ..) if b.env.iter().any(|e| e.index() == Some(i.as_str())) => {
                self.error(ValidationKind::Duplicate, format!("index `{i}` is already bound by the env"));
            }
            Prim::For(i, n, body) => {
                self.register_index(i, Type::Fin(*n));
                let mut inner = b.env.clone();
                inner.push(EnvEntry::For(i.clone(), *n));
                if self.resolve(body, &inner) && b.ty != Type::array(*n, body.ty().clone()) {
                    ty_err(self, format!("loop of `{}` bound at `{}`", body.ty(), b.ty));
                }
            }
            Prim::Fun(i, t, body) => {
                self.register_index(i, t.clone());
                let mut inner = b.env.clone();
                inner.push(EnvEntry::Fun(i.clone(), t.clone()));
                if self.resolve(body, &inner) && b.ty != Type::arrow(t.clone(), body.ty().clone()) {
                    ty_err(self, format!("function to `{}` bound at `{}`", body.ty(), b.ty));
                }
            }
            Prim::Ite(c, x, y) => {
                let c_ok = self.resolve(c, &b.env);
                if c_ok && *c.ty() != Type::Fin(2) {
                    ty_err(self, format!("condition has type `{}`", c.ty()));
                }
                let (then_env, else_env) = match c {
                    VPar::Var(cv, _) => {
                        let mut t = b.env.clone();
                        t.push(EnvEntry::IfTrue(cv.clone()));
                        let mut e = b.env.clone();
                        e.push(EnvEntry::IfFalse(cv.clone()));
                        (t, e)
                    }
                    VPar::Idx(..) => (b.env.clone(), b.env.clone()),
                };
                let x_ok = self.resolve(x, &then_env);
                let y_ok = self.resolve(y, &else_env);
                if x_ok && y_ok && (*x.ty() != b.ty || *y.ty() != b.ty) {
                    ty_err(self, format!("branches `{}` and `{}` bound at `{}`", x.ty(), y.ty(), b.ty));
                }
            }
        }
        self.vars.insert(&b.var, b);
    }
}

fn fmt_env(env: &[EnvEntry]) -> String {
    env.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
}

/// Checks scoping and typing of every binding and of the result.
pub fn validate(p: &Program) -> Result<(), Vec<ValidationError>> {
    let mut v = Validator {
        params: HashMap::new(),
        vars: HashMap::new(),
        indices: HashMap::new(),
        errors: Vec::new(),
        current: None,
    };
    for (x, t) in &p.params {
        if v.params.insert(x, t).is_some() {
            v.error(ValidationKind::Duplicate, format!("parameter `{x}` is declared twice"));
        }
    }
    for b in &p.bindings {
        v.check_binding(b);
    }
    v.current = None;
    if matches!(p.result, VPar::Idx(..)) {
        v.error(ValidationKind::OutOfScope, "the result cannot be an index".into());
    } else {
        v.resolve(&p.result, &[]);
    }
    if v.errors.is_empty() {
        Ok(())
    } else {
        Err(v.errors)
    }
}
