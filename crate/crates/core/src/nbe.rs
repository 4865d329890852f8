//! Typed partial evaluation by normalization by evaluation.
//!
//! Terms denote semantic values indexed by their type: residual code at
//! `fin` and `flt`, semantic pairs, semantic functions, and for arrays a
//! function from a residual index term. `quote` reads a denotation back as a
//! term; `splice` turns a residual term into a denotation by η-expansion.

use std::cell::Cell;
use std::rc::Rc;

use crate::eval::ops::{fin_op, float_op};
use crate::types::{Const, Term, TermKind, Type};

pub type FunDen = Rc<dyn Fn(&Normalizer, Den) -> Den>;
pub type ArrDen = Rc<dyn Fn(&Normalizer, Rc<Term>) -> Den>;

#[derive(Clone)]
pub enum Den {
    Code(Rc<Term>),
    Pair(Rc<Den>, Rc<Den>),
    Fun(FunDen),
    Arr(ArrDen),
}

impl Den {
    fn code(self) -> Rc<Term> {
        match self {
            Den::Code(t) => t,
            _ => panic!("internal error: expected residual code"),
        }
    }
}

#[derive(Clone, Default)]
struct Env(Option<Rc<(String, Den, Env)>>);

impl Env {
    fn bind(&self, x: &str, d: Den) -> Env {
        Env(Some(Rc::new((x.to_string(), d, self.clone()))))
    }

    fn lookup(&self, x: &str) -> Option<&Den> {
        let mut e = self;
        while let Some(node) = &e.0 {
            if node.0 == x {
                return Some(&node.1);
            }
            e = &node.2;
        }
        None
    }
}

/// One normalization run: flags plus the fresh-name counter.
pub struct Normalizer {
    fold: bool,
    identities: bool,
    fresh: Cell<usize>,
}

impl Default for Normalizer {
    fn default() -> Self {
        Normalizer::new(true, true)
    }
}

impl Normalizer {
    /// `fold` evaluates operators on literal operands; `identities` removes
    /// additions of zero and multiplications/divisions by one (requires `fold`).
    pub fn new(fold: bool, identities: bool) -> Self {
        Normalizer { fold, identities: fold && identities, fresh: Cell::new(0) }
    }

    /// Binder names carry a leading underscore, which source identifiers cannot.
    fn fresh(&self, prefix: &str) -> String {
        let k = self.fresh.get() + 1;
        self.fresh.set(k);
        format!("_{prefix}{k}")
    }

    /// Normalizes a term whose free names are opaque.
    pub fn normalize(&self, t: &Term) -> Rc<Term> {
        self.quote(&t.ty, self.denote(&Env::default(), t))
    }

    /// Normalizes an entry body whose parameters stay as free names.
    pub fn normalize_entry(&self, params: &[(String, Type)], body: &Term) -> Rc<Term> {
        let mut env = Env::default();
        for (x, t) in params {
            env = env.bind(x, self.splice(t, Term::var(x.clone(), t.clone())));
        }
        self.quote(&body.ty, self.denote(&env, body))
    }

    fn denote(&self, env: &Env, t: &Term) -> Den {
        match &t.kind {
            TermKind::Var(x) => match env.lookup(x) {
                Some(d) => d.clone(),
                None => self.splice(&t.ty, Term::var(x.clone(), t.ty.clone())),
            },
            TermKind::Const(c, args) => self.constant(env, t, c, args),
            TermKind::Fun(x, _, body) => {
                let (env, x, body) = (env.clone(), x.clone(), body.clone());
                Den::Fun(Rc::new(move |nz, d| nz.denote(&env.bind(&x, d), &body)))
            }
            TermKind::For(i, _, body) => {
                let (env, i, body) = (env.clone(), i.clone(), body.clone());
                Den::Arr(Rc::new(move |nz, idx| nz.denote(&env.bind(&i, Den::Code(idx)), &body)))
            }
            TermKind::Ite(c, a, b) => {
                let c = self.denote(env, c).code();
                match c.as_literal() {
                    Some(Const::Nat(1)) => self.denote(env, a),
                    Some(Const::Nat(0)) => self.denote(env, b),
                    _ => {
                        let qa = self.quote(&t.ty, self.denote(env, a));
                        let qb = self.quote(&t.ty, self.denote(env, b));
                        self.splice(&t.ty, Term::new(TermKind::Ite(c, qa, qb), t.ty.clone()))
                    }
                }
            }
            TermKind::Let(x, a, b) => {
                let d = self.denote(env, a);
                self.denote(&env.bind(x, d), b)
            }
        }
    }

    fn constant(&self, env: &Env, t: &Term, c: &Const, args: &[Rc<Term>]) -> Den {
        match c {
            _ if args.is_empty() => Den::Code(Rc::new(t.clone())),
            Const::App => match self.denote(env, &args[0]) {
                Den::Fun(f) => f(self, self.denote(env, &args[1])),
                _ => panic!("internal error: applying a non-function"),
            },
            Const::Get => {
                let arr = self.denote(env, &args[0]);
                let idx = self.quote(&args[1].ty, self.denote(env, &args[1]));
                match arr {
                    Den::Arr(f) => f(self, idx),
                    _ => panic!("internal error: indexing a non-array"),
                }
            }
            Const::Pair => Den::Pair(Rc::new(self.denote(env, &args[0])), Rc::new(self.denote(env, &args[1]))),
            Const::Fst | Const::Snd => match self.denote(env, &args[0]) {
                Den::Pair(a, b) => (*if *c == Const::Fst { a } else { b }).clone(),
                _ => panic!("internal error: projecting a non-pair"),
            },
            Const::Sum => {
                let q = self.quote(&args[0].ty, self.denote(env, &args[0]));
                Den::Code(Term::app(Const::Sum, vec![q], Type::Flt))
            }
            _ => {
                let codes: Vec<Rc<Term>> = args.iter().map(|a| self.denote(env, a).code()).collect();
                Den::Code(self.arith(c, codes, &t.ty))
            }
        }
    }

    /// Residual operator application with literal folding and identities.
    fn arith(&self, c: &Const, args: Vec<Rc<Term>>, ty: &Type) -> Rc<Term> {
        if self.fold {
            let lits: Option<Vec<Const>> = args.iter().map(|a| a.as_literal()).collect();
            if let Some(lits) = lits {
                if let Some(folded) = fold_literals(c, &lits) {
                    return Term::lit(folded, ty.clone());
                }
            }
        }
        if self.identities && args.len() == 2 {
            let (a, b) = (&args[0], &args[1]);
            let keep = |x: &Rc<Term>| x.ty == *ty;
            let is = |x: &Rc<Term>, v: u64| match x.as_literal() {
                Some(Const::Nat(n)) => n == v,
                Some(Const::Flt(f)) => f.0 == v as f64,
                _ => false,
            };
            let kept = match c {
                Const::Add if is(a, 0) && keep(b) => Some(b),
                Const::Add if is(b, 0) && keep(a) => Some(a),
                Const::Mul if is(a, 1) && keep(b) => Some(b),
                Const::Mul if is(b, 1) && keep(a) => Some(a),
                Const::Sub if is(b, 0) => Some(a),
                Const::Div if is(b, 1) => Some(a),
                _ => None,
            };
            if let Some(x) = kept {
                return x.clone();
            }
        }
        Term::app(*c, args, ty.clone())
    }

    /// Reads a denotation back as a normal term of type `ty`.
    pub fn quote(&self, ty: &Type, d: Den) -> Rc<Term> {
        match (ty, d) {
            (Type::Fin(_) | Type::Flt, Den::Code(t)) => t,
            (Type::Prod(a, b), Den::Pair(x, y)) => {
                let (qa, qb) = (self.quote(a, (*x).clone()), self.quote(b, (*y).clone()));
                Term::app(Const::Pair, vec![qa, qb], ty.clone())
            }
            (Type::Arrow(a, b), Den::Fun(f)) => {
                let x = self.fresh("x");
                let arg = self.splice(a, Term::var(x.clone(), (**a).clone()));
                let body = self.quote(b, f(self, arg));
                Term::new(TermKind::Fun(x, (**a).clone(), body), ty.clone())
            }
            (Type::Array(n, t), Den::Arr(f)) => {
                let i = self.fresh("i");
                let body = self.quote(t, f(self, Term::var(i.clone(), Type::Fin(*n))));
                Term::new(TermKind::For(i, *n, body), ty.clone())
            }
            (ty, _) => panic!("internal error: denotation does not match type {ty}"),
        }
    }

    /// Turns a residual term of type `ty` into a denotation.
    pub fn splice(&self, ty: &Type, e: Rc<Term>) -> Den {
        match ty {
            Type::Fin(_) | Type::Flt => Den::Code(e),
            Type::Prod(a, b) => {
                let fst = Term::app(Const::Fst, vec![e.clone()], (**a).clone());
                let snd = Term::app(Const::Snd, vec![e], (**b).clone());
                Den::Pair(Rc::new(self.splice(a, fst)), Rc::new(self.splice(b, snd)))
            }
            Type::Arrow(a, b) => {
                let (a, b) = ((**a).clone(), (**b).clone());
                Den::Fun(Rc::new(move |nz, d| {
                    let arg = nz.quote(&a, d);
                    nz.splice(&b, Term::app(Const::App, vec![e.clone(), arg], b.clone()))
                }))
            }
            Type::Array(_, t) => {
                let t = (**t).clone();
                Den::Arr(Rc::new(move |nz, i| nz.splice(&t, Term::app(Const::Get, vec![e.clone(), i], t.clone()))))
            }
        }
    }
}

fn fold_literals(c: &Const, lits: &[Const]) -> Option<Const> {
    match lits {
        [Const::Nat(a), Const::Nat(b)] => fin_op(c, *a, *b).map(Const::Nat),
        _ => {
            let xs: Option<Vec<f64>> = lits
                .iter()
                .map(|l| match l {
                    Const::Flt(f) => Some(f.0),
                    _ => None,
                })
                .collect();
            float_op(c, &xs?).map(Const::flt)
        }
    }
}

/// Normalizes with folding and identities enabled.
pub fn normalize(t: &Term) -> Rc<Term> {
    Normalizer::default().normalize(t)
}

/// True if `t` has no `let`, and no `app`, `get`, `fst` or `snd` applied
/// directly to the matching introduction form.
pub fn is_normal(t: &Term) -> bool {
    match &t.kind {
        TermKind::Var(_) => true,
        TermKind::Let(..) => false,
        TermKind::Const(c, args) => {
            let redex = matches!(
                (c, args.first().map(|a| &a.kind)),
                (Const::App, Some(TermKind::Fun(..)))
                    | (Const::Get, Some(TermKind::For(..)))
                    | (Const::Fst | Const::Snd, Some(TermKind::Const(Const::Pair, _)))
            );
            !redex && args.iter().all(|a| is_normal(a))
        }
        TermKind::Fun(_, _, b) | TermKind::For(_, _, b) => is_normal(b),
        TermKind::Ite(c, a, b) => is_normal(c) && is_normal(a) && is_normal(b),
    }
}
