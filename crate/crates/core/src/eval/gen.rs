//! Seeded generator of well-typed terms for property tests.
//!
//! Every generated term type-checks with exactly the generated annotations:
//! terms produced for a synthesis position never depend on an expected type.

use std::rc::Rc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::value::Value;
use crate::types::{Const, Term, TermKind, Type};

const MAX_SIZE: u64 = 4;

const FLOATS: [f64; 9] = [0.0, 1.0, 2.0, 0.5, -1.5, 3.25, 1e-3, 10.0, -0.25];

/// A generated program: parameters, their argument values, and a body.
#[derive(Clone, Debug)]
pub struct GenProgram {
    pub params: Vec<(String, Type)>,
    pub args: Vec<Value>,
    pub body: Rc<Term>,
}

pub struct Gen {
    rng: ChaCha8Rng,
    fresh: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Prod {
    Var,
    Let,
    Ite,
    Get,
    Fst,
    Snd,
    App,
    Intro,
    FinAdd,
    FinMul,
    FltArith,
    Max,
    Unary,
    Sum,
    Shared,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), fresh: 0 }
    }

    fn name(&mut self, prefix: &str) -> String {
        self.fresh += 1;
        format!("{prefix}{}", self.fresh)
    }

    fn size(&mut self) -> u64 {
        self.rng.gen_range(1..=MAX_SIZE)
    }

    fn float(&mut self) -> f64 {
        if self.rng.gen_bool(0.6) {
            *FLOATS.choose(&mut self.rng).expect("non-empty")
        } else {
            self.rng.gen_range(-32i32..=32) as f64 / 4.0
        }
    }

    /// A random type with sizes in `1..=4`. Arrows appear only if allowed.
    pub fn ty(&mut self, depth: u32, arrows: bool) -> Type {
        let roll = self.rng.gen_range(0..10);
        if depth == 0 || roll < 4 {
            return if self.rng.gen_bool(0.6) { Type::Flt } else { Type::Fin(self.size()) };
        }
        match roll {
            4..=6 => Type::array(self.size(), self.ty(depth - 1, arrows)),
            7 | 8 => Type::prod(self.ty(depth - 1, arrows), self.ty(depth - 1, arrows)),
            _ if arrows => Type::arrow(self.ty(depth - 1, false), self.ty(depth - 1, arrows)),
            _ => Type::array(self.size(), self.ty(depth - 1, arrows)),
        }
    }

    pub fn first_order_type(&mut self) -> Type {
        self.ty(2, false)
    }

    pub fn value(&mut self, ty: &Type) -> Value {
        match ty {
            Type::Fin(n) => Value::Fin(self.rng.gen_range(0..*n), *n),
            Type::Flt => Value::Flt(self.float()),
            Type::Prod(a, b) => Value::pair(self.value(a), self.value(b)),
            Type::Array(n, t) => Value::arr((0..*n).map(|_| self.value(t)).collect()),
            Type::Arrow(..) => panic!("cannot generate function arguments"),
        }
    }

    fn literal(&mut self, target: &Type, checking: bool) -> Option<Rc<Term>> {
        match target {
            Type::Flt => Some(Term::lit(Const::flt(self.float()), Type::Flt)),
            Type::Fin(m) if *m >= 1 => {
                let k = if checking { self.rng.gen_range(0..*m) } else { m - 1 };
                Some(Term::lit(Const::Nat(k), Type::Fin(*m)))
            }
            _ => None,
        }
    }

    /// Canonical introduction form for `target` built from smaller terms.
    fn intro(&mut self, ctx: &mut Vec<(String, Type)>, depth: u32, target: &Type, checking: bool) -> Rc<Term> {
        match target {
            Type::Prod(a, b) => {
                let x = self.term(ctx, depth, a, checking);
                let y = self.term(ctx, depth, b, checking);
                Term::app(Const::Pair, vec![x, y], target.clone())
            }
            Type::Array(n, t) => {
                let i = self.name("k");
                ctx.push((i.clone(), Type::Fin(*n)));
                let body = self.term(ctx, depth, t, checking);
                ctx.pop();
                Term::new(TermKind::For(i, *n, body), target.clone())
            }
            Type::Arrow(a, b) => {
                let x = self.name("v");
                ctx.push((x.clone(), (**a).clone()));
                let body = self.term(ctx, depth, b, checking);
                ctx.pop();
                Term::new(TermKind::Fun(x, (**a).clone(), body), target.clone())
            }
            _ => self.literal(target, checking).expect("inhabited base type"),
        }
    }

    fn leaf(&mut self, ctx: &mut Vec<(String, Type)>, target: &Type, checking: bool) -> Rc<Term> {
        let vars: Vec<&(String, Type)> = ctx.iter().filter(|(_, t)| t == target).collect();
        if !vars.is_empty() && self.rng.gen_bool(0.5) {
            let (x, t) = vars.choose(&mut self.rng).expect("non-empty");
            return Term::var(x.clone(), t.clone());
        }
        self.intro(ctx, 0, target, checking)
    }

    /// A closed-under-`ctx` term of type `target`. `checking` says whether
    /// the checker will see this position with an expected type.
    pub fn term(&mut self, ctx: &mut Vec<(String, Type)>, depth: u32, target: &Type, checking: bool) -> Rc<Term> {
        if depth <= 1 {
            return self.leaf(ctx, target, checking);
        }
        let d = depth - 1;
        let mut options = vec![
            (Prod::Let, 2),
            (Prod::Ite, 2),
            (Prod::Get, 2),
            (Prod::Fst, 1),
            (Prod::Snd, 1),
            (Prod::App, 1),
            (Prod::Intro, 3),
        ];
        if ctx.iter().any(|(_, t)| t == target) {
            options.push((Prod::Var, 2));
        }
        match target {
            Type::Fin(_) => options.extend([(Prod::FinAdd, 3), (Prod::FinMul, 2)]),
            Type::Flt => options.extend([
                (Prod::FltArith, 5),
                (Prod::Max, 2),
                (Prod::Unary, 2),
                (Prod::Sum, 2),
                (Prod::Shared, 3),
            ]),
            _ => {}
        }
        let prod = options.choose_weighted(&mut self.rng, |(_, w)| *w).expect("non-empty").0;
        match prod {
            Prod::Var => self.leaf(ctx, target, checking),
            Prod::Intro => self.intro(ctx, d, target, checking),
            Prod::Let => {
                let s = self.ty(1, true);
                let bound = self.term(ctx, d, &s, true);
                let x = self.name("v");
                ctx.push((x.clone(), s));
                let body = self.term(ctx, d, target, checking);
                ctx.pop();
                Term::new(TermKind::Let(x, bound, body), target.clone())
            }
            Prod::Ite => {
                let conds: Vec<String> =
                    ctx.iter().filter(|(_, t)| *t == Type::Fin(2)).map(|(x, _)| x.clone()).collect();
                let c = match conds.choose(&mut self.rng) {
                    Some(x) if self.rng.gen_bool(0.7) => Term::var(x.clone(), Type::Fin(2)),
                    _ => self.term(ctx, d, &Type::Fin(2), true),
                };
                let a = self.term(ctx, d, target, checking);
                let b = self.term(ctx, d, target, checking);
                Term::new(TermKind::Ite(c, a, b), target.clone())
            }
            Prod::Get => {
                let n = self.size();
                let arr = self.term(ctx, d, &Type::array(n, target.clone()), false);
                let idx = self.term(ctx, d, &Type::Fin(n), true);
                Term::app(Const::Get, vec![arr, idx], target.clone())
            }
            Prod::Fst | Prod::Snd => {
                let other = self.ty(1, false);
                let (pt, c) = if prod == Prod::Fst {
                    (Type::prod(target.clone(), other), Const::Fst)
                } else {
                    (Type::prod(other, target.clone()), Const::Snd)
                };
                let p = self.term(ctx, d, &pt, false);
                Term::app(c, vec![p], target.clone())
            }
            Prod::App => {
                let a = self.ty(1, false);
                let f = self.term(ctx, d, &Type::arrow(a.clone(), target.clone()), false);
                let x = self.term(ctx, d, &a, true);
                Term::app(Const::App, vec![f, x], target.clone())
            }
            Prod::FinAdd => {
                let Type::Fin(m) = *target else { unreachable!() };
                let n = self.rng.gen_range(1..=m);
                let k = m - n + 1;
                let a = self.term(ctx, d, &Type::Fin(n), false);
                let b = self.term(ctx, d, &Type::Fin(k), false);
                Term::app(Const::Add, vec![a, b], target.clone())
            }
            Prod::FinMul => {
                let Type::Fin(m) = *target else { unreachable!() };
                let (n, k) = if m == 1 {
                    if self.rng.gen_bool(0.5) {
                        (1, self.size())
                    } else {
                        (self.size(), 1)
                    }
                } else {
                    let divisors: Vec<u64> = (1..m).filter(|a| (m - 1) % a == 0).collect();
                    let a = *divisors.choose(&mut self.rng).expect("1 divides");
                    (a + 1, (m - 1) / a + 1)
                };
                let a = self.term(ctx, d, &Type::Fin(n), false);
                let b = self.term(ctx, d, &Type::Fin(k), false);
                Term::app(Const::Mul, vec![a, b], target.clone())
            }
            Prod::FltArith => {
                let c = *[Const::Add, Const::Sub, Const::Mul, Const::Div].choose(&mut self.rng).expect("non-empty");
                let a = self.term(ctx, d, &Type::Flt, checking);
                let b = self.term(ctx, d, &Type::Flt, checking);
                Term::app(c, vec![a, b], Type::Flt)
            }
            Prod::Max => {
                let a = self.term(ctx, d, &Type::Flt, true);
                let b = self.term(ctx, d, &Type::Flt, true);
                Term::app(Const::Max, vec![a, b], Type::Flt)
            }
            Prod::Shared => {
                // the same subterm twice, so lowering emits duplicates
                let c = *[Const::Add, Const::Mul, Const::Max].choose(&mut self.rng).expect("non-empty");
                let a = self.term(ctx, d, &Type::Flt, true);
                let b = self.term(ctx, d, &Type::Flt, true);
                let left = Term::app(c, vec![a.clone(), b], Type::Flt);
                Term::app(Const::Add, vec![left, a], Type::Flt)
            }
            Prod::Unary => {
                let c =
                    *[Const::Log, Const::Sqrt, Const::Exp, Const::NormCdf].choose(&mut self.rng).expect("non-empty");
                let a = self.term(ctx, d, &Type::Flt, true);
                Term::app(c, vec![a], Type::Flt)
            }
            Prod::Sum => {
                let n = self.size();
                let arr_ty = Type::array(n, Type::Flt);
                let arr = if self.rng.gen_bool(0.6) {
                    let i = self.name("k");
                    ctx.push((i.clone(), Type::Fin(n)));
                    let body = self.term(ctx, d, &Type::Flt, true);
                    ctx.pop();
                    Term::new(TermKind::For(i, n, body), arr_ty)
                } else {
                    self.term(ctx, d, &arr_ty, false)
                };
                Term::app(Const::Sum, vec![arr], Type::Flt)
            }
        }
    }

    /// A program with first-order parameters and result.
    pub fn program(&mut self, depth: u32) -> GenProgram {
        let count = self.rng.gen_range(0..=3);
        let mut params: Vec<(String, Type)> = (0..count).map(|k| (format!("p{k}"), self.first_order_type())).collect();
        if self.rng.gen_bool(0.4) {
            params.push((format!("p{count}"), Type::Fin(2)));
        }
        let args = params.iter().map(|(_, t)| self.value(t)).collect();
        let target = self.first_order_type();
        let mut ctx = params.clone();
        let body = self.term(&mut ctx, depth, &target, false);
        GenProgram { params, args, body }
    }
}

/// A closed well-typed term of type `target`, deterministic in `seed`.
pub fn gen_typed_term(seed: u64, depth: u32, target: &Type) -> Rc<Term> {
    Gen::new(seed).term(&mut Vec::new(), depth.max(1), target, false)
}

/// A generated program with parameters, arguments and a first-order result.
pub fn gen_program(seed: u64, depth: u32) -> GenProgram {
    Gen::new(seed).program(depth.max(1))
}
