//! Big-step interpreter for typed terms.

use std::cell::Cell;
use std::collections::HashMap;
use std::rc::Rc;

use super::ops::apply_const;
use super::value::{FunV, Value};
use crate::types::{Term, TermKind, Type};

#[derive(Clone, Default)]
struct Scope(Option<Rc<(String, Value, Scope)>>);

impl Scope {
    fn bind(&self, x: &str, v: Value) -> Scope {
        Scope(Some(Rc::new((x.to_string(), v, self.clone()))))
    }

    fn lookup(&self, x: &str) -> Option<&Value> {
        let mut s = self;
        while let Some(node) = &s.0 {
            if node.0 == x {
                return Some(&node.1);
            }
            s = &node.2;
        }
        None
    }
}

/// Interpreter with an operation counter (one tick per constant application
/// and per array element produced).
#[derive(Clone, Default)]
pub struct Interp {
    steps: Rc<Cell<u64>>,
}

impl Interp {
    pub fn new() -> Self {
        Interp::default()
    }

    pub fn steps(&self) -> u64 {
        self.steps.get()
    }

    fn tick(&self) {
        self.steps.set(self.steps.get() + 1);
    }

    pub fn eval(&self, env: &HashMap<String, Value>, t: &Term) -> Value {
        let mut scope = Scope::default();
        let mut names: Vec<&String> = env.keys().collect();
        names.sort();
        for x in names {
            scope = scope.bind(x, env[x].clone());
        }
        self.go(&scope, t)
    }

    fn go(&self, scope: &Scope, t: &Term) -> Value {
        match &t.kind {
            TermKind::Var(x) => match scope.lookup(x) {
                Some(v) => v.clone(),
                None => panic!("internal error: unbound variable `{x}` at runtime"),
            },
            TermKind::Const(c, args) => {
                let vals: Vec<Value> = args.iter().map(|a| self.go(scope, a)).collect();
                if !args.is_empty() {
                    self.tick();
                }
                apply_const(c, &vals, &t.ty)
            }
            TermKind::Fun(x, _, body) => {
                let (me, scope, x, body) = (self.clone(), scope.clone(), x.clone(), body.clone());
                Value::Fun(FunV::new(move |v| me.go(&scope.bind(&x, v.clone()), &body)))
            }
            TermKind::For(i, n, body) => {
                let items = (0..*n)
                    .map(|k| {
                        self.tick();
                        self.go(&scope.bind(i, Value::Fin(k, *n)), body)
                    })
                    .collect();
                Value::arr(items)
            }
            TermKind::Ite(c, a, b) => {
                if self.go(scope, c).as_fin() == 1 {
                    self.go(scope, a)
                } else {
                    self.go(scope, b)
                }
            }
            TermKind::Let(x, a, b) => {
                let v = self.go(scope, a);
                self.go(&scope.bind(x, v), b)
            }
        }
    }
}

/// Evaluates `t` with free names bound by `env`.
pub fn eval_term(env: &HashMap<String, Value>, t: &Term) -> Value {
    Interp::new().eval(env, t)
}

/// Evaluates a term under named parameters given in order.
pub fn eval_with_params(params: &[(String, Type)], args: &[Value], body: &Term) -> Value {
    let env: HashMap<String, Value> = params.iter().map(|(x, _)| x.clone()).zip(args.iter().cloned()).collect();
    eval_term(&env, body)
}
