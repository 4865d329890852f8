//! Lowering of normal terms to indexed ANF.
//!
//! Direct-style rendering of the continuation-passing fission translation:
//! each non-variable subterm is bound to a fresh variable under the env of
//! loops, function parameters and conditions enclosing it, and its name is
//! handed to the enclosing construct.

use std::collections::{HashMap, HashSet};

use crate::ainf::{Binding, Env, EnvEntry, Prim, Program, VPar};
use crate::types::{Term, TermKind, Type};

struct Lowerer {
    bindings: Vec<Binding>,
    taken: HashSet<String>,
    next_var: usize,
    next_idx: usize,
}

impl Lowerer {
    fn fresh_var(&mut self) -> String {
        loop {
            let x = format!("x{}", self.next_var);
            self.next_var += 1;
            if self.taken.insert(x.clone()) {
                return x;
            }
        }
    }

    fn fresh_idx(&mut self) -> String {
        loop {
            self.next_idx += 1;
            let i = format!("i{}", self.next_idx);
            if self.taken.insert(i.clone()) {
                return i;
            }
        }
    }

    /// Smart binding: binds `prim` to a fresh variable under `env`.
    fn bind(&mut self, env: &Env, ty: &Type, prim: Prim) -> VPar {
        let var = self.fresh_var();
        self.bindings.push(Binding { env: env.clone(), var: var.clone(), ty: ty.clone(), prim });
        VPar::Var(var, ty.clone())
    }

    fn lower(&mut self, t: &Term, env: &Env, scope: &mut HashMap<String, VPar>) -> VPar {
        match &t.kind {
            TermKind::Var(x) => match scope.get(x) {
                Some(v) => v.clone(),
                None => panic!("internal error: unbound variable `{x}` in lowering"),
            },
            TermKind::Const(c, args) => {
                let xs = args.iter().map(|a| self.lower(a, env, scope)).collect();
                self.bind(env, &t.ty, Prim::Const(*c, xs))
            }
            TermKind::Fun(x, ty, body) => {
                let i = self.fresh_idx();
                let mut inner = env.clone();
                inner.push(EnvEntry::Fun(i.clone(), ty.clone()));
                let b = self.under(x, VPar::Idx(i.clone(), ty.clone()), body, &inner, scope);
                self.bind(env, &t.ty, Prim::Fun(i, ty.clone(), b))
            }
            TermKind::For(x, n, body) => {
                let i = self.fresh_idx();
                let mut inner = env.clone();
                inner.push(EnvEntry::For(i.clone(), *n));
                let b = self.under(x, VPar::Idx(i.clone(), Type::Fin(*n)), body, &inner, scope);
                self.bind(env, &t.ty, Prim::For(i, *n, b))
            }
            TermKind::Ite(c, a, b) => {
                let c = match self.lower(c, env, scope) {
                    // conditions in an env name variables
                    VPar::Idx(i, ty) => self.bind(env, &ty, Prim::IdxRef(i)),
                    v => v,
                };
                let cx = c.name().to_string();
                let mut then_env = env.clone();
                then_env.push(EnvEntry::IfTrue(cx.clone()));
                let a = self.lower(a, &then_env, scope);
                let mut else_env = env.clone();
                else_env.push(EnvEntry::IfFalse(cx));
                let b = self.lower(b, &else_env, scope);
                self.bind(env, &t.ty, Prim::Ite(c, a, b))
            }
            TermKind::Let(x, a, body) => {
                let v = self.lower(a, env, scope);
                self.under(x, v, body, env, scope)
            }
        }
    }

    /// Lowers `body` with source name `x` standing for `v`.
    fn under(&mut self, x: &str, v: VPar, body: &Term, env: &Env, scope: &mut HashMap<String, VPar>) -> VPar {
        let saved = scope.insert(x.to_string(), v);
        let r = self.lower(body, env, scope);
        match saved {
            Some(old) => scope.insert(x.to_string(), old),
            None => scope.remove(x),
        };
        r
    }
}

/// Lowers the body of an entry point whose parameters are free in `body`.
pub fn to_ainf(name: &str, params: &[(String, Type)], body: &Term) -> Program {
    let mut l = Lowerer {
        bindings: Vec::new(),
        taken: params.iter().map(|(x, _)| x.clone()).collect(),
        next_var: 0,
        next_idx: 0,
    };
    let mut scope: HashMap<String, VPar> =
        params.iter().map(|(x, t)| (x.clone(), VPar::Var(x.clone(), t.clone()))).collect();
    let result = l.lower(body, &Vec::new(), &mut scope);
    Program { name: name.to_string(), params: params.to_vec(), bindings: l.bindings, result }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::{ainf_eval, validate};
    use crate::eval::Value;
    use crate::nbe::normalize;
    use crate::syntax::{desugar, parse_program};
    use crate::types::check_program;

    fn lower_src(src: &str, sizes: &[(&str, u64)]) -> Program {
        let p = parse_program(src).unwrap();
        let given = sizes.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let d = desugar(&p, &given, None).unwrap();
        let c = check_program(&d).unwrap();
        let norm = normalize(c.body());
        to_ainf(&c.entry, &c.params, &norm)
    }

    #[test]
    fn bare_parameter_has_no_bindings() {
        let p = lower_src("id(x: flt): flt := x\n", &[]);
        assert!(p.bindings.is_empty());
        assert_eq!(p.result, VPar::Var("x".into(), Type::Flt));
    }

    #[test]
    fn tabulate_lowering() {
        let p = lower_src("t(): 3 => fin 21 := for i:3. 10 * i\n", &[]);
        assert_eq!(validate(&p), Ok(()));
        let text = p.to_string();
        assert_eq!(
            text,
            "t(): 3 => fin 21 :=\n\
             let for i1:3, (x0 : fin 11 := 10)\n\
             let for i1:3, (x1 : fin 21 := x0 * i1)\n\
             let (x2 : 3 => fin 21 := for i1:3. x1)\n\
             x2\n"
        );
        let v = ainf_eval(&p, &HashMap::new());
        assert_eq!(v.to_string(), "[0, 10, 20]");
    }

    #[test]
    fn branches_are_conditional() {
        let src = "f(xs: 2 => flt): 2 => flt := for i:2. if i then sqrt xs[i] else 0.0\n";
        let p = lower_src(src, &[]);
        assert_eq!(validate(&p), Ok(()));
        assert!(p.bindings.iter().any(|b| b.env.iter().any(|e| matches!(e, EnvEntry::IfTrue(_)))));
        assert!(p.bindings.iter().any(|b| matches!(b.prim, Prim::IdxRef(_))));
        let xs = Value::arr(vec![Value::Flt(4.0), Value::Flt(9.0)]);
        let params: HashMap<String, Value> = [("xs".to_string(), xs.clone())].into_iter().collect();
        let want = Value::arr(vec![Value::Flt(0.0), Value::Flt(3.0)]);
        assert_eq!(ainf_eval(&p, &params), want);
    }
}
