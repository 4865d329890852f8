//! Interpreter for indexed ANF.
//!
//! Bindings whose env holds only loops and conditions are materialized in
//! order as dense tables over their loop indices; slots whose conditions
//! fail are left absent. Bindings under a function parameter are computed
//! on demand and memoized per argument tuple.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::{EnvEntry, Prim, Program, VPar};
use crate::eval::ops::apply_const;
use crate::eval::{FunV, Value};

type Assign = Vec<(String, Value)>;

fn lookup_index<'a>(assign: &'a Assign, i: &str) -> &'a Value {
    match assign.iter().rev().find(|(j, _)| j == i) {
        Some((_, v)) => v,
        None => panic!("internal error: index `{i}` unassigned"),
    }
}

struct State {
    prog: Program,
    params: HashMap<String, Value>,
    pos: HashMap<String, usize>,
    /// Whether each binding is computed on demand (its env has a `fun`).
    demand: Vec<bool>,
    tables: RefCell<Vec<HashMap<Vec<u64>, Value>>>,
    memo: RefCell<HashMap<(usize, Vec<Value>), Value>>,
    counts: RefCell<Vec<u64>>,
}

fn var(st: &Rc<State>, x: &str, assign: &Assign) -> Value {
    let Some(&k) = st.pos.get(x) else {
        return match st.params.get(x) {
            Some(v) => v.clone(),
            None => panic!("internal error: unbound variable `{x}`"),
        };
    };
    let env = &st.prog.bindings[k].env;
    if st.demand[k] {
        let local: Assign =
            env.iter().filter_map(|e| e.index()).map(|i| (i.to_string(), lookup_index(assign, i).clone())).collect();
        let key = (k, local.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>());
        if let Some(v) = st.memo.borrow().get(&key) {
            return v.clone();
        }
        if !conditions_hold(st, k, &local) {
            panic!("internal error: read of `{x}` where its conditions fail");
        }
        let v = compute(st, k, &local);
        st.memo.borrow_mut().insert(key, v.clone());
        v
    } else {
        let key: Vec<u64> = env
            .iter()
            .filter_map(|e| match e {
                EnvEntry::For(i, _) => Some(lookup_index(assign, i).as_fin()),
                _ => None,
            })
            .collect();
        match st.tables.borrow()[k].get(&key) {
            Some(v) => v.clone(),
            None => panic!("internal error: read of absent slot {key:?} of `{x}`"),
        }
    }
}

fn vpar(st: &Rc<State>, v: &VPar, assign: &Assign) -> Value {
    match v {
        VPar::Var(x, _) => var(st, x, assign),
        VPar::Idx(i, _) => lookup_index(assign, i).clone(),
    }
}

fn conditions_hold(st: &Rc<State>, k: usize, assign: &Assign) -> bool {
    st.prog.bindings[k].env.iter().all(|e| match e {
        EnvEntry::IfTrue(c) => var(st, c, assign).as_fin() != 0,
        EnvEntry::IfFalse(c) => var(st, c, assign).as_fin() == 0,
        _ => true,
    })
}

fn compute(st: &Rc<State>, k: usize, assign: &Assign) -> Value {
    st.counts.borrow_mut()[k] += 1;
    let b = &st.prog.bindings[k];
    match &b.prim {
        Prim::Const(c, args) => {
            let vals: Vec<Value> = args.iter().map(|a| vpar(st, a, assign)).collect();
            apply_const(c, &vals, &b.ty)
        }
        Prim::IdxRef(i) => lookup_index(assign, i).clone(),
        Prim::For(i, n, body) => {
            let mut inner = assign.clone();
            inner.push((i.clone(), Value::Fin(0, *n)));
            let items = (0..*n)
                .map(|j| {
                    inner.last_mut().expect("pushed").1 = Value::Fin(j, *n);
                    vpar(st, body, &inner)
                })
                .collect();
            Value::arr(items)
        }
        Prim::Fun(i, _, body) => {
            let (st, i, body, assign) = (st.clone(), i.clone(), body.clone(), assign.clone());
            Value::Fun(FunV::new(move |arg| {
                let mut inner = assign.clone();
                inner.push((i.clone(), arg.clone()));
                vpar(&st, &body, &inner)
            }))
        }
        Prim::Ite(c, x, y) => {
            if vpar(st, c, assign).as_fin() != 0 {
                vpar(st, x, assign)
            } else {
                vpar(st, y, assign)
            }
        }
    }
}

/// Evaluation of one program, keeping per-binding counters.
pub struct AinfEval {
    state: Rc<State>,
}

impl AinfEval {
    /// Runs all materialized bindings and returns the evaluator.
    pub fn new(prog: &Program, params: &HashMap<String, Value>) -> Self {
        let n = prog.bindings.len();
        let state = Rc::new(State {
            prog: prog.clone(),
            params: params.clone(),
            pos: prog.bindings.iter().enumerate().map(|(k, b)| (b.var.clone(), k)).collect(),
            demand: prog.bindings.iter().map(|b| b.env.iter().any(|e| matches!(e, EnvEntry::Fun(..)))).collect(),
            tables: RefCell::new(vec![HashMap::new(); n]),
            memo: RefCell::new(HashMap::new()),
            counts: RefCell::new(vec![0; n]),
        });
        let ev = AinfEval { state };
        for k in 0..n {
            if !ev.state.demand[k] {
                ev.materialize(k);
            }
        }
        ev
    }

    fn materialize(&self, k: usize) {
        let st = &self.state;
        let loops: Vec<(String, u64)> = st.prog.bindings[k]
            .env
            .iter()
            .filter_map(|e| match e {
                EnvEntry::For(i, n) => Some((i.clone(), *n)),
                _ => None,
            })
            .collect();
        if loops.iter().any(|(_, n)| *n == 0) {
            return;
        }
        let mut tuple = vec![0u64; loops.len()];
        loop {
            let assign: Assign = loops.iter().zip(&tuple).map(|((i, n), v)| (i.clone(), Value::Fin(*v, *n))).collect();
            if conditions_hold(st, k, &assign) {
                let v = compute(st, k, &assign);
                st.tables.borrow_mut()[k].insert(tuple.clone(), v);
            }
            // odometer over the loop bounds, innermost last
            let mut d = loops.len();
            loop {
                if d == 0 {
                    return;
                }
                d -= 1;
                tuple[d] += 1;
                if tuple[d] < loops[d].1 {
                    break;
                }
                tuple[d] = 0;
            }
        }
    }

    /// The program's result.
    pub fn result(&self) -> Value {
        vpar(&self.state, &self.state.prog.result, &Vec::new())
    }

    /// How many times each binding's primitive was evaluated.
    pub fn counts(&self) -> Vec<u64> {
        self.state.counts.borrow().clone()
    }

    /// Number of stored slots of each binding (table entries or memo entries).
    pub fn slots(&self) -> Vec<u64> {
        let st = &self.state;
        let tables = st.tables.borrow();
        let memo = st.memo.borrow();
        (0..st.prog.bindings.len())
            .map(|k| {
                if st.demand[k] {
                    memo.keys().filter(|(j, _)| *j == k).count() as u64
                } else {
                    tables[k].len() as u64
                }
            })
            .collect()
    }
}

/// Evaluates `prog` with its parameters bound by `params`.
pub fn ainf_eval(prog: &Program, params: &HashMap<String, Value>) -> Value {
    AinfEval::new(prog, params).result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::Binding;
    use crate::types::{Const, Type};

    #[test]
    fn single_binding() {
        let p = Program {
            name: "t".into(),
            params: vec![],
            bindings: vec![Binding {
                env: vec![],
                var: "x".into(),
                ty: Type::Flt,
                prim: Prim::Const(Const::flt(2.0), vec![]),
            }],
            result: VPar::Var("x".into(), Type::Flt),
        };
        assert_eq!(ainf_eval(&p, &HashMap::new()), Value::Flt(2.0));
    }

    #[test]
    fn conditional_slots_are_absent() {
        // for i:2. if i then sqrt(v) else 0.0
        let lp = EnvEntry::For("i".into(), 2);
        let c = VPar::Var("c".into(), Type::Fin(2));
        let flt = |x: &str| VPar::Var(x.into(), Type::Flt);
        let p = Program {
            name: "t".into(),
            params: vec![("v".into(), Type::Flt)],
            bindings: vec![
                Binding { env: vec![lp.clone()], var: "c".into(), ty: Type::Fin(2), prim: Prim::IdxRef("i".into()) },
                Binding {
                    env: vec![lp.clone(), EnvEntry::IfTrue("c".into())],
                    var: "a".into(),
                    ty: Type::Flt,
                    prim: Prim::Const(Const::Sqrt, vec![flt("v")]),
                },
                Binding {
                    env: vec![lp.clone(), EnvEntry::IfFalse("c".into())],
                    var: "b".into(),
                    ty: Type::Flt,
                    prim: Prim::Const(Const::flt(0.0), vec![]),
                },
                Binding { env: vec![lp], var: "z".into(), ty: Type::Flt, prim: Prim::Ite(c, flt("a"), flt("b")) },
                Binding {
                    env: vec![],
                    var: "r".into(),
                    ty: Type::array(2, Type::Flt),
                    prim: Prim::For("i".into(), 2, flt("z")),
                },
            ],
            result: VPar::Var("r".into(), Type::array(2, Type::Flt)),
        };
        assert_eq!(crate::ainf::validate(&p), Ok(()));
        let params: HashMap<String, Value> = [("v".to_string(), Value::Flt(9.0))].into_iter().collect();
        let ev = AinfEval::new(&p, &params);
        assert_eq!(ev.result(), Value::arr(vec![Value::Flt(0.0), Value::Flt(3.0)]));
        assert_eq!(ev.counts(), vec![2, 1, 1, 2, 1]);
        assert_eq!(ev.slots(), ev.counts());
    }
}
