//! Common subexpression elimination in one forward pass. A binding whose
//! renamed (env, primitive, type) was already emitted is dropped and its
//! variable renamed to the earlier one for the rest of the program.

use std::collections::HashMap;

use crate::ainf::{Binding, Env, EnvEntry, Prim, Program, VPar};
use crate::types::Type;

type Ren = HashMap<String, String>;

fn ren_var(r: &Ren, x: &mut String) {
    if let Some(y) = r.get(x) {
        *x = y.clone();
    }
}

fn ren_binding(r: &Ren, b: &mut Binding) {
    for e in &mut b.env {
        if let EnvEntry::IfTrue(x) | EnvEntry::IfFalse(x) = e {
            ren_var(r, x);
        }
    }
    for v in b.prim.operands_mut() {
        if let VPar::Var(x, _) = v {
            ren_var(r, x);
        }
    }
}

/// Runs CSE and returns the renaming of every eliminated variable, in
/// elimination order.
pub fn cse_with_renaming(p: &Program) -> (Program, Vec<(String, String)>) {
    let mut r: Ren = HashMap::new();
    let mut order = Vec::new();
    let mut table: HashMap<(Env, Prim, Type), String> = HashMap::new();
    let mut bindings = Vec::new();
    for b in &p.bindings {
        let mut b = b.clone();
        ren_binding(&r, &mut b);
        let key = (b.env.clone(), b.prim.clone(), b.ty.clone());
        match table.get(&key) {
            Some(x) => {
                r.insert(b.var.clone(), x.clone());
                order.push((b.var, x.clone()));
            }
            None => {
                table.insert(key, b.var.clone());
                bindings.push(b);
            }
        }
    }
    let mut result = p.result.clone();
    if let VPar::Var(x, _) = &mut result {
        ren_var(&r, x);
    }
    (Program { bindings, result, ..p.clone() }, order)
}

pub fn cse(p: &Program) -> Program {
    cse_with_renaming(p).0
}

/// Pairs of bindings sharing env, primitive and type.
pub fn cse_duplicates(p: &Program) -> Vec<(String, String)> {
    let mut seen: HashMap<(&Env, &Prim, &Type), &str> = HashMap::new();
    let mut out = Vec::new();
    for b in &p.bindings {
        if let Some(x) = seen.insert((&b.env, &b.prim, &b.ty), &b.var) {
            out.push((x.to_string(), b.var.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::{parse_ainf, validate};

    #[test]
    fn chain_collapses() {
        let src = "\
t(v: flt): flt :=
let (x : flt := sqrt v)
let (y : flt := sqrt v)
let (z : flt := x + y)
let (q : flt := y + x)
let (t : flt := z + v)
let (r : flt := q + v)
r
";
        let p = parse_ainf(src).unwrap();
        let (q, ren) = cse_with_renaming(&p);
        let lines: Vec<String> = q.bindings.iter().map(|b| b.to_string()).collect();
        assert_eq!(lines, ["let (x : flt := sqrt v)", "let (z : flt := x + x)", "let (t : flt := z + v)"]);
        let pairs: Vec<(&str, &str)> = ren.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        assert_eq!(pairs, [("y", "x"), ("q", "z"), ("r", "t")]);
        assert_eq!(q.result.name(), "t");
        assert_eq!(validate(&q), Ok(()));
        assert!(cse_duplicates(&q).is_empty());
        assert_eq!(cse(&q), q);
    }

    #[test]
    fn different_envs_are_not_merged() {
        let src = "\
t(): 2 => flt :=
let (x0 : flt := 1.000000)
let for i1:2, (x1 : flt := 1.000000)
let (x2 : 2 => flt := for i1:2. x1)
x2
";
        let p = parse_ainf(src).unwrap();
        assert_eq!(cse(&p), p);
    }
}
