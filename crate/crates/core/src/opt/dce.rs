//! Dead-code elimination: projections of known pairs are forwarded to the
//! component, then bindings not reachable backwards from the result are
//! removed.

use std::collections::{HashMap, HashSet};

use super::vars_read;
use crate::ainf::{EnvEntry, Prim, Program, VPar};
use crate::types::Const;

/// Replaces uses of `y := fst x` (or `snd`) where `x := (a, b)` by `a` (or `b`).
fn forward_projections(p: &Program) -> Program {
    let mut pairs: HashMap<&str, (&VPar, &VPar)> = HashMap::new();
    let mut alias: HashMap<String, VPar> = HashMap::new();
    let mut out = p.clone();
    let resolve = |alias: &HashMap<String, VPar>, v: &mut VPar| {
        if let VPar::Var(x, _) = v {
            if let Some(a) = alias.get(x.as_str()) {
                *v = a.clone();
            }
        }
    };
    for (b, orig) in out.bindings.iter_mut().zip(&p.bindings) {
        for e in &mut b.env {
            if let EnvEntry::IfTrue(x) | EnvEntry::IfFalse(x) = e {
                if let Some(VPar::Var(a, _)) = alias.get(x.as_str()) {
                    *x = a.clone();
                }
            }
        }
        for v in b.prim.operands_mut() {
            resolve(&alias, v);
        }
        match (&b.prim, &orig.prim) {
            (Prim::Const(Const::Pair, _), Prim::Const(Const::Pair, args)) => {
                // Components are recorded before renaming; aliases are looked up below.
                pairs.insert(&orig.var, (&args[0], &args[1]));
            }
            (Prim::Const(c @ (Const::Fst | Const::Snd), args), _) => {
                if let VPar::Var(x, _) = &args[0] {
                    if let Some(&(l, r)) = pairs.get(x.as_str()) {
                        let mut comp = if *c == Const::Fst { l.clone() } else { r.clone() };
                        resolve(&alias, &mut comp);
                        // Index components are only meaningful inside their env.
                        if matches!(comp, VPar::Var(..)) {
                            alias.insert(b.var.clone(), comp);
                        }
                    }
                }
            }
            _ => {}
        }
    }
    resolve(&alias, &mut out.result);
    out
}

pub fn dce(p: &Program) -> Program {
    let mut out = forward_projections(p);
    let mut live: HashSet<String> = HashSet::new();
    if let VPar::Var(x, _) = &out.result {
        live.insert(x.clone());
    }
    for b in out.bindings.iter().rev() {
        if live.contains(b.var.as_str()) {
            live.extend(vars_read(b).map(str::to_string));
        }
    }
    out.bindings.retain(|b| live.contains(b.var.as_str()));
    out
}
