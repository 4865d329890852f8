//! Loop-invariant code motion: a loop entry is dropped from a binding's env
//! when neither its primitive nor anything it reads depends on that index.
//! Uses need no change, since a binding is visible from any env that
//! contains its own env as a subsequence.

use std::collections::{HashMap, HashSet};

use super::vars_read;
use crate::ainf::{Binding, Env, EnvEntry, Program};

/// Index names a binding depends on: its primitive's indices and the
/// indices of the envs of every variable it reads.
fn needed<'a>(b: &'a Binding, envs: &'a HashMap<String, Env>) -> HashSet<&'a str> {
    let mut out = b.prim.indices_used();
    for x in vars_read(b) {
        if let Some(env) = envs.get(x) {
            out.extend(env.iter().filter_map(EnvEntry::index));
        }
    }
    out
}

pub fn licm(p: &Program) -> Program {
    let mut envs: HashMap<String, Env> = HashMap::new();
    let mut out = p.clone();
    for b in &mut out.bindings {
        let keep = needed(b, &envs);
        let env: Env = b
            .env
            .iter()
            .filter(|e| match e {
                EnvEntry::For(i, _) => keep.contains(i.as_str()),
                _ => true,
            })
            .cloned()
            .collect();
        b.env = env;
        envs.insert(b.var.clone(), b.env.clone());
    }
    out
}

/// Pairs `(var, index)` of loop entries that `licm` would drop.
pub fn licm_violations(p: &Program) -> Vec<(String, String)> {
    let envs: HashMap<String, Env> = p.bindings.iter().map(|b| (b.var.clone(), b.env.clone())).collect();
    let mut out = Vec::new();
    for b in &p.bindings {
        let keep = needed(b, &envs);
        for e in &b.env {
            if let EnvEntry::For(i, _) = e {
                if !keep.contains(i.as_str()) {
                    out.push((b.var.clone(), i.clone()));
                }
            }
        }
    }
    out
}
