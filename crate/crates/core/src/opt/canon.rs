//! Env canonicalization: loop indices are renamed by their nesting position
//! and bound, so separate loops over the same range share an index name.

use std::collections::{HashMap, HashSet};

use crate::ainf::{EnvEntry, Prim, Program, VPar};

fn rename_idx(map: &HashMap<String, String>, i: &mut String) {
    if let Some(j) = map.get(i) {
        *i = j.clone();
    }
}

pub fn canon_env(p: &Program) -> Program {
    // Names that canonical indices must avoid.
    let mut reserved: HashSet<String> = p.params.iter().map(|(x, _)| x.clone()).collect();
    for b in &p.bindings {
        reserved.insert(b.var.clone());
        for e in &b.env {
            if let EnvEntry::Fun(i, _) = e {
                reserved.insert(i.clone());
            }
        }
        if let Prim::Fun(i, _, _) = &b.prim {
            reserved.insert(i.clone());
        }
    }

    // A loop index is keyed by the env length at the loop that introduces it.
    let mut intro: HashMap<&str, (usize, u64)> = HashMap::new();
    for b in &p.bindings {
        if let Prim::For(i, n, _) = &b.prim {
            intro.entry(i).or_insert((b.env.len(), *n));
        }
    }

    let mut next = 0usize;
    let mut fresh = |taken: &HashSet<String>| loop {
        next += 1;
        let i = format!("i{next}");
        if !reserved.contains(&i) && !taken.contains(&i) {
            return i;
        }
    };
    let mut key_name: HashMap<(usize, u64), String> = HashMap::new();
    let mut map: HashMap<String, String> = HashMap::new();
    let mut taken: HashSet<String> = HashSet::new();
    let mut order: Vec<String> = Vec::new();
    let mut see = |i: &str, key: (usize, u64), map: &mut HashMap<String, String>, order: &mut Vec<String>| {
        if map.contains_key(i) {
            return;
        }
        let name = match key_name.get(&key) {
            Some(name) => name.clone(),
            None => {
                let name = fresh(&taken);
                taken.insert(name.clone());
                key_name.insert(key, name.clone());
                name
            }
        };
        map.insert(i.to_string(), name);
        order.push(i.to_string());
    };
    for b in &p.bindings {
        for (k, e) in b.env.iter().enumerate() {
            if let EnvEntry::For(i, n) = e {
                let key = intro.get(i.as_str()).copied().unwrap_or((k, *n));
                see(i, key, &mut map, &mut order);
            }
        }
        if let Prim::For(i, n, _) = &b.prim {
            see(i, (b.env.len(), *n), &mut map, &mut order);
        }
    }

    // Two distinct loops in one env must keep distinct names.
    let mut extra = 0usize;
    loop {
        let mut clash = None;
        'scan: for b in &p.bindings {
            let mut loops: Vec<&str> = b
                .env
                .iter()
                .filter_map(|e| match e {
                    EnvEntry::For(i, _) => Some(i.as_str()),
                    _ => None,
                })
                .collect();
            if let Prim::For(i, _, _) = &b.prim {
                loops.push(i);
            }
            let mut seen: HashMap<&str, &str> = HashMap::new();
            for i in loops {
                let c = map[i].as_str();
                if let Some(prev) = seen.insert(c, i) {
                    if prev != i {
                        clash = Some(i.to_string());
                        break 'scan;
                    }
                }
            }
        }
        let Some(i) = clash else { break };
        let name = loop {
            extra += 1;
            let name = format!("i{}", order.len() + extra);
            if !reserved.contains(&name) && !taken.contains(&name) {
                break name;
            }
        };
        taken.insert(name.clone());
        map.insert(i, name);
    }

    let mut out = p.clone();
    for b in &mut out.bindings {
        for e in &mut b.env {
            if let EnvEntry::For(i, _) = e {
                rename_idx(&map, i);
            }
        }
        match &mut b.prim {
            Prim::IdxRef(i) | Prim::For(i, _, _) => rename_idx(&map, i),
            _ => {}
        }
        for v in b.prim.operands_mut() {
            if let VPar::Idx(i, _) = v {
                rename_idx(&map, i);
            }
        }
    }
    if let VPar::Idx(i, _) = &mut out.result {
        rename_idx(&map, i);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::{parse_ainf, validate};

    const TWO_LOOPS: &str = "\
t(xs: 3 => flt): ((3 => flt) × (3 => flt)) :=
let for i1:3, (x0 : flt := xs[i1])
let (x1 : 3 => flt := for i1:3. x0)
let for i2:3, (x2 : flt := xs[i2])
let for i2:3, (x3 : flt := sqrt x2)
let (x4 : 3 => flt := for i2:3. x3)
let (x5 : ((3 => flt) × (3 => flt)) := (x1, x4))
x5
";

    #[test]
    fn equal_loops_share_an_index() {
        let p = canon_env(&parse_ainf(TWO_LOOPS).unwrap());
        assert_eq!(validate(&p), Ok(()));
        assert_eq!(p.bindings[2].to_string(), "let for i1:3, (x2 : flt := xs[i1])");
        assert_eq!(p.bindings[4].to_string(), "let (x4 : 3 => flt := for i1:3. x3)");
        assert_eq!(canon_env(&p), p);
    }

    #[test]
    fn different_bounds_stay_distinct() {
        let src = "\
t(xs: 3 => flt, ys: 2 => flt): ((3 => flt) × (2 => flt)) :=
let for i7:3, (x0 : flt := xs[i7])
let (x1 : 3 => flt := for i7:3. x0)
let for i9:2, (x2 : flt := ys[i9])
let (x3 : 2 => flt := for i9:2. x2)
let (x4 : ((3 => flt) × (2 => flt)) := (x1, x3))
x4
";
        let p = canon_env(&parse_ainf(src).unwrap());
        assert_eq!(p.bindings[0].env, vec![EnvEntry::For("i1".into(), 3)]);
        assert_eq!(p.bindings[2].env, vec![EnvEntry::For("i2".into(), 2)]);
        assert_eq!(validate(&p), Ok(()));
    }

    #[test]
    fn nested_loops() {
        let src = "\
t(w: 2 => 2 => flt): 2 => 2 => flt :=
let for i5:2, for i6:2, (x0 : 2 => flt := w[i5])
let for i5:2, for i6:2, (x1 : flt := x0[i6])
let for i5:2, (x2 : 2 => flt := for i6:2. x1)
let (x3 : 2 => 2 => flt := for i5:2. x2)
x3
";
        let p = canon_env(&parse_ainf(src).unwrap());
        assert_eq!(p.bindings[1].to_string(), "let for i1:2, for i2:2, (x1 : flt := x0[i2])");
        assert_eq!(validate(&p), Ok(()));
    }
}
