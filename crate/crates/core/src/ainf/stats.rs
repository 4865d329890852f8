//! Binding statistics and the maximal-fission scan.

use std::fmt;

use super::pretty::parse_ainf;
use super::{env_arity, is_subsequence, Prim, Program, VPar};

/// Binding count and histogram of env arity (number of loop and function
/// indices in a binding's env).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub bindings: usize,
    pub arity0: usize,
    pub arity1: usize,
    pub arity2plus: usize,
}

impl Stats {
    /// `stage=<name> bindings=<k> arity0=<a> arity1=<b> arity2+=<c>`
    pub fn line(&self, stage: &str) -> String {
        format!(
            "stage={stage} bindings={} arity0={} arity1={} arity2+={}",
            self.bindings, self.arity0, self.arity1, self.arity2plus
        )
    }
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "bindings={} arity0={} arity1={} arity2+={}",
            self.bindings, self.arity0, self.arity1, self.arity2plus
        )
    }
}

pub fn stats(p: &Program) -> Stats {
    let mut s = Stats { bindings: p.bindings.len(), ..Stats::default() };
    for b in &p.bindings {
        match env_arity(&b.env) {
            0 => s.arity0 += 1,
            1 => s.arity1 += 1,
            _ => s.arity2plus += 1,
        }
    }
    s
}

/// Bindings that are not a single flat primitive. Each entry names the
/// binding and the problem; an empty list means the program is maximally
/// fissioned.
///
/// A binding passes when its constant has exactly its arity in operands,
/// a `for`/`fun` body is a single binding family under the binding's env
/// extended by the binder, and its printed line reads back unchanged.
pub fn fission_violations(p: &Program) -> Vec<String> {
    let mut out = Vec::new();
    for b in &p.bindings {
        if let Prim::Const(c, args) = &b.prim {
            if args.len() != c.arity() {
                out.push(format!("`{}`: `{}` applied to {} operands", b.var, c.name(), args.len()));
            }
        }
        if let Prim::For(_, _, VPar::Var(x, _)) | Prim::Fun(_, _, VPar::Var(x, _)) = &b.prim {
            let mut inner = b.env.clone();
            inner.push(match &b.prim {
                Prim::For(i, n, _) => super::EnvEntry::For(i.clone(), *n),
                Prim::Fun(i, t, _) => super::EnvEntry::Fun(i.clone(), t.clone()),
                _ => unreachable!(),
            });
            let body_env = p.binding(x).map(|d| &d.env);
            if body_env.is_some_and(|e| !is_subsequence(e, &inner)) {
                out.push(format!("`{}`: loop body `{x}` is not bound under the loop's env", b.var));
            }
        }
    }
    match parse_ainf(&p.to_string()) {
        Ok(q) => {
            for (a, b) in p.bindings.iter().zip(&q.bindings) {
                if a != b {
                    out.push(format!("`{}`: printed line does not read back as one primitive", a.var));
                }
            }
        }
        Err(e) => out.push(format!("listing does not read back: {e}")),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_and_line() {
        let p = parse_ainf(
            "t(xs: 2 => flt): 2 => flt :=\n\
             let (x0 : flt := 0.000000)\n\
             let for i1:2, (x1 : flt := xs[i1])\n\
             let for i1:2, (x2 : flt := max x1 x0)\n\
             let (x3 : 2 => flt := for i1:2. x2)\n\
             x3\n",
        )
        .unwrap();
        let s = stats(&p);
        assert_eq!(s, Stats { bindings: 4, arity0: 2, arity1: 2, arity2plus: 0 });
        assert_eq!(s.line("opt"), "stage=opt bindings=4 arity0=2 arity1=2 arity2+=0");
        assert!(fission_violations(&p).is_empty());
    }
}
