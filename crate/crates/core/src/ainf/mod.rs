//! Indexed administrative normal form: a flat list of bindings, each under
//! a scope context of loop indices, function parameters and conditions.

mod dump;
mod eval;
mod pretty;
mod stats;
mod validate;

use std::collections::HashSet;

pub use dump::{read_tsv, write_tsv};
pub use eval::{ainf_eval, AinfEval};
pub use pretty::{parse_ainf, ParseError};
pub use stats::{fission_violations, stats, Stats};
pub use validate::{is_subsequence, validate, ValidationError, ValidationKind};

use crate::types::{Const, Type};

/// A variable or an index, with its type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VPar {
    Var(String, Type),
    Idx(String, Type),
}

impl VPar {
    pub fn name(&self) -> &str {
        match self {
            VPar::Var(x, _) | VPar::Idx(x, _) => x,
        }
    }

    pub fn ty(&self) -> &Type {
        match self {
            VPar::Var(_, t) | VPar::Idx(_, t) => t,
        }
    }

    pub fn var_name(&self) -> Option<&str> {
        match self {
            VPar::Var(x, _) => Some(x),
            VPar::Idx(..) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EnvEntry {
    For(String, u64),
    Fun(String, Type),
    IfTrue(String),
    IfFalse(String),
}

impl EnvEntry {
    /// The index this entry binds, if any.
    pub fn index(&self) -> Option<&str> {
        match self {
            EnvEntry::For(i, _) | EnvEntry::Fun(i, _) => Some(i),
            _ => None,
        }
    }

    pub fn index_type(&self) -> Option<Type> {
        match self {
            EnvEntry::For(_, n) => Some(Type::Fin(*n)),
            EnvEntry::Fun(_, t) => Some(t.clone()),
            _ => None,
        }
    }

    /// The condition variable of an `if` entry.
    pub fn cond(&self) -> Option<&str> {
        match self {
            EnvEntry::IfTrue(x) | EnvEntry::IfFalse(x) => Some(x),
            _ => None,
        }
    }
}

pub type Env = Vec<EnvEntry>;

/// Number of index entries (loops and function parameters) in `env`.
pub fn env_arity(env: &Env) -> usize {
    env.iter().filter(|e| e.index().is_some()).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Prim {
    Const(Const, Vec<VPar>),
    /// Reference to an index of the enclosing env.
    IdxRef(String),
    Fun(String, Type, VPar),
    For(String, u64, VPar),
    Ite(VPar, VPar, VPar),
}

impl Prim {
    /// Operands in order. For `for`/`fun` this is the body.
    pub fn operands(&self) -> Vec<&VPar> {
        match self {
            Prim::Const(_, args) => args.iter().collect(),
            Prim::IdxRef(_) => Vec::new(),
            Prim::Fun(_, _, b) | Prim::For(_, _, b) => vec![b],
            Prim::Ite(c, a, b) => vec![c, a, b],
        }
    }

    pub fn operands_mut(&mut self) -> Vec<&mut VPar> {
        match self {
            Prim::Const(_, args) => args.iter_mut().collect(),
            Prim::IdxRef(_) => Vec::new(),
            Prim::Fun(_, _, b) | Prim::For(_, _, b) => vec![b],
            Prim::Ite(c, a, b) => vec![c, a, b],
        }
    }

    /// Index names this primitive reads from its env.
    pub fn indices_used(&self) -> HashSet<&str> {
        let mut out: HashSet<&str> = self
            .operands()
            .into_iter()
            .filter_map(|v| match v {
                VPar::Idx(i, _) => Some(i.as_str()),
                VPar::Var(..) => None,
            })
            .collect();
        if let Prim::IdxRef(i) = self {
            out.insert(i);
        }
        // The binder of a `for`/`fun` prim is local to its body.
        if let Prim::For(i, _, _) | Prim::Fun(i, _, _) = self {
            out.remove(i.as_str());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binding {
    pub env: Env,
    pub var: String,
    pub ty: Type,
    pub prim: Prim,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub name: String,
    pub params: Vec<(String, Type)>,
    pub bindings: Vec<Binding>,
    pub result: VPar,
}

impl Program {
    pub fn binding(&self, var: &str) -> Option<&Binding> {
        self.bindings.iter().find(|b| b.var == var)
    }

    pub fn result_type(&self) -> &Type {
        self.result.ty()
    }
}
