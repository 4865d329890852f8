//! Optimization passes over indexed ANF.
//!
//! The standard order is `canon_env`, `licm`, `cse`, `dce`. Each pass is a
//! pure function from program to program and preserves validation and
//! evaluation.

mod canon;
mod cse;
mod dce;
mod licm;

pub use canon::canon_env;
pub use cse::{cse, cse_duplicates, cse_with_renaming};
pub use dce::dce;
pub use licm::{licm, licm_violations};

use crate::ainf::{Binding, EnvEntry, VPar};

/// Variables named by a binding: prim operands and env condition variables.
pub(crate) fn vars_read(b: &Binding) -> impl Iterator<Item = &str> {
    let ops = b.prim.operands().into_iter().filter_map(VPar::var_name);
    let conds = b.env.iter().filter_map(EnvEntry::cond);
    ops.chain(conds)
}
