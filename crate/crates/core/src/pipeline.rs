//! The compilation pipeline: parse, check, normalize, lower, optimize.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::ainf::{ainf_eval, stats, Program};
use crate::diag::{Diagnostic, Span};
use crate::eval::{eval_with_params, parse_value, Value};
use crate::lower::to_ainf;
use crate::nbe::Normalizer;
use crate::opt::{canon_env, cse_with_renaming, dce, licm};
use crate::syntax::{desugar, parse_program, SizeEnv};
use crate::types::{check_program, Checked, Term, Type};

/// Which transformations run. All are on by default.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub fold: bool,
    pub identities: bool,
    pub licm: bool,
    pub cse: bool,
    pub dce: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { fold: true, identities: true, licm: true, cse: true, dce: true }
    }
}

/// Names of the indexed-ANF stages, in pipeline order.
pub const STAGES: [&str; 5] = ["lower", "canon", "licm", "cse", "dce"];

#[derive(Clone, Debug)]
pub struct Stage {
    pub name: &'static str,
    pub program: Program,
}

/// Every intermediate result of one compilation.
#[derive(Clone, Debug)]
pub struct Compilation {
    pub checked: Checked,
    pub normal: Rc<Term>,
    /// Indexed-ANF stages that ran, starting with `lower`.
    pub stages: Vec<Stage>,
    /// Variables eliminated by CSE and their replacements.
    pub renaming: Vec<(String, String)>,
}

/// Evaluation level for `run`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Surface,
    Norm,
    Ainf,
    Opt,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Surface, Level::Norm, Level::Ainf, Level::Opt];
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "surface" => Level::Surface,
            "norm" => Level::Norm,
            "ainf" => Level::Ainf,
            "opt" => Level::Opt,
            _ => return Err(format!("unknown level `{s}` (expected surface, norm, ainf or opt)")),
        })
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Surface => "surface",
            Level::Norm => "norm",
            Level::Ainf => "ainf",
            Level::Opt => "opt",
        })
    }
}

/// Parses, desugars and checks `src`.
pub fn check_source(src: &str, sizes: &SizeEnv, entry: Option<&str>) -> Result<Checked, Diagnostic> {
    let prog = parse_program(src)?;
    let d = desugar(&prog, sizes, entry)?;
    check_program(&d)
}

/// Runs the passes after lowering, returning the stages from `lower` on.
pub fn optimize(lowered: Program, opts: &Options) -> (Vec<Stage>, Vec<(String, String)>) {
    let mut stages = vec![Stage { name: "lower", program: lowered }];
    let last = |s: &Vec<Stage>| s.last().expect("lower stage").program.clone();
    stages.push(Stage { name: "canon", program: canon_env(&last(&stages)) });
    if opts.licm {
        stages.push(Stage { name: "licm", program: licm(&last(&stages)) });
    }
    let mut renaming = Vec::new();
    if opts.cse {
        let (p, r) = cse_with_renaming(&last(&stages));
        renaming = r;
        stages.push(Stage { name: "cse", program: p });
    }
    if opts.dce {
        stages.push(Stage { name: "dce", program: dce(&last(&stages)) });
    }
    (stages, renaming)
}

/// Normalizes, lowers and optimizes a checked entry.
pub fn compile_checked(checked: Checked, opts: &Options) -> Compilation {
    let normal = Normalizer::new(opts.fold, opts.identities).normalize_entry(&checked.params, checked.body());
    let lowered = to_ainf(&checked.entry, &checked.params, &normal);
    let (stages, renaming) = optimize(lowered, opts);
    Compilation { checked, normal, stages, renaming }
}

pub fn compile_source(
    src: &str,
    sizes: &SizeEnv,
    entry: Option<&str>,
    opts: &Options,
) -> Result<Compilation, Diagnostic> {
    Ok(compile_checked(check_source(src, sizes, entry)?, opts))
}

impl Compilation {
    pub fn params(&self) -> &[(String, Type)] {
        &self.checked.params
    }

    pub fn lowered(&self) -> &Program {
        &self.stages[0].program
    }

    pub fn final_program(&self) -> &Program {
        &self.stages.last().expect("lower stage").program
    }

    pub fn stage(&self, name: &str) -> Option<&Program> {
        self.stages.iter().find(|s| s.name == name).map(|s| &s.program)
    }

    /// One stats line per stage that ran.
    pub fn stats_report(&self) -> String {
        self.stages.iter().map(|s| stats(&s.program).line(s.name) + "\n").collect()
    }

    /// Parses `NAME=LITERAL` arguments against the entry's parameters.
    pub fn bind_args(&self, given: &[(String, String)]) -> Result<Vec<Value>, Diagnostic> {
        let err = |m: String| Diagnostic::new(Span::default(), m);
        let mut texts: HashMap<&str, &str> = HashMap::new();
        for (x, text) in given {
            if !self.params().iter().any(|(p, _)| p == x) {
                return Err(err(format!("`{}` has no parameter `{x}`", self.checked.entry)));
            }
            if texts.insert(x, text).is_some() {
                return Err(err(format!("argument `{x}` given twice")));
            }
        }
        self.params()
            .iter()
            .map(|(x, t)| {
                let text = texts.get(x.as_str()).ok_or_else(|| err(format!("missing argument `{x}` of type `{t}`")))?;
                parse_value(text, t).map_err(|e| err(format!("argument `{x}`: {e}")))
            })
            .collect()
    }

    /// Evaluates the entry at `level` with positional `args`.
    pub fn run(&self, level: Level, args: &[Value]) -> Value {
        let named = || -> HashMap<String, Value> {
            self.params().iter().map(|(x, _)| x.clone()).zip(args.iter().cloned()).collect()
        };
        match level {
            Level::Surface => eval_with_params(self.params(), args, self.checked.body()),
            Level::Norm => eval_with_params(self.params(), args, &self.normal),
            Level::Ainf => ainf_eval(self.lowered(), &named()),
            Level::Opt => ainf_eval(self.final_program(), &named()),
        }
    }
}
