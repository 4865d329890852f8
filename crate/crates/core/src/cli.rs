//! Command-line driver.
//!
//! Exit codes: 0 on success, 1 when the program has diagnostics or cannot be
//! read, 2 on usage errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::ainf::write_tsv;
use crate::pipeline::{check_source, compile_checked, Level, Options, STAGES};
use crate::syntax::SizeEnv;
use crate::Diagnostic;

#[derive(Parser, Debug)]
#[command(name = "arrc", version, about = "Compiler for a small total array language")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type-check a program and print the entry's result type.
    Check(Common),
    /// Compile to indexed ANF and print the final listing and stats.
    Compile {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        passes: Passes,
        /// Also print an intermediate stage (norm, lower, canon, licm, cse, dce) or `all`.
        #[arg(long = "dump-stage", value_name = "NAME", value_parser = parse_stage)]
        dump_stage: Vec<String>,
        /// Print the final program as tab-separated records.
        #[arg(long)]
        tsv: bool,
    },
    /// Evaluate the entry at one pipeline level and print the result.
    Run {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        passes: Passes,
        /// Argument `NAME=LITERAL`; `none` when the entry takes no parameters.
        #[arg(long = "arg", value_name = "NAME=LITERAL", value_parser = parse_arg)]
        args: Vec<Option<(String, String)>>,
        /// surface, norm, ainf or opt.
        #[arg(long, default_value = "opt", value_parser = parse_level)]
        level: Level,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Source file.
    file: PathBuf,
    /// Size binding `NAME=NAT`, overriding the declared default.
    #[arg(long = "size", value_name = "NAME=NAT", value_parser = parse_size)]
    sizes: Vec<(String, u64)>,
    /// Entry definition (default: the last one in the file).
    #[arg(long)]
    entry: Option<String>,
}

#[derive(Args, Debug)]
struct Passes {
    #[arg(long = "no-licm")]
    no_licm: bool,
    #[arg(long = "no-cse")]
    no_cse: bool,
    #[arg(long = "no-dce")]
    no_dce: bool,
    /// Do not evaluate operators on literal operands during normalization.
    #[arg(long = "no-fold")]
    no_fold: bool,
    /// Keep additions of zero and multiplications by one.
    #[arg(long = "no-identities")]
    no_identities: bool,
}

impl Passes {
    fn options(&self) -> Options {
        Options {
            fold: !self.no_fold,
            identities: !self.no_identities,
            licm: !self.no_licm,
            cse: !self.no_cse,
            dce: !self.no_dce,
        }
    }
}

fn parse_size(s: &str) -> Result<(String, u64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=NAT, found `{s}`"))?;
    let n = value.trim().parse().map_err(|_| format!("`{value}` is not a natural number"))?;
    Ok((name.trim().to_string(), n))
}

fn parse_arg(s: &str) -> Result<Option<(String, String)>, String> {
    if s == "none" {
        return Ok(None);
    }
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=LITERAL or `none`, found `{s}`"))?;
    Ok(Some((name.trim().to_string(), value.to_string())))
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse()
}

fn parse_stage(s: &str) -> Result<String, String> {
    if s == "all" || s == "norm" || STAGES.contains(&s) {
        Ok(s.to_string())
    } else {
        Err(format!("unknown stage `{s}` (expected norm, {} or all)", STAGES.join(", ")))
    }
}

struct Failure(i32);

fn fail(err: &mut dyn Write, file: &str, d: &Diagnostic) -> Failure {
    let _ = writeln!(err, "{}", d.render(file));
    Failure(1)
}

fn load(common: &Common, err: &mut dyn Write) -> Result<(String, crate::types::Checked), Failure> {
    let file = common.file.display().to_string();
    let src = match std::fs::read_to_string(&common.file) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "{file}: error: {e}");
            return Err(Failure(1));
        }
    };
    let sizes: SizeEnv = common.sizes.iter().cloned().collect();
    match check_source(&src, &sizes, common.entry.as_deref()) {
        Ok(c) => Ok((file, c)),
        Err(d) => Err(fail(err, &file, &d)),
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Check(common) => {
            let (_, checked) = load(&common, err)?;
            let _ = writeln!(out, "{} : {}", checked.entry, checked.result);
        }
        Command::Compile { common, passes, dump_stage, tsv } => {
            let (_, checked) = load(&common, err)?;
            let c = compile_checked(checked, &passes.options());
            let wants = |s: &str| dump_stage.iter().any(|d| d == s || d == "all");
            if wants("norm") {
                let _ = writeln!(out, "== norm ==\n{}\n", c.normal);
            }
            for s in &c.stages {
                if wants(s.name) {
                    let _ = writeln!(out, "== {} ==\n{}", s.name, s.program);
                }
            }
            if tsv {
                let _ = write!(out, "{}", write_tsv(c.final_program()));
            } else {
                let _ = write!(out, "{}", c.final_program());
            }
            let _ = write!(out, "{}", c.stats_report());
        }
        Command::Run { common, passes, args, level } => {
            let (file, checked) = load(&common, err)?;
            let c = compile_checked(checked, &passes.options());
            let given: Vec<(String, String)> = args.into_iter().flatten().collect();
            let values = c.bind_args(&given).map_err(|d| fail(err, &file, &d))?;
            if !c.checked.result.is_first_order() {
                let d = Diagnostic::new(
                    crate::Span::default(),
                    format!("cannot print a value of type `{}`", c.checked.result),
                );
                return Err(fail(err, &file, &d));
            }
            let _ = writeln!(out, "{}", c.run(level, &values));
        }
    }
    Ok(())
}

/// Runs the driver on `args` (including the program name) and returns the
/// exit code.
pub fn main_with(args: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(Failure(code)) => code,
    }
}
