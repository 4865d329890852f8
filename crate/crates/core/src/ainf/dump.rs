//! Tab-separated dump: one record per binding with `env`, `var`, `type` and
//! `prim` fields, preceded by `#` header records for the signature.

use std::fmt::Write as _;

use super::pretty::{parse_ainf, ParseError};
use super::Program;
use crate::diag::Span;

pub fn write_tsv(p: &Program) -> String {
    let mut out = String::new();
    let params: Vec<String> = p.params.iter().map(|(x, t)| format!("{x}: {t}")).collect();
    let _ = writeln!(out, "# name\t{}", p.name);
    let _ = writeln!(out, "# params\t{}", params.join("\t"));
    let _ = writeln!(out, "# result\t{}: {}", p.result, p.result_type());
    for b in &p.bindings {
        let env: Vec<String> = b.env.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "{}\t{}\t{}\t{}", env.join(", "), b.var, b.ty, b.prim);
    }
    out
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { span: Span::new(line as u32, 1), message: message.into() }
}

/// Reads a dump written by [`write_tsv`].
pub fn read_tsv(text: &str) -> Result<Program, ParseError> {
    let (mut name, mut params, mut result) = (None, None, None);
    let mut lets = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let n = k + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields[0] {
            "# name" => name = fields.get(1).map(|s| s.to_string()),
            "# params" => {
                params = Some(fields[1..].iter().filter(|s| !s.is_empty()).copied().collect::<Vec<_>>().join(", "))
            }
            "# result" => result = fields.get(1).map(|s| s.to_string()),
            _ => {
                let [env, var, ty, prim] = fields[..] else {
                    return Err(malformed(n, format!("expected 4 fields, found {}", fields.len())));
                };
                let env = if env.is_empty() { String::new() } else { format!("{env}, ") };
                lets.push(format!("let {env}({var} : {ty} := {prim})"));
            }
        }
    }
    let name = name.ok_or_else(|| malformed(1, "missing `# name` record"))?;
    let params = params.ok_or_else(|| malformed(1, "missing `# params` record"))?;
    let result = result.ok_or_else(|| malformed(1, "missing `# result` record"))?;
    let (res, ty) = result.split_once(": ").ok_or_else(|| malformed(1, "malformed `# result` record"))?;
    let mut src = format!("{name}({params}): {ty} :=\n");
    for l in lets {
        src.push_str(&l);
        src.push('\n');
    }
    src.push_str(res);
    src.push('\n');
    parse_ainf(&src)
}
