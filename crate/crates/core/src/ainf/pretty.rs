//! Text form of indexed ANF and its reader.
//!
//! ```text
//! dense(w: 3 => 2 => flt, x: 2 => flt): 3 => flt :=
//! let for i1:3, for i2:2, (x1 : flt := w[i1])
//! ...
//! x9
//! ```

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{Binding, Env, EnvEntry, Prim, Program, VPar};
use crate::diag::{Diagnostic, Span};
use crate::syntax::lexer::{tokenize, Tok};
use crate::syntax::parser::Parser;
use crate::syntax::{SType, SizeEnv};
use crate::types::{fmt_float_literal, Const, Type};

impl fmt::Display for EnvEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnvEntry::For(i, n) => write!(f, "for {i}:{n}"),
            EnvEntry::Fun(i, t) => write!(f, "fun {i}:{t}"),
            EnvEntry::IfTrue(x) => write!(f, "if {x}!=0"),
            EnvEntry::IfFalse(x) => write!(f, "if {x}=0"),
        }
    }
}

impl fmt::Display for VPar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Prim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prim::Const(Const::Nat(n), _) => write!(f, "{n}"),
            Prim::Const(Const::Flt(x), _) => f.write_str(&fmt_float_literal(x.0)),
            Prim::Const(c, args) if c.is_arith() => write!(f, "{} {} {}", args[0], c.name(), args[1]),
            Prim::Const(Const::Get, args) => write!(f, "{}[{}]", args[0], args[1]),
            Prim::Const(Const::Pair, args) => write!(f, "({}, {})", args[0], args[1]),
            Prim::Const(c, args) => {
                f.write_str(c.name())?;
                for a in args {
                    write!(f, " {a}")?;
                }
                Ok(())
            }
            Prim::IdxRef(i) => f.write_str(i),
            Prim::For(i, n, b) => write!(f, "for {i}:{n}. {b}"),
            Prim::Fun(i, t, b) => write!(f, "fun {i}:{t}. {b}"),
            Prim::Ite(c, a, b) => write!(f, "ite {c} {a} {b}"),
        }
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "let ")?;
        for e in &self.env {
            write!(f, "{e}, ")?;
        }
        write!(f, "({} : {} := {})", self.var, self.ty, self.prim)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|(x, t)| format!("{x}: {t}")).collect();
        writeln!(f, "{}({}): {} :=", self.name, params.join(", "), self.result_type())?;
        for b in &self.bindings {
            writeln!(f, "{b}")?;
        }
        writeln!(f, "{}", self.result)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

impl From<crate::syntax::SyntaxError> for ParseError {
    fn from(e: crate::syntax::SyntaxError) -> Self {
        ParseError { span: e.span, message: e.message }
    }
}

impl From<ParseError> for Diagnostic {
    fn from(e: ParseError) -> Self {
        Diagnostic::new(e.span, e.message)
    }
}

type PResult<T> = Result<T, ParseError>;

struct Reader {
    p: Parser,
    vars: HashMap<String, Type>,
}

const UNARY: [Const; 7] = [Const::Sum, Const::Fst, Const::Snd, Const::Log, Const::Sqrt, Const::Exp, Const::NormCdf];

impl Reader {
    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { span: self.p.peek().span, message: message.into() })
    }

    fn ident(&mut self) -> PResult<String> {
        Ok(self.p.ident()?.0)
    }

    fn ty(&mut self) -> PResult<Type> {
        let span = self.p.peek().span;
        let st: SType = self.p.ty()?;
        st.eval(&SizeEnv::new()).map_err(|message| ParseError { span, message })
    }

    fn nat(&mut self) -> PResult<u64> {
        match self.p.peek().tok {
            Tok::Nat(n) => {
                self.p.bump();
                Ok(n)
            }
            ref other => self.err(format!("expected number, found {other}")),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        self.p.expect(&tok)?;
        Ok(())
    }

    /// Resolves `x` as an index of `scope`, else as a variable.
    fn operand(&mut self, scope: &[(String, Type)]) -> PResult<VPar> {
        let span = self.p.peek().span;
        let x = self.ident()?;
        if let Some((_, t)) = scope.iter().rev().find(|(i, _)| *i == x) {
            return Ok(VPar::Idx(x, t.clone()));
        }
        match self.vars.get(&x) {
            Some(t) => Ok(VPar::Var(x, t.clone())),
            None => Err(ParseError { span, message: format!("unbound name `{x}`") }),
        }
    }

    fn float_lit(&mut self) -> PResult<Option<f64>> {
        let neg = matches!(self.p.peek().tok, Tok::Minus);
        let k = usize::from(neg);
        let x = match &self.p.peek_at(k).tok {
            Tok::Float(x) => *x,
            Tok::Ident(s) if s == "inf" => f64::INFINITY,
            Tok::Ident(s) if s == "NaN" => f64::NAN,
            _ if neg => return self.err("expected number after `-`"),
            _ => return Ok(None),
        };
        for _ in 0..=k {
            self.p.bump();
        }
        Ok(Some(if neg { -x } else { x }))
    }

    fn prim(&mut self, scope: &[(String, Type)]) -> PResult<Prim> {
        if let Some(x) = self.float_lit()? {
            return Ok(Prim::Const(Const::flt(x), vec![]));
        }
        match self.p.peek().tok.clone() {
            Tok::Nat(n) => {
                self.p.bump();
                Ok(Prim::Const(Const::Nat(n), vec![]))
            }
            Tok::For => {
                self.p.bump();
                let i = self.ident()?;
                self.expect(Tok::Colon)?;
                let n = self.nat()?;
                self.expect(Tok::Dot)?;
                let mut inner = scope.to_vec();
                inner.push((i.clone(), Type::Fin(n)));
                Ok(Prim::For(i, n, self.operand(&inner)?))
            }
            Tok::Fun => {
                self.p.bump();
                let i = self.ident()?;
                self.expect(Tok::Colon)?;
                let t = self.ty()?;
                self.expect(Tok::Dot)?;
                let mut inner = scope.to_vec();
                inner.push((i.clone(), t.clone()));
                Ok(Prim::Fun(i, t, self.operand(&inner)?))
            }
            Tok::Sum => {
                self.p.bump();
                Ok(Prim::Const(Const::Sum, vec![self.operand(scope)?]))
            }
            Tok::LParen => {
                self.p.bump();
                let a = self.operand(scope)?;
                self.expect(Tok::Comma)?;
                let b = self.operand(scope)?;
                self.expect(Tok::RParen)?;
                Ok(Prim::Const(Const::Pair, vec![a, b]))
            }
            Tok::Ident(name) => {
                let prefix = match name.as_str() {
                    "ite" => {
                        self.p.bump();
                        let c = self.operand(scope)?;
                        let a = self.operand(scope)?;
                        let b = self.operand(scope)?;
                        return Ok(Prim::Ite(c, a, b));
                    }
                    "max" => Some((Const::Max, 2)),
                    "app" => Some((Const::App, 2)),
                    other => UNARY.iter().find(|c| c.name() == other).map(|c| (*c, 1)),
                };
                if let Some((c, arity)) = prefix {
                    self.p.bump();
                    let args = (0..arity).map(|_| self.operand(scope)).collect::<PResult<Vec<_>>>()?;
                    return Ok(Prim::Const(c, args));
                }
                let a = self.operand(scope)?;
                let op = match self.p.peek().tok {
                    Tok::Plus => Const::Add,
                    Tok::Star => Const::Mul,
                    Tok::Minus => Const::Sub,
                    Tok::Slash => Const::Div,
                    Tok::LBracket => {
                        self.p.bump();
                        let i = self.operand(scope)?;
                        self.expect(Tok::RBracket)?;
                        return Ok(Prim::Const(Const::Get, vec![a, i]));
                    }
                    _ => {
                        return match a {
                            VPar::Idx(i, _) => Ok(Prim::IdxRef(i)),
                            VPar::Var(x, _) => self.err(format!("`{x}` is not a primitive")),
                        }
                    }
                };
                self.p.bump();
                let b = self.operand(scope)?;
                Ok(Prim::Const(op, vec![a, b]))
            }
            ref other => self.err(format!("expected primitive, found {other}")),
        }
    }

    fn entry(&mut self) -> PResult<EnvEntry> {
        match self.p.peek().tok {
            Tok::For => {
                self.p.bump();
                let i = self.ident()?;
                self.expect(Tok::Colon)?;
                Ok(EnvEntry::For(i, self.nat()?))
            }
            Tok::Fun => {
                self.p.bump();
                let i = self.ident()?;
                self.expect(Tok::Colon)?;
                Ok(EnvEntry::Fun(i, self.ty()?))
            }
            Tok::If => {
                self.p.bump();
                let x = self.ident()?;
                let positive = if self.p.eat(&Tok::NotEq) {
                    true
                } else {
                    self.expect(Tok::Eq)?;
                    false
                };
                if self.nat()? != 0 {
                    return self.err("conditions compare against 0");
                }
                Ok(if positive { EnvEntry::IfTrue(x) } else { EnvEntry::IfFalse(x) })
            }
            ref other => self.err(format!("expected env entry, found {other}")),
        }
    }

    fn binding(&mut self) -> PResult<Binding> {
        self.expect(Tok::Let)?;
        let mut env: Env = Vec::new();
        while !self.p.at(&Tok::LParen) {
            env.push(self.entry()?);
            self.expect(Tok::Comma)?;
        }
        self.expect(Tok::LParen)?;
        let span = self.p.peek().span;
        let var = self.ident()?;
        self.expect(Tok::Colon)?;
        let ty = self.ty()?;
        self.expect(Tok::ColonEq)?;
        let scope: Vec<(String, Type)> =
            env.iter().filter_map(|e| Some((e.index()?.to_string(), e.index_type()?))).collect();
        let prim = self.prim(&scope)?;
        self.expect(Tok::RParen)?;
        if self.vars.insert(var.clone(), ty.clone()).is_some() {
            return Err(ParseError { span, message: format!("`{var}` is bound twice") });
        }
        Ok(Binding { env, var, ty, prim })
    }

    fn program(&mut self) -> PResult<Program> {
        let name = self.ident()?;
        self.expect(Tok::LParen)?;
        let mut params = Vec::new();
        if !self.p.at(&Tok::RParen) {
            loop {
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let t = self.ty()?;
                self.vars.insert(x.clone(), t.clone());
                params.push((x, t));
                if !self.p.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Colon)?;
        let ret = self.ty()?;
        self.expect(Tok::ColonEq)?;
        let mut bindings = Vec::new();
        while self.p.at(&Tok::Let) {
            bindings.push(self.binding()?);
        }
        let span = self.p.peek().span;
        let result = self.operand(&[])?;
        if *result.ty() != ret {
            return Err(ParseError {
                span,
                message: format!("result `{result}` has type `{}`, header says `{ret}`", result.ty()),
            });
        }
        self.p.expect_eof()?;
        Ok(Program { name, params, bindings, result })
    }
}

/// Reads the text form produced by `Program`'s `Display`.
pub fn parse_ainf(text: &str) -> Result<Program, ParseError> {
    let toks = tokenize(text).map_err(|e| ParseError { span: e.span, message: e.message })?;
    Reader { p: Parser::new(toks), vars: HashMap::new() }.program()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "\
t(v: flt, xs: 2 => flt): 2 => flt :=
let for i1:2, (x1 : fin 2 := i1)
let for i1:2, if x1!=0, (x2 : flt := xs[i1])
let for i1:2, if x1=0, (x3 : flt := -1.500000)
let for i1:2, (x4 : flt := ite x1 x2 x3)
let for i1:2, (x5 : flt := max x4 v)
let (x6 : 2 => flt := for i1:2. x5)
let fun i2:flt, (x7 : flt := i2 * v)
let (x8 : flt -> flt := fun i2:flt. x7)
let (x9 : (flt × flt) := (v, v))
let (x10 : flt := fst x9)
let (x11 : flt := NaN)
x6
";

    #[test]
    fn round_trip() {
        let p = parse_ainf(TEXT).unwrap();
        assert_eq!(p.to_string(), TEXT);
        assert_eq!(p.bindings.len(), 11);
        assert_eq!(p.bindings[0].prim, Prim::IdxRef("i1".into()));
        assert!(matches!(&p.bindings[4].prim, Prim::Const(Const::Max, a) if a[1] == VPar::Var("v".into(), Type::Flt)));
        assert!(matches!(&p.bindings[6].prim, Prim::Const(Const::Mul, a) if a[0] == VPar::Idx("i2".into(), Type::Flt)));
        assert_eq!(crate::ainf::validate(&p), Ok(()));
    }

    #[test]
    fn unbound_operand() {
        let e = parse_ainf("t(): flt :=\nlet (x1 : flt := y + y)\nx1\n").unwrap_err();
        assert_eq!(e.span, Span::new(2, 18));
        assert!(e.message.contains("unbound"));
    }

    #[test]
    fn result_type_must_match_header() {
        let e = parse_ainf("t(a: flt): fin 2 :=\na\n").unwrap_err();
        assert!(e.message.contains("header"));
    }
}
