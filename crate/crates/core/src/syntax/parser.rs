//! Recursive-descent parser for `.arr` source files.
//!
//! Layout rules: a `let` binding ends at `;` or at a line break (outside
//! brackets), and a definition body ends at the first token that starts a
//! line in column 1.

use std::collections::HashSet;

use thiserror::Error;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use crate::diag::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct SyntaxError {
    pub span: Span,
    pub message: String,
}

impl From<SyntaxError> for Diagnostic {
    fn from(e: SyntaxError) -> Self {
        Diagnostic::new(e.span, e.message)
    }
}

type PResult<T> = Result<T, SyntaxError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layout {
    /// Inside brackets: line breaks are insignificant.
    Free,
    /// Inside a `let` right-hand side: any line break ends the expression.
    Line,
    /// Inside a definition body: a line starting in column 1 ends it.
    Column1,
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    layout: Layout,
}

pub fn parse_program(src: &str) -> Result<SurfaceProgram, SyntaxError> {
    let toks = tokenize(src).map_err(|e| SyntaxError { span: e.span, message: e.message })?;
    let mut p = Parser::new(toks);
    let prog = p.program()?;
    validate_program(&prog)?;
    Ok(prog)
}

/// Parses a single type, e.g. `n => (flt × flt)`.
pub fn parse_type(src: &str) -> Result<SType, SyntaxError> {
    let toks = tokenize(src).map_err(|e| SyntaxError { span: e.span, message: e.message })?;
    let mut p = Parser::new(toks);
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

/// Parses a single expression in free layout.
pub fn parse_expr(src: &str) -> Result<Expr, SyntaxError> {
    let toks = tokenize(src).map_err(|e| SyntaxError { span: e.span, message: e.message })?;
    let mut p = Parser::new(toks);
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

impl Parser {
    pub(crate) fn new(toks: Vec<Token>) -> Self {
        Parser { toks, pos: 0, layout: Layout::Free }
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub(crate) fn peek_at(&self, k: usize) -> &Token {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i]
    }

    pub(crate) fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn at(&self, tok: &Tok) -> bool {
        &self.peek().tok == tok
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.at(tok) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(SyntaxError { span: self.peek().span, message: message.into() })
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> PResult<Token> {
        if self.at(tok) {
            Ok(self.bump())
        } else {
            self.error(format!("expected {tok}, found {}", self.peek().tok))
        }
    }

    pub(crate) fn expect_eof(&mut self) -> PResult<()> {
        if self.at(&Tok::Eof) {
            Ok(())
        } else {
            self.error(format!("unexpected {}", self.peek().tok))
        }
    }

    pub(crate) fn ident(&mut self) -> PResult<(String, Span)> {
        match &self.peek().tok {
            Tok::Ident(x) => {
                let x = x.clone();
                let span = self.bump().span;
                Ok((x, span))
            }
            other => self.error(format!("expected identifier, found {other}")),
        }
    }

    fn nat(&mut self) -> PResult<u64> {
        match self.peek().tok {
            Tok::Nat(n) => {
                self.bump();
                Ok(n)
            }
            ref other => self.error(format!("expected natural number, found {other}")),
        }
    }

    fn with_layout<T>(&mut self, layout: Layout, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let saved = self.layout;
        self.layout = layout;
        let r = f(self);
        self.layout = saved;
        r
    }

    /// Whether the next token is cut off from the current expression by layout.
    fn at_boundary(&self) -> bool {
        let t = self.peek();
        if t.tok == Tok::Eof {
            return true;
        }
        t.nl_before
            && match self.layout {
                Layout::Free => false,
                Layout::Line => true,
                Layout::Column1 => t.span.col == 1,
            }
    }

    // ---- program ---------------------------------------------------------

    fn program(&mut self) -> PResult<SurfaceProgram> {
        let mut prog = SurfaceProgram::default();
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => break,
                _ if !t.nl_before || t.span.col != 1 => {
                    return self.error(format!("unexpected {}; items start in column 1", t.tok));
                }
                Tok::Size => {
                    self.bump();
                    let (name, span) = self.ident()?;
                    let default = if self.eat(&Tok::Eq) { Some(self.nat()?) } else { None };
                    prog.sizes.push(SizeDecl { name, default, span });
                }
                Tok::Ident(_) if self.peek_at(1).tok == Tok::LParen => {
                    let d = self.def()?;
                    prog.defs.push(d);
                }
                other => {
                    return self.error(format!("expected a definition or `size` declaration, found {other}"));
                }
            }
        }
        Ok(prog)
    }

    fn def(&mut self) -> PResult<Def> {
        let (name, span) = self.ident()?;
        self.expect(&Tok::LParen)?;
        let params = self.with_layout(Layout::Free, |p| {
            let mut params = Vec::new();
            if !p.at(&Tok::RParen) {
                loop {
                    let (pname, pspan) = p.ident()?;
                    p.expect(&Tok::Colon)?;
                    let ty = p.ty()?;
                    params.push(Param { name: pname, ty, span: pspan });
                    if !p.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            p.expect(&Tok::RParen)?;
            Ok(params)
        })?;
        let ret = if self.eat(&Tok::Colon) { Some(self.ty()?) } else { None };
        self.expect(&Tok::ColonEq)?;
        let body = self.with_layout(Layout::Column1, |p| p.expr())?;
        let next = self.peek();
        if next.tok != Tok::Eof && !(next.nl_before && next.span.col == 1) {
            return self.error(format!("unexpected {} after definition body", next.tok));
        }
        Ok(Def { name, params, ret, body, span })
    }

    // ---- types -----------------------------------------------------------

    pub(crate) fn ty(&mut self) -> PResult<SType> {
        let lhs = self.array_ty()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.ty()?;
            Ok(SType::Arrow(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn array_ty(&mut self) -> PResult<SType> {
        let save = self.pos;
        if let Ok(n) = self.size() {
            if self.eat(&Tok::FatArrow) {
                let elem = self.array_ty()?;
                return Ok(SType::Array(n, Box::new(elem)));
            }
        }
        self.pos = save;
        self.prod_ty()
    }

    fn prod_ty(&mut self) -> PResult<SType> {
        let lhs = self.atom_ty()?;
        if self.eat(&Tok::Times) {
            let rhs = self.prod_ty()?;
            Ok(SType::Prod(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn atom_ty(&mut self) -> PResult<SType> {
        match self.peek().tok {
            Tok::FltKw => {
                self.bump();
                Ok(SType::Flt)
            }
            Tok::FinKw => {
                self.bump();
                Ok(SType::Fin(self.size_atom()?))
            }
            Tok::LParen => {
                self.bump();
                self.with_layout(Layout::Free, |p| {
                    let a = p.ty()?;
                    let t = if p.eat(&Tok::Comma) {
                        let b = p.ty()?;
                        SType::Prod(Box::new(a), Box::new(b))
                    } else {
                        a
                    };
                    p.expect(&Tok::RParen)?;
                    Ok(t)
                })
            }
            ref other => self.error(format!("expected type, found {other}")),
        }
    }

    pub(crate) fn size(&mut self) -> PResult<SizeExpr> {
        let mut lhs = self.size_term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => SizeOp::Add,
                Tok::Minus => SizeOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.size_term()?;
            lhs = SizeExpr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn size_term(&mut self) -> PResult<SizeExpr> {
        let mut lhs = self.size_atom()?;
        while self.eat(&Tok::Star) {
            let rhs = self.size_atom()?;
            lhs = SizeExpr::Bin(SizeOp::Mul, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn size_atom(&mut self) -> PResult<SizeExpr> {
        match &self.peek().tok {
            Tok::Nat(n) => {
                let n = *n;
                self.bump();
                Ok(SizeExpr::Lit(n))
            }
            Tok::Ident(x) => {
                let x = x.clone();
                self.bump();
                Ok(SizeExpr::Var(x))
            }
            Tok::LParen => {
                self.bump();
                let s = self.with_layout(Layout::Free, |p| p.size())?;
                self.expect(&Tok::RParen)?;
                Ok(s)
            }
            other => self.error(format!("expected size, found {other}")),
        }
    }

    // ---- expressions -----------------------------------------------------

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        let span = self.peek().span;
        match self.peek().tok {
            Tok::Let => self.let_expr(),
            Tok::Fun => {
                self.bump();
                let mut binders = Vec::new();
                loop {
                    let (x, _) = self.ident()?;
                    self.expect(&Tok::Colon)?;
                    let t = self.ty()?;
                    binders.push((x, t));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(&Tok::Dot)?;
                let body = self.expr()?;
                Ok(Expr { kind: ExprKind::Fun { binders, body: Box::new(body) }, span })
            }
            Tok::For => {
                self.bump();
                let mut binders = Vec::new();
                loop {
                    let (i, _) = self.ident()?;
                    let bound = if self.eat(&Tok::Colon) { Some(self.size()?) } else { None };
                    binders.push((i, bound));
                    if !self.eat(&Tok::Comma) && !matches!(self.peek().tok, Tok::Ident(_)) {
                        break;
                    }
                }
                self.expect(&Tok::Dot)?;
                let body = self.expr()?;
                Ok(Expr { kind: ExprKind::For { binders, body: Box::new(body) }, span })
            }
            Tok::Sum if self.sum_has_binder() => {
                self.bump();
                let mut binders = Vec::new();
                loop {
                    let (i, _) = self.ident()?;
                    if !self.at(&Tok::Colon) {
                        return self.error(format!("`sum` binder `{i}` needs an explicit bound, as in `sum {i}:n.`"));
                    }
                    self.bump();
                    binders.push((i, self.size()?));
                    if !self.eat(&Tok::Comma) && !matches!(self.peek().tok, Tok::Ident(_)) {
                        break;
                    }
                }
                self.expect(&Tok::Dot)?;
                let body = self.expr()?;
                Ok(Expr { kind: ExprKind::Sum { binders, body: Box::new(body) }, span })
            }
            Tok::If => {
                self.bump();
                let cond = self.with_layout(Layout::Free, |p| p.expr())?;
                self.expect(&Tok::Then)?;
                let then = self.with_layout(Layout::Free, |p| p.expr())?;
                self.expect(&Tok::Else)?;
                let els = self.expr()?;
                Ok(Expr { kind: ExprKind::If { cond: Box::new(cond), then: Box::new(then), els: Box::new(els) }, span })
            }
            _ => self.additive(),
        }
    }

    /// `sum i:n. e` (binder form) versus `sum xs` (application).
    fn sum_has_binder(&self) -> bool {
        if !matches!(self.peek_at(1).tok, Tok::Ident(_)) {
            return false;
        }
        let after = self.peek_at(2);
        match after.tok {
            Tok::Colon | Tok::Comma => true,
            // `sum x.1` projects; `sum j. e` is a binder missing its bound.
            Tok::Dot => {
                let next = self.peek_at(3);
                !(matches!(next.tok, Tok::Nat(_)) && !after.ws_before && !next.ws_before)
            }
            _ => false,
        }
    }

    fn let_expr(&mut self) -> PResult<Expr> {
        let span = self.expect(&Tok::Let)?.span;
        let (name, _) = self.ident()?;
        let ann = if self.eat(&Tok::Colon) { Some(self.ty()?) } else { None };
        self.expect(&Tok::ColonEq)?;
        let bound = self.with_layout(Layout::Line, |p| p.expr())?;
        if !self.eat(&Tok::Semi) && !self.peek().nl_before {
            return self.error(format!("expected `;` or a line break after `let {name}`, found {}", self.peek().tok));
        }
        if self.at_boundary() {
            return self.error(format!("`let {name}` has no body"));
        }
        let body = self.expr()?;
        Ok(Expr { kind: ExprKind::Let { name, ann, bound: Box::new(bound), body: Box::new(body) }, span })
    }

    fn additive(&mut self) -> PResult<Expr> {
        let mut lhs = self.multiplicative()?;
        loop {
            if self.at_boundary() {
                break;
            }
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            let span = self.bump().span;
            let rhs = self.multiplicative()?;
            lhs = Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span };
        }
        Ok(lhs)
    }

    fn multiplicative(&mut self) -> PResult<Expr> {
        let mut lhs = self.application()?;
        loop {
            if self.at_boundary() {
                break;
            }
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            let span = self.bump().span;
            let rhs = self.application()?;
            lhs = Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span };
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        match self.peek().tok {
            Tok::Ident(_) | Tok::Nat(_) | Tok::Float(_) | Tok::LParen => true,
            Tok::Sum => !self.sum_has_binder(),
            _ => false,
        }
    }

    fn application(&mut self) -> PResult<Expr> {
        let head = self.postfix()?;
        let mut args = Vec::new();
        while !self.at_boundary() && self.starts_atom() {
            args.push(self.postfix()?);
        }
        if args.is_empty() {
            Ok(head)
        } else {
            let span = head.span;
            Ok(Expr { kind: ExprKind::Juxt(Box::new(head), args), span })
        }
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::LBracket if !self.at_boundary() => {
                    self.bump();
                    let idx = self.with_layout(Layout::Free, |p| {
                        let mut idx = vec![p.expr()?];
                        while p.eat(&Tok::Comma) {
                            idx.push(p.expr()?);
                        }
                        p.expect(&Tok::RBracket)?;
                        Ok(idx)
                    })?;
                    let span = e.span;
                    e = Expr { kind: ExprKind::Index(Box::new(e), idx), span };
                }
                Tok::LParen if !t.ws_before => {
                    self.bump();
                    let args = self.with_layout(Layout::Free, |p| {
                        let mut args = Vec::new();
                        if !p.at(&Tok::RParen) {
                            args.push(p.expr()?);
                            while p.eat(&Tok::Comma) {
                                args.push(p.expr()?);
                            }
                        }
                        p.expect(&Tok::RParen)?;
                        Ok(args)
                    })?;
                    let span = e.span;
                    e = Expr { kind: ExprKind::Call(Box::new(e), args), span };
                }
                Tok::Dot if !t.ws_before => {
                    let next = self.peek_at(1).clone();
                    match next.tok {
                        Tok::Nat(k @ (1 | 2)) if !next.ws_before => {
                            self.bump();
                            self.bump();
                            let span = e.span;
                            e = Expr { kind: ExprKind::Proj(Box::new(e), k as u8), span };
                        }
                        _ => break,
                    }
                }
                _ => break,
            }
        }
        Ok(e)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        let kind = match t.tok {
            Tok::Nat(n) => {
                self.bump();
                ExprKind::Nat(n)
            }
            Tok::Float(x) => {
                self.bump();
                ExprKind::Float(x)
            }
            Tok::Ident(ref x) => {
                self.bump();
                ExprKind::Var(x.clone())
            }
            Tok::Sum => {
                self.bump();
                ExprKind::Var("sum".into())
            }
            Tok::LParen => {
                self.bump();
                return self.with_layout(Layout::Free, |p| {
                    let a = p.expr()?;
                    if p.eat(&Tok::Comma) {
                        let b = p.expr()?;
                        p.expect(&Tok::RParen)?;
                        Ok(Expr { kind: ExprKind::Pair(Box::new(a), Box::new(b)), span: t.span })
                    } else {
                        p.expect(&Tok::RParen)?;
                        Ok(a)
                    }
                });
            }
            ref other => return self.error(format!("expected expression, found {other}")),
        };
        Ok(Expr { kind, span: t.span })
    }
}

fn check_sizes_declared(ty: &SType, declared: &HashSet<&str>, span: Span) -> PResult<()> {
    let mut vars = Vec::new();
    ty.size_vars(&mut vars);
    check_size_names(&vars, declared, span)
}

fn check_size_names(vars: &[String], declared: &HashSet<&str>, span: Span) -> PResult<()> {
    match vars.iter().find(|v| !declared.contains(v.as_str())) {
        Some(v) => Err(SyntaxError { span, message: format!("undeclared size variable `{v}`") }),
        None => Ok(()),
    }
}

fn check_expr_sizes(e: &Expr, declared: &HashSet<&str>) -> PResult<()> {
    let sub = |x: &Expr| check_expr_sizes(x, declared);
    match &e.kind {
        ExprKind::Nat(_) | ExprKind::Float(_) | ExprKind::Var(_) => Ok(()),
        ExprKind::Binary(_, a, b) | ExprKind::Pair(a, b) => {
            sub(a)?;
            sub(b)
        }
        ExprKind::Juxt(h, args) | ExprKind::Call(h, args) | ExprKind::Index(h, args) => {
            sub(h)?;
            args.iter().try_for_each(sub)
        }
        ExprKind::Proj(a, _) => sub(a),
        ExprKind::Let { ann, bound, body, .. } => {
            if let Some(t) = ann {
                check_sizes_declared(t, declared, e.span)?;
            }
            sub(bound)?;
            sub(body)
        }
        ExprKind::Fun { binders, body } => {
            for (_, t) in binders {
                check_sizes_declared(t, declared, e.span)?;
            }
            sub(body)
        }
        ExprKind::For { binders, body } => {
            for (_, n) in binders {
                if let Some(n) = n {
                    let mut vs = Vec::new();
                    n.vars(&mut vs);
                    check_size_names(&vs, declared, e.span)?;
                }
            }
            sub(body)
        }
        ExprKind::Sum { binders, body } => {
            for (_, n) in binders {
                let mut vs = Vec::new();
                n.vars(&mut vs);
                check_size_names(&vs, declared, e.span)?;
            }
            sub(body)
        }
        ExprKind::If { cond, then, els } => {
            sub(cond)?;
            sub(then)?;
            sub(els)
        }
    }
}

fn validate_program(p: &SurfaceProgram) -> PResult<()> {
    let mut declared = HashSet::new();
    for s in &p.sizes {
        if !declared.insert(s.name.as_str()) {
            return Err(SyntaxError { span: s.span, message: format!("duplicate size parameter `{}`", s.name) });
        }
    }
    let mut names = HashSet::new();
    for d in &p.defs {
        if !names.insert(d.name.as_str()) {
            return Err(SyntaxError { span: d.span, message: format!("duplicate definition `{}`", d.name) });
        }
        let mut params = HashSet::new();
        for prm in &d.params {
            if !params.insert(prm.name.as_str()) {
                return Err(SyntaxError {
                    span: prm.span,
                    message: format!("duplicate parameter `{}` in `{}`", prm.name, d.name),
                });
            }
            check_sizes_declared(&prm.ty, &declared, prm.span)?;
        }
        if let Some(r) = &d.ret {
            check_sizes_declared(r, &declared, d.span)?;
        }
        check_expr_sizes(&d.body, &declared)?;
    }
    Ok(())
}
