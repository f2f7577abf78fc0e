use std::fmt;

use num::rational::BigRational;
use num::BigInt;

use super::ast::{BinOp, Expr, Loc, Val};
use crate::error::ProbError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("expression is stuck: {what}")]
    Stuck { what: String },
    #[error("unbound variables: {names}")]
    Unbound { names: String },
    #[error(transparent)]
    Prob(#[from] ProbError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Kw(&'static str),
    Sym(&'static str),
}

const KEYWORDS: &[&str] = &[
    "let", "in", "rec", "fun", "if", "then", "else", "alloc", "sample", "fst", "snd", "flip",
    "true", "false",
];

const SYMBOLS: &[&str] = &[
    ";;", ":=", "->", "<=", ">=", "<>", "&&", "||", "(", ")", ",", "=", "<", ">", "+", "-", "*",
    "/", "!", "%", "@",
];

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, LangError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            // comment to end of line
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let n: i64 = src[start..i].parse().map_err(|_| LangError::Syntax {
                pos: start,
                msg: "integer literal out of range".into(),
            })?;
            toks.push((start, Tok::Int(n)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
            {
                i += 1;
            }
            let word = &src[start..i];
            if let Some(kw) = KEYWORDS.iter().find(|k| **k == word) {
                toks.push((start, Tok::Kw(kw)));
            } else {
                toks.push((start, Tok::Ident(word.to_string())));
            }
            continue;
        }
        for sym in SYMBOLS {
            if src[i..].starts_with(sym) {
                toks.push((i, Tok::Sym(sym)));
                i += sym.len();
                continue 'outer;
            }
        }
        return Err(LangError::Syntax { pos: i, msg: format!("unexpected character {c:?}") });
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    src_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.src_len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if let Some(Tok::Sym(t)) = self.peek() {
            if *t == s {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        if let Some(Tok::Kw(w)) = self.peek() {
            if *w == k {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), LangError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{s}`")))
        }
    }

    fn expect_kw(&mut self, k: &str) -> Result<(), LangError> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{k}`")))
        }
    }

    fn expect_ident(&mut self) -> Result<String, LangError> {
        match self.bump() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => {
                self.pos -= 1;
                Err(self.err("expected identifier"))
            }
        }
    }

    fn err(&self, msg: &str) -> LangError {
        LangError::Syntax { pos: self.here(), msg: msg.to_string() }
    }

    // expr := let/rec/fun/if | seq
    fn expr(&mut self) -> Result<Expr, LangError> {
        if self.eat_kw("let") {
            let x = self.expect_ident()?;
            self.expect_sym("=")?;
            let bound = self.expr()?;
            self.expect_kw("in")?;
            let body = self.expr()?;
            return Ok(Expr::let_in(&x, bound, body));
        }
        if self.eat_kw("rec") {
            let f = self.expect_ident()?;
            let x = self.expect_ident()?;
            self.expect_sym("=")?;
            let body = self.expr()?;
            return Ok(Expr::Val(Val::Rec { fname: f, arg: x, body: Box::new(body) }));
        }
        if self.eat_kw("fun") {
            let x = self.expect_ident()?;
            self.expect_sym("->")?;
            let body = self.expr()?;
            return Ok(Expr::lam(&x, body));
        }
        if self.eat_kw("if") {
            let c = self.expr()?;
            self.expect_kw("then")?;
            let t = self.expr()?;
            let e = if self.eat_kw("else") { self.expr()? } else { Expr::Val(Val::Unit) };
            return Ok(Expr::If(Box::new(c), Box::new(t), Box::new(e)));
        }
        self.seq()
    }

    // seq := store (";;" expr)?
    fn seq(&mut self) -> Result<Expr, LangError> {
        let first = self.store()?;
        if self.eat_sym(";;") {
            let rest = self.expr()?;
            return Ok(Expr::let_in("_", first, rest));
        }
        Ok(first)
    }

    // store := or (":=" or)?
    fn store(&mut self) -> Result<Expr, LangError> {
        let lhs = self.or_expr()?;
        if self.eat_sym(":=") {
            let rhs = self.or_expr()?;
            return Ok(Expr::Store(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    // or := and ("||" and)*     (short-circuit: if a then true else b)
    fn or_expr(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.and_expr()?;
        while self.eat_sym("||") {
            let rhs = self.and_expr()?;
            lhs = Expr::If(Box::new(lhs), Box::new(Expr::Val(Val::Bool(true))), Box::new(rhs));
        }
        Ok(lhs)
    }

    // and := cmp ("&&" cmp)*    (short-circuit: if a then b else false)
    fn and_expr(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.cmp()?;
        while self.eat_sym("&&") {
            let rhs = self.cmp()?;
            lhs = Expr::If(Box::new(lhs), Box::new(rhs), Box::new(Expr::Val(Val::Bool(false))));
        }
        Ok(lhs)
    }

    // cmp := add (relop add)?   (non-associative)
    fn cmp(&mut self) -> Result<Expr, LangError> {
        let lhs = self.add()?;
        let op = if self.eat_sym("<=") {
            BinOp::Le
        } else if self.eat_sym(">=") {
            BinOp::Ge
        } else if self.eat_sym("<>") {
            BinOp::Ne
        } else if self.eat_sym("<") {
            BinOp::Lt
        } else if self.eat_sym(">") {
            BinOp::Gt
        } else if self.eat_sym("=") {
            BinOp::Eq
        } else {
            return Ok(lhs);
        };
        let rhs = self.add()?;
        Ok(Expr::BinOp(op, Box::new(lhs), Box::new(rhs)))
    }

    fn add(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.mul()?;
        loop {
            let op = if self.eat_sym("+") {
                BinOp::Add
            } else if self.eat_sym("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.mul()?;
            lhs = Expr::BinOp(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn mul(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat_sym("*") {
                BinOp::Mul
            } else if self.eat_sym("/") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::BinOp(op, Box::new(lhs), Box::new(rhs));
        }
    }

    // unary := "!" unary | "alloc" unary | "sample" unary | "fst" unary | "snd" unary | app
    fn unary(&mut self) -> Result<Expr, LangError> {
        if self.eat_sym("!") {
            return Ok(Expr::Load(Box::new(self.unary()?)));
        }
        if self.eat_kw("alloc") {
            return Ok(Expr::Alloc(Box::new(self.unary()?)));
        }
        if self.eat_kw("sample") {
            return Ok(Expr::Sample(Box::new(self.unary()?)));
        }
        if self.eat_kw("fst") {
            return Ok(Expr::Fst(Box::new(self.unary()?)));
        }
        if self.eat_kw("snd") {
            return Ok(Expr::Snd(Box::new(self.unary()?)));
        }
        self.app()
    }

    // app := atom+
    fn app(&mut self) -> Result<Expr, LangError> {
        let mut e = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            e = Expr::App(Box::new(e), Box::new(arg));
        }
        Ok(e)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Int(_))
                | Some(Tok::Ident(_))
                | Some(Tok::Kw("true"))
                | Some(Tok::Kw("false"))
                | Some(Tok::Kw("flip"))
                | Some(Tok::Sym("("))
                | Some(Tok::Sym("@"))
        )
    }

    fn atom(&mut self) -> Result<Expr, LangError> {
        match self.bump() {
            Some(Tok::Int(n)) => {
                // rational literal n%d
                if self.eat_sym("%") {
                    match self.bump() {
                        Some(Tok::Int(d)) if d != 0 => Ok(Expr::Val(Val::from_number(
                            BigRational::new(BigInt::from(n), BigInt::from(d)),
                        ))),
                        _ => {
                            self.pos -= 1;
                            Err(self.err("expected nonzero denominator after `%`"))
                        }
                    }
                } else {
                    Ok(Expr::int(n))
                }
            }
            Some(Tok::Ident(x)) => Ok(Expr::Var(x)),
            Some(Tok::Kw("true")) => Ok(Expr::Val(Val::Bool(true))),
            Some(Tok::Kw("false")) => Ok(Expr::Val(Val::Bool(false))),
            Some(Tok::Kw("flip")) => Ok(Expr::Sample(Box::new(Expr::Val(Val::from_number(
                BigRational::new(BigInt::from(1), BigInt::from(2)),
            ))))),
            Some(Tok::Sym("@")) => match self.bump() {
                Some(Tok::Int(n)) if n >= 0 => Ok(Expr::Val(Val::Loc(Loc(n as u64)))),
                _ => {
                    self.pos -= 1;
                    Err(self.err("expected location index after `@`"))
                }
            },
            Some(Tok::Sym("(")) => {
                if self.eat_sym(")") {
                    return Ok(Expr::Val(Val::Unit));
                }
                let first = self.expr()?;
                if self.eat_sym(",") {
                    let second = self.expr()?;
                    self.expect_sym(")")?;
                    return Ok(Expr::pair(first, second));
                }
                self.expect_sym(")")?;
                Ok(first)
            }
            Some(Tok::Sym("-")) => match self.bump() {
                Some(Tok::Int(n)) => Ok(Expr::int(-n)),
                _ => {
                    self.pos -= 1;
                    Err(self.err("expected integer after unary `-`"))
                }
            },
            _ => {
                self.pos -= 1;
                Err(self.err("expected an expression"))
            }
        }
    }
}

/// Parse a single closed expression.
pub fn parse(src: &str) -> Result<Expr, LangError> {
    let toks = lex(src)?;
    let mut p = Parser { toks: &toks, pos: 0, src_len: src.len() };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err("trailing input"));
    }
    let free = e.free_vars();
    if !free.is_empty() {
        return Err(LangError::Unbound { names: free.into_iter().collect::<Vec<_>>().join(", ") });
    }
    Ok(e)
}

/// Parse an expression that may mention the given free names (used for
/// programs over declared random-variable names).
pub fn parse_open(src: &str, allowed: &[String]) -> Result<Expr, LangError> {
    let toks = lex(src)?;
    let mut p = Parser { toks: &toks, pos: 0, src_len: src.len() };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err("trailing input"));
    }
    let stray: Vec<String> = e.free_vars().into_iter().filter(|v| !allowed.contains(v)).collect();
    if !stray.is_empty() {
        return Err(LangError::Unbound { names: stray.join(", ") });
    }
    Ok(e)
}

/// Render to concrete syntax; `parse(render(e)) == e` for closed `e`.
pub fn render(e: &Expr) -> String {
    let mut s = String::new();
    write_top(e, &mut s);
    s
}

fn write_top(e: &Expr, out: &mut String) {
    match e {
        Expr::Val(v) => write_val(v, out, true),
        Expr::Var(x) => out.push_str(x),
        Expr::App(f, a) => {
            write_app_spine(f, out);
            out.push(' ');
            write_atom(a, out);
        }
        Expr::Alloc(a) => {
            out.push_str("alloc ");
            write_atom(a, out);
        }
        Expr::Load(a) => {
            out.push('!');
            write_atom(a, out);
        }
        Expr::Store(a, b) => {
            write_atom(a, out);
            out.push_str(" := ");
            write_atom(b, out);
        }
        Expr::BinOp(op, a, b) => {
            write_atom(a, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_atom(b, out);
        }
        Expr::Pair(a, b) => {
            out.push('(');
            write_top(a, out);
            out.push_str(", ");
            write_top(b, out);
            out.push(')');
        }
        Expr::Fst(a) => {
            out.push_str("fst ");
            write_atom(a, out);
        }
        Expr::Snd(a) => {
            out.push_str("snd ");
            write_atom(a, out);
        }
        Expr::If(c, t, e2) => {
            out.push_str("if ");
            write_atom(c, out);
            out.push_str(" then ");
            write_atom(t, out);
            out.push_str(" else ");
            write_atom(e2, out);
        }
        Expr::Sample(a) => {
            out.push_str("sample ");
            write_atom(a, out);
        }
    }
}

fn write_app_spine(e: &Expr, out: &mut String) {
    match e {
        Expr::App(f, a) => {
            write_app_spine(f, out);
            out.push(' ');
            write_atom(a, out);
        }
        _ => write_atom(e, out),
    }
}

fn write_atom(e: &Expr, out: &mut String) {
    match e {
        Expr::Var(x) => out.push_str(x),
        Expr::Val(v) => write_val(v, out, false),
        Expr::Pair(_, _) => write_top(e, out),
        _ => {
            out.push('(');
            write_top(e, out);
            out.push(')');
        }
    }
}

fn write_val(v: &Val, out: &mut String, top: bool) {
    match v {
        Val::Unit => out.push_str("()"),
        Val::Int(n) => {
            if *n < 0 && !top {
                out.push('(');
                out.push_str(&n.to_string());
                out.push(')');
            } else {
                out.push_str(&n.to_string());
            }
        }
        Val::Rat(r) => {
            let body = format!("{}%{}", r.numer(), r.denom());
            if !top {
                out.push('(');
                out.push_str(&body);
                out.push(')');
            } else {
                out.push_str(&body);
            }
        }
        Val::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Val::Loc(l) => {
            out.push('@');
            out.push_str(&l.0.to_string());
        }
        Val::Rec { fname, arg, body } => {
            let inner = if fname == "_" {
                format!("fun {arg} -> {}", render(body))
            } else {
                format!("rec {fname} {arg} = {}", render(body))
            };
            if top {
                out.push_str(&inner);
            } else {
                out.push('(');
                out.push_str(&inner);
                out.push(')');
            }
        }
        Val::Pair(a, b) => {
            out.push('(');
            write_val(a, out, true);
            out.push_str(", ");
            write_val(b, out, true);
            out.push(')');
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_val(self, &mut s, true);
        write!(f, "{s}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(self))
    }
}
