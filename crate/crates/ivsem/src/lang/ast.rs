use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::rational::BigRational;
use num::One;

/// A heap location. Locations are runtime artifacts, not source literals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loc(pub u64);

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

/// Values of the language. Closures carry closed bodies.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Val {
    Unit,
    Int(i64),
    Rat(BigRational),
    Bool(bool),
    Loc(Loc),
    Rec { fname: String, arg: String, body: Box<Expr> },
    Pair(Box<Val>, Box<Val>),
}

impl Val {
    pub fn pair(a: Val, b: Val) -> Val {
        Val::Pair(Box::new(a), Box::new(b))
    }

    /// Numeric view; booleans coerce to 0/1 so sums of coin flips work.
    pub fn as_number(&self) -> Option<BigRational> {
        match self {
            Val::Int(n) => Some(BigRational::from_integer((*n).into())),
            Val::Rat(r) => Some(r.clone()),
            Val::Bool(b) => Some(BigRational::from_integer(if *b { 1 } else { 0 }.into())),
            _ => None,
        }
    }

    /// Integral rationals collapse to `Int` so arithmetic results compare
    /// structurally.
    pub fn from_number(r: BigRational) -> Val {
        if r.denom().is_one() {
            match i64::try_from(r.numer().clone()) {
                Ok(n) => Val::Int(n),
                Err(_) => Val::Rat(r),
            }
        } else {
            Val::Rat(r)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    Ne,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Le => "<=",
            BinOp::Lt => "<",
            BinOp::Ge => ">=",
            BinOp::Gt => ">",
            BinOp::Eq => "=",
            BinOp::Ne => "<>",
        }
    }
}

/// Expressions. `let`, `fun`, `flip`, `&&`, `||` and `;;` are parser sugar.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Expr {
    Val(Val),
    Var(String),
    App(Box<Expr>, Box<Expr>),
    Alloc(Box<Expr>),
    Load(Box<Expr>),
    Store(Box<Expr>, Box<Expr>),
    BinOp(BinOp, Box<Expr>, Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    Fst(Box<Expr>),
    Snd(Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    Sample(Box<Expr>),
}

impl Expr {
    pub fn val(v: Val) -> Expr {
        Expr::Val(v)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Val(Val::Int(n))
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }

    pub fn lam(arg: &str, body: Expr) -> Expr {
        Expr::Val(Val::Rec { fname: "_".into(), arg: arg.into(), body: Box::new(body) })
    }

    pub fn let_in(x: &str, bound: Expr, body: Expr) -> Expr {
        Expr::app(Expr::lam(x, body), bound)
    }

    /// Pair constructor; a pair of value literals is itself a value literal.
    pub fn pair(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Val(va), Expr::Val(vb)) => Expr::Val(Val::pair(va, vb)),
            (a, b) => Expr::Pair(Box::new(a), Box::new(b)),
        }
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Expr::Val(_))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Expr::Val(Val::Rec { fname, arg, body }) => {
                bound.push(fname.clone());
                bound.push(arg.clone());
                body.collect_free(bound, out);
                bound.pop();
                bound.pop();
            }
            Expr::Val(Val::Pair(a, b)) => {
                Expr::Val((**a).clone()).collect_free(bound, out);
                Expr::Val((**b).clone()).collect_free(bound, out);
            }
            Expr::Val(_) => {}
            Expr::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x.clone());
                }
            }
            Expr::App(a, b) | Expr::Store(a, b) | Expr::BinOp(_, a, b) | Expr::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Expr::Alloc(a) | Expr::Load(a) | Expr::Fst(a) | Expr::Snd(a) | Expr::Sample(a) => {
                a.collect_free(bound, out)
            }
            Expr::If(c, t, e) => {
                c.collect_free(bound, out);
                t.collect_free(bound, out);
                e.collect_free(bound, out);
            }
        }
    }

    /// Substitute the closed value `v` for `x`. Values are closed, so no
    /// capture can occur.
    pub fn subst(&self, x: &str, v: &Val) -> Expr {
        match self {
            Expr::Val(Val::Rec { fname, arg, body }) if fname != x && arg != x => Expr::Val(Val::Rec {
                fname: fname.clone(),
                arg: arg.clone(),
                body: Box::new(body.subst(x, v)),
            }),
            Expr::Val(w) => Expr::Val(w.clone()),
            Expr::Var(y) => {
                if y == x {
                    Expr::Val(v.clone())
                } else {
                    Expr::Var(y.clone())
                }
            }
            Expr::App(a, b) => Expr::App(Box::new(a.subst(x, v)), Box::new(b.subst(x, v))),
            Expr::Alloc(a) => Expr::Alloc(Box::new(a.subst(x, v))),
            Expr::Load(a) => Expr::Load(Box::new(a.subst(x, v))),
            Expr::Store(a, b) => Expr::Store(Box::new(a.subst(x, v)), Box::new(b.subst(x, v))),
            Expr::BinOp(op, a, b) => Expr::BinOp(*op, Box::new(a.subst(x, v)), Box::new(b.subst(x, v))),
            Expr::Pair(a, b) => Expr::pair(a.subst(x, v), b.subst(x, v)),
            Expr::Fst(a) => Expr::Fst(Box::new(a.subst(x, v))),
            Expr::Snd(a) => Expr::Snd(Box::new(a.subst(x, v))),
            Expr::If(c, t, e) => Expr::If(
                Box::new(c.subst(x, v)),
                Box::new(t.subst(x, v)),
                Box::new(e.subst(x, v)),
            ),
            Expr::Sample(a) => Expr::Sample(Box::new(a.subst(x, v))),
        }
    }
}

/// A program state: the heap.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct State {
    heap: BTreeMap<Loc, Val>,
}

impl State {
    pub fn empty() -> Self {
        State::default()
    }

    pub fn from_heap(heap: BTreeMap<Loc, Val>) -> Self {
        State { heap }
    }

    pub fn get(&self, l: Loc) -> Option<&Val> {
        self.heap.get(&l)
    }

    pub fn contains(&self, l: Loc) -> bool {
        self.heap.contains_key(&l)
    }

    pub fn insert(&mut self, l: Loc, v: Val) {
        self.heap.insert(l, v);
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Loc, &Val)> {
        self.heap.iter()
    }

    pub fn heap(&self) -> &BTreeMap<Loc, Val> {
        &self.heap
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (l, v)) in self.heap.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}:={v}")?;
        }
        write!(f, "]")
    }
}
