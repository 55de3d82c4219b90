//! Minimal symbolic scalar expressions over named coordinates.
//!
//! Expressions are immutable trees with exact rational constants. They can be
//! parsed from an infix grammar, printed back in a form that reparses to the
//! same tree, differentiated symbolically, simplified structurally and
//! evaluated to `f64`.
//!
//! Simplification is deliberately shallow (constant folding, 0/1 absorption,
//! flattening, collection of identical monomials). Deciding whether two
//! expressions are equal is done numerically, see [`crate::sampling`].

mod diff;
mod display;
mod eval;
mod frame;
mod number;
mod parse;
mod simplify;

use std::collections::BTreeSet;
use std::fmt;
use std::ops;
use std::sync::Arc;

pub use frame::CoordinateFrame;
pub use number::Number;
pub use parse::GRAMMAR;

/// Errors raised by parsing, evaluating or building expressions.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("no value assigned to symbol `{0}`")]
    MissingSymbol(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid coordinate frame: {0}")]
    InvalidFrame(String),
}

/// Elementary functions available in expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }
}

/// A symbolic scalar expression.
///
/// The derived ordering is structural and only used to canonicalize the
/// operand order of sums and products during simplification.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Const(Number),
    Var(Arc<str>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, i64),
    Div(Box<Expr>, Box<Expr>),
    Func(Func, Box<Expr>),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Const(Number::zero())
    }

    pub fn one() -> Expr {
        Expr::Const(Number::one())
    }

    pub fn int(value: i64) -> Expr {
        Expr::Const(Number::from_int(value))
    }

    /// The rational constant `numer / denom`. Panics if `denom == 0`.
    pub fn rational(numer: i64, denom: i64) -> Expr {
        Expr::Const(Number::from_ratio(numer, denom))
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(Arc::from(name))
    }

    pub fn constant(value: Number) -> Expr {
        Expr::Const(value)
    }

    pub fn pow(self, exponent: i64) -> Expr {
        Expr::Pow(Box::new(self), exponent)
    }

    pub fn sin(self) -> Expr {
        Expr::Func(Func::Sin, Box::new(self))
    }

    pub fn cos(self) -> Expr {
        Expr::Func(Func::Cos, Box::new(self))
    }

    pub fn exp(self) -> Expr {
        Expr::Func(Func::Exp, Box::new(self))
    }

    pub fn sqrt(self) -> Expr {
        Expr::Func(Func::Sqrt, Box::new(self))
    }

    pub fn as_const(&self) -> Option<&Number> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Number::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(Number::is_one)
    }

    /// Sum of an iterator of expressions, dropping structural zeros.
    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        let terms: Vec<Expr> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr::Add(terms),
        }
    }

    /// Product of an iterator of expressions; a structural zero factor
    /// collapses the product to zero.
    pub fn product<I: IntoIterator<Item = Expr>>(factors: I) -> Expr {
        let mut out = Vec::new();
        for f in factors {
            if f.is_zero() {
                return Expr::zero();
            }
            if !f.is_one() {
                out.push(f);
            }
        }
        match out.len() {
            0 => Expr::one(),
            1 => out.pop().unwrap(),
            _ => Expr::Mul(out),
        }
    }

    /// All coordinate symbols appearing in the expression.
    pub fn symbols(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().for_each(|x| x.collect_symbols(out)),
            Expr::Pow(b, _) => b.collect_symbols(out),
            Expr::Div(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Expr::Func(_, a) => a.collect_symbols(out),
        }
    }

    pub fn depends_on(&self, name: &str) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(v) => &**v == name,
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().any(|x| x.depends_on(name)),
            Expr::Pow(b, _) => b.depends_on(name),
            Expr::Div(a, b) => a.depends_on(name) || b.depends_on(name),
            Expr::Func(_, a) => a.depends_on(name),
        }
    }

    /// Replace every occurrence of the named symbols by the given expressions.
    pub fn substitute(&self, lookup: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(v) => lookup(v).unwrap_or_else(|| self.clone()),
            Expr::Add(xs) => Expr::Add(xs.iter().map(|x| x.substitute(lookup)).collect()),
            Expr::Mul(xs) => Expr::Mul(xs.iter().map(|x| x.substitute(lookup)).collect()),
            Expr::Pow(b, k) => Expr::Pow(Box::new(b.substitute(lookup)), *k),
            Expr::Div(a, b) => {
                Expr::Div(Box::new(a.substitute(lookup)), Box::new(b.substitute(lookup)))
            }
            Expr::Func(f, a) => Expr::Func(*f, Box::new(a.substitute(lookup))),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Add(xs) | Expr::Mul(xs) => 1 + xs.iter().map(Expr::size).sum::<usize>(),
            Expr::Pow(b, _) => 1 + b.size(),
            Expr::Div(a, b) => 1 + a.size() + b.size(),
            Expr::Func(_, a) => 1 + a.size(),
        }
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl From<i64> for Expr {
    fn from(value: i64) -> Self {
        Expr::int(value)
    }
}

impl From<Number> for Expr {
    fn from(value: Number) -> Self {
        Expr::Const(value)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        display::write_expr(self, f)
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum([self, rhs])
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sum([self, -rhs])
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::product([self, rhs])
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        if rhs.is_one() {
            self
        } else {
            Expr::Div(Box::new(self), Box::new(rhs))
        }
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(-c),
            other => Expr::product([Expr::int(-1), other]),
        }
    }
}

macro_rules! forward_ref_binop {
    ($tr:ident, $method:ident) => {
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                ops::$tr::$method(self.clone(), rhs.clone())
            }
        }
    };
}

forward_ref_binop!(Add, add);
forward_ref_binop!(Sub, sub);
forward_ref_binop!(Mul, mul);
forward_ref_binop!(Div, div);

#[cfg(test)]
mod tests;
