//! Printing in the parser's grammar.
//!
//! The printer parenthesizes exactly enough that `parse(print(e))` rebuilds
//! the same tree for every tree the parser can produce: nested sums and
//! products keep their grouping and `p/q` constants never fuse with a
//! neighbouring division.

use std::fmt::{self, Write};

use super::{Expr, Number};

pub(super) fn write_expr(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut s = String::new();
    emit(e, &mut s);
    f.write_str(&s)
}

fn write_number(c: &Number, out: &mut String) {
    if c.is_integer() {
        let _ = write!(out, "{}", c.numer());
    } else {
        let _ = write!(out, "{}/{}", c.numer(), c.denom());
    }
}

fn emit(e: &Expr, out: &mut String) {
    match e {
        Expr::Const(c) => write_number(c, out),
        Expr::Var(v) => out.push_str(v),
        Expr::Add(terms) => {
            for (i, t) in terms.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                emit_wrapped(t, matches!(t, Expr::Add(_)), out);
            }
        }
        Expr::Mul(factors) => {
            for (i, x) in factors.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                let wrap = matches!(x, Expr::Add(_) | Expr::Mul(_) | Expr::Div(..));
                emit_wrapped(x, wrap, out);
            }
        }
        Expr::Div(a, b) => {
            emit_wrapped(a, matches!(**a, Expr::Add(_)), out);
            out.push('/');
            let plain = matches!(**b, Expr::Var(_) | Expr::Func(..) | Expr::Pow(..));
            emit_wrapped(b, !plain, out);
        }
        Expr::Pow(base, k) => {
            let plain = match &**base {
                Expr::Var(_) | Expr::Func(..) => true,
                Expr::Const(c) => c.is_integer() && !c.is_negative(),
                _ => false,
            };
            emit_wrapped(base, !plain, out);
            let _ = write!(out, "^{k}");
        }
        Expr::Func(func, arg) => {
            out.push_str(func.name());
            out.push('(');
            emit(arg, out);
            out.push(')');
        }
    }
}

fn emit_wrapped(e: &Expr, wrap: bool, out: &mut String) {
    if wrap {
        out.push('(');
        emit(e, out);
        out.push(')');
    } else {
        emit(e, out);
    }
}
