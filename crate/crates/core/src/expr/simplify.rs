use std::collections::BTreeMap;

use super::{Expr, Func, Number};

const MAX_PASSES: usize = 64;

impl Expr {
    /// Structural simplification: constant folding, 0/1 absorption,
    /// flattening of sums and products and collection of identical
    /// monomials. Iterates a single bottom-up pass to a fixed point, so the
    /// result is idempotent.
    pub fn simplify(&self) -> Expr {
        let mut current = pass(self);
        for _ in 0..MAX_PASSES {
            let next = pass(&current);
            if next == current {
                break;
            }
            current = next;
        }
        current
    }
}

fn pass(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Var(_) => e.clone(),
        Expr::Add(terms) => simplify_sum(terms.iter().map(pass)),
        Expr::Mul(factors) => simplify_product(factors.iter().map(pass)),
        Expr::Pow(base, k) => simplify_pow(pass(base), *k),
        Expr::Div(a, b) => simplify_div(pass(a), pass(b)),
        Expr::Func(f, a) => simplify_func(*f, pass(a)),
    }
}

/// Split a simplified term into its rational coefficient and monomial.
fn split_coefficient(term: Expr) -> (Number, Expr) {
    match term {
        Expr::Mul(mut factors) if matches!(factors.first(), Some(Expr::Const(_))) => {
            let Expr::Const(c) = factors.remove(0) else { unreachable!() };
            let mono = if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Mul(factors) };
            (c, mono)
        }
        other => (Number::one(), other),
    }
}

fn with_coefficient(c: Number, mono: Expr) -> Expr {
    if c.is_one() {
        return mono;
    }
    match mono {
        Expr::Mul(mut factors) => {
            factors.insert(0, Expr::Const(c));
            Expr::Mul(factors)
        }
        other => Expr::Mul(vec![Expr::Const(c), other]),
    }
}

fn simplify_sum<I: Iterator<Item = Expr>>(terms: I) -> Expr {
    let mut constant = Number::zero();
    let mut monomials: BTreeMap<Expr, Number> = BTreeMap::new();
    let mut push = |t: Expr, constant: &mut Number| match t {
        Expr::Const(c) => *constant = &*constant + &c,
        other => {
            let (c, mono) = split_coefficient(other);
            let slot = monomials.entry(mono).or_insert_with(Number::zero);
            *slot = &*slot + &c;
        }
    };
    for t in terms {
        match t {
            Expr::Add(inner) => inner.into_iter().for_each(|x| push(x, &mut constant)),
            other => push(other, &mut constant),
        }
    }
    let mut out = Vec::with_capacity(monomials.len() + 1);
    if !constant.is_zero() {
        out.push(Expr::Const(constant));
    }
    for (mono, c) in monomials {
        if !c.is_zero() {
            out.push(with_coefficient(c, mono));
        }
    }
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => Expr::Add(out),
    }
}

fn simplify_product<I: Iterator<Item = Expr>>(factors: I) -> Expr {
    let mut constant = Number::one();
    let mut powers: BTreeMap<Expr, i64> = BTreeMap::new();
    let mut push = |f: Expr, constant: &mut Number| match f {
        Expr::Const(c) => *constant = &*constant * &c,
        Expr::Pow(base, k) => *powers.entry(*base).or_insert(0) += k,
        other => *powers.entry(other).or_insert(0) += 1,
    };
    for f in factors {
        match f {
            Expr::Mul(inner) => inner.into_iter().for_each(|x| push(x, &mut constant)),
            other => push(other, &mut constant),
        }
    }
    if constant.is_zero() {
        return Expr::zero();
    }
    let mut out = Vec::with_capacity(powers.len() + 1);
    if !constant.is_one() {
        out.push(Expr::Const(constant));
    }
    for (base, k) in powers {
        match k {
            0 => {}
            1 => out.push(base),
            _ => out.push(Expr::Pow(Box::new(base), k)),
        }
    }
    match out.len() {
        0 => Expr::one(),
        1 => out.pop().unwrap(),
        _ => Expr::Mul(out),
    }
}

fn simplify_pow(base: Expr, k: i64) -> Expr {
    match (base, k) {
        (_, 0) => Expr::one(),
        (b, 1) => b,
        (Expr::Const(c), k) if !(c.is_zero() && k < 0) => Expr::Const(c.powi(k)),
        (Expr::Pow(inner, j), k) => simplify_pow(*inner, j * k),
        (b, k) => Expr::Pow(Box::new(b), k),
    }
}

fn simplify_div(a: Expr, b: Expr) -> Expr {
    if b.is_one() {
        return a;
    }
    match (&a, &b) {
        (_, Expr::Const(d)) if !d.is_zero() => {
            simplify_product([Expr::Const(d.recip()), a].into_iter())
        }
        (Expr::Const(n), _) if n.is_zero() => Expr::zero(),
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

fn simplify_func(f: Func, arg: Expr) -> Expr {
    if let Expr::Const(c) = &arg {
        match f {
            Func::Sin if c.is_zero() => return Expr::zero(),
            Func::Cos if c.is_zero() => return Expr::one(),
            Func::Exp if c.is_zero() => return Expr::one(),
            Func::Sqrt if c.is_zero() || c.is_one() => return arg,
            _ => {}
        }
    }
    Expr::Func(f, Box::new(arg))
}
