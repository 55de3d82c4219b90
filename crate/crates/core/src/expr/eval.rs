use std::collections::HashMap;

use super::{Expr, ExprError, Func};

impl Expr {
    /// Evaluate with values supplied by `lookup`.
    pub fn eval_with(&self, lookup: &dyn Fn(&str) -> Option<f64>) -> Result<f64, ExprError> {
        let v = match self {
            Expr::Const(c) => c.to_f64(),
            Expr::Var(name) => {
                lookup(name).ok_or_else(|| ExprError::MissingSymbol(name.to_string()))?
            }
            Expr::Add(terms) => {
                let mut acc = 0.0;
                for t in terms {
                    acc += t.eval_with(lookup)?;
                }
                acc
            }
            Expr::Mul(factors) => {
                let mut acc = 1.0;
                for f in factors {
                    acc *= f.eval_with(lookup)?;
                }
                acc
            }
            Expr::Pow(base, k) => {
                let b = base.eval_with(lookup)?;
                if b == 0.0 && *k < 0 {
                    return Err(ExprError::Domain(format!("zero raised to negative power in {self}")));
                }
                match i32::try_from(*k) {
                    Ok(k) => b.powi(k),
                    Err(_) => b.powf(*k as f64),
                }
            }
            Expr::Div(a, b) => {
                let d = b.eval_with(lookup)?;
                if d == 0.0 {
                    return Err(ExprError::Domain(format!("division by zero in {self}")));
                }
                a.eval_with(lookup)? / d
            }
            Expr::Func(f, arg) => {
                let x = arg.eval_with(lookup)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(ExprError::Domain(format!("sqrt of negative value in {self}")));
                        }
                        x.sqrt()
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ExprError::Domain(format!("non-finite value in {self}")))
        }
    }

    /// Evaluate with a name → value assignment.
    pub fn evaluate(&self, assignment: &HashMap<String, f64>) -> Result<f64, ExprError> {
        self.eval_with(&|name| assignment.get(name).copied())
    }
}
