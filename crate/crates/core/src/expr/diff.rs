use super::{Expr, Func};

impl Expr {
    /// Exact partial derivative with respect to the coordinate `var`,
    /// simplified. Symbols other than `var` are treated as constants.
    pub fn differentiate(&self, var: &str) -> Expr {
        derive(self, var).simplify()
    }
}

fn derive(e: &Expr, var: &str) -> Expr {
    if !e.depends_on(var) {
        return Expr::zero();
    }
    match e {
        Expr::Const(_) => Expr::zero(),
        Expr::Var(v) => {
            if &**v == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Expr::Add(terms) => Expr::sum(terms.iter().map(|t| derive(t, var))),
        Expr::Mul(factors) => Expr::sum((0..factors.len()).map(|i| {
            Expr::product(factors.iter().enumerate().map(|(j, f)| {
                if i == j {
                    derive(f, var)
                } else {
                    f.clone()
                }
            }))
        })),
        Expr::Pow(base, k) => Expr::product([
            Expr::int(*k),
            Expr::Pow(base.clone(), k - 1),
            derive(base, var),
        ]),
        Expr::Div(a, b) => {
            let numer = Expr::sum([
                Expr::product([derive(a, var), (**b).clone()]),
                Expr::product([Expr::int(-1), (**a).clone(), derive(b, var)]),
            ]);
            Expr::Div(Box::new(numer), Box::new(Expr::Pow(b.clone(), 2)))
        }
        Expr::Func(f, arg) => {
            let inner = derive(arg, var);
            let outer = match f {
                Func::Sin => (**arg).clone().cos(),
                Func::Cos => Expr::product([Expr::int(-1), (**arg).clone().sin()]),
                Func::Exp => e.clone(),
                Func::Sqrt => {
                    return Expr::Div(
                        Box::new(inner),
                        Box::new(Expr::product([Expr::int(2), e.clone()])),
                    )
                }
            };
            Expr::product([outer, inner])
        }
    }
}
