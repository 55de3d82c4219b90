use crate::connections::Connection;
use crate::error::Result;
use crate::jets::SubJet;

use super::dot_gamma::{check_jet, dot_gamma_values, DotGamma};

/// Left side of the unparametrized totally geodesic equation at an order-2
/// jet, `r[k, λ, ξ]`, symmetric in `(λ, ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual2 {
    n: usize,
    m: usize,
    values: Vec<f64>,
}

impl Residual2 {
    /// `r[k, λ, ξ]` for a global Latin `k`.
    pub fn get(&self, k: usize, lambda: usize, xi: usize) -> f64 {
        self.values[((k - self.n) * self.n + lambda) * self.n + xi]
    }

    /// Independent components `(k, λ ≤ ξ)` in that loop order.
    pub fn components(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for k in self.n..self.n + self.m {
            for lambda in 0..self.n {
                for xi in lambda..self.n {
                    out.push(self.get(k, lambda, xi));
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

/// The section `Γ̈` at an order-1 jet: `p` extended by
/// `u^k_{λξ} = −(dotΓ_λ^k_ξ + u^j_λ dotΓ_j^k_ξ)`, symmetrized in `(λ, ξ)`.
pub fn ddot_gamma(g: &Connection, p: &SubJet) -> Result<SubJet> {
    check_jet(g, p, 1)?;
    let gamma = g.eval(p.base())?;
    let dg = dot_gamma_values(&gamma, p);
    Ok(ddot_from_dot(&dg, p))
}

pub(crate) fn ddot_from_dot(dg: &DotGamma, p: &SubJet) -> SubJet {
    let (n, l) = (p.n(), p.l());
    let value = |k: usize, lambda: usize, xi: usize| {
        let mut acc = dg.get(lambda, k, xi);
        for j in n..l {
            acc += p.d1(j, lambda) * dg.get(j, k, xi);
        }
        -acc
    };
    p.extend2(|k, lambda, xi| 0.5 * (value(k, lambda, xi) + value(k, xi, lambda)))
}

/// Evaluate
/// `u^k_{λξ} + Γ_λ^k_ξ + Γ_λ^k_i u^i_ξ + Γ_j^k_ξ u^j_λ + Γ_j^k_i u^j_λ u^i_ξ
///  − u^k_β (Γ_λ^β_ξ + Γ_λ^β_i u^i_ξ + Γ_j^β_ξ u^j_λ + Γ_j^β_i u^j_λ u^i_ξ)`
/// term by term, averaged over `(λ, ξ) ↔ (ξ, λ)`.
pub fn residual2(g: &Connection, q: &SubJet) -> Result<Residual2> {
    check_jet(g, q, 2)?;
    let (n, m, l) = (q.n(), q.m(), q.l());
    let gamma = g.eval(q.base())?;
    let bracket = |c: usize, lambda: usize, xi: usize| {
        let mut acc = gamma.get(lambda, c, xi);
        for i in n..l {
            acc += gamma.get(lambda, c, i) * q.d1(i, xi);
        }
        for j in n..l {
            acc += gamma.get(j, c, xi) * q.d1(j, lambda);
            for i in n..l {
                acc += gamma.get(j, c, i) * q.d1(j, lambda) * q.d1(i, xi);
            }
        }
        acc
    };
    let raw = |k: usize, lambda: usize, xi: usize| {
        let mut acc = q.d2(k, lambda, xi) + bracket(k, lambda, xi);
        for beta in 0..n {
            acc -= q.d1(k, beta) * bracket(beta, lambda, xi);
        }
        acc
    };
    let mut values = vec![0.0; m * n * n];
    for k in n..l {
        for lambda in 0..n {
            for xi in 0..n {
                values[((k - n) * n + lambda) * n + xi] = 0.5 * (raw(k, lambda, xi) + raw(k, xi, lambda));
            }
        }
    }
    Ok(Residual2 { n, m, values })
}
