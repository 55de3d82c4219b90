use crate::connections::{Christoffel, Connection};
use crate::error::{Error, Result};
use crate::jets::SubJet;

/// Christoffel symbols `dotΓ_A^k_ξ` of the induced connection on
/// `J¹(E, n) → E` at an order-1 jet. `A ∈ 0..l`, `k` a global Latin index,
/// `ξ` Greek.
#[derive(Debug, Clone, PartialEq)]
pub struct DotGamma {
    n: usize,
    m: usize,
    values: Vec<f64>,
}

impl DotGamma {
    pub(crate) fn zeros(n: usize, m: usize) -> DotGamma {
        DotGamma { n, m, values: vec![0.0; (n + m) * m * n] }
    }

    fn slot(&self, a: usize, k: usize, xi: usize) -> usize {
        debug_assert!(k >= self.n && k < self.n + self.m && xi < self.n);
        (a * self.m + (k - self.n)) * self.n + xi
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, a: usize, k: usize, xi: usize) -> f64 {
        self.values[self.slot(a, k, xi)]
    }

    pub(crate) fn set(&mut self, a: usize, k: usize, xi: usize, v: f64) {
        let s = self.slot(a, k, xi);
        self.values[s] = v;
    }

    /// Values in `(A, k, ξ)` row-major order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs_diff(&self, other: &DotGamma) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn check_jet(g: &Connection, p: &SubJet, min_order: usize) -> Result<()> {
    if p.n() != g.split() || p.l() != g.dim() {
        return Err(Error::FrameMismatch(format!(
            "jet with (n, l) = ({}, {}) for a connection with (n, l) = ({}, {})",
            p.n(),
            p.l(),
            g.split(),
            g.dim()
        )));
    }
    if p.order() < min_order {
        return Err(Error::FrameMismatch(format!("jet of order {} where order {min_order} is needed", p.order())));
    }
    Ok(())
}

/// `dotΓ_A^k_ξ = Γ_A^k_ξ + Γ_A^k_i u^i_ξ − u^k_β (Γ_A^β_ξ + Γ_A^β_i u^i_ξ)`.
pub fn dot_gamma(g: &Connection, p: &SubJet) -> Result<DotGamma> {
    check_jet(g, p, 1)?;
    let gamma = g.eval(p.base())?;
    Ok(dot_gamma_values(&gamma, p))
}

pub(crate) fn dot_gamma_values(gamma: &Christoffel, p: &SubJet) -> DotGamma {
    let (n, l) = (p.n(), p.l());
    let mut out = DotGamma::zeros(n, p.m());
    // w[A][C][ξ] = Γ_A^C_ξ + Γ_A^C_i u^i_ξ
    let w = |a: usize, c: usize, xi: usize| {
        let mut acc = gamma.get(a, c, xi);
        for i in n..l {
            acc += gamma.get(a, c, i) * p.d1(i, xi);
        }
        acc
    };
    for a in 0..l {
        for xi in 0..n {
            let greek: Vec<f64> = (0..n).map(|beta| w(a, beta, xi)).collect();
            for k in n..l {
                let mut v = w(a, k, xi);
                for (beta, gb) in greek.iter().enumerate() {
                    v -= p.d1(k, beta) * gb;
                }
                out.set(a, k, xi, v);
            }
        }
    }
    out
}
