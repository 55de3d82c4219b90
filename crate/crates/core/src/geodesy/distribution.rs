use crate::connections::Connection;
use crate::error::Result;
use crate::jets::{cover1, j1_dim, SecJet, SubJet};
use crate::linalg;

use super::dot_gamma::{check_jet, dot_gamma_values};
use super::pro::dot_gamma_pro;

/// Generators of the distribution `R∘Γ̈` at an order-1 jet, in the
/// coordinates of [`SubJet::j1_coords`]:
/// `∂_{u^λ} + u^j_λ ∂_{u^j} − (dotΓ_λ^k_ξ + u^j_λ dotΓ_j^k_ξ) ∂_{u^k_ξ}`.
pub fn distribution_fields(g: &Connection, n: usize, p: &SubJet) -> Result<Vec<Vec<f64>>> {
    let g = if g.split() == n { g.clone() } else { g.with_split(n)? };
    check_jet(&g, p, 1)?;
    let gamma = g.eval(p.base())?;
    let dg = dot_gamma_values(&gamma, p);
    let (m, l) = (p.m(), p.l());
    let mut fields = Vec::with_capacity(n);
    for lambda in 0..n {
        let mut v = vec![0.0; j1_dim(n, m)];
        v[lambda] = 1.0;
        for j in n..l {
            v[j] = p.d1(j, lambda);
        }
        for k in n..l {
            for xi in 0..n {
                let mut acc = dg.get(lambda, k, xi);
                for j in n..l {
                    acc += p.d1(j, lambda) * dg.get(j, k, xi);
                }
                v[SubJet::j1_slot(n, m, k, xi)] = -acc;
            }
        }
        fields.push(v);
    }
    Ok(fields)
}

/// Pushforward of a tangent vector of `J¹(pro_M)` (layout of
/// [`SecJet::j1_coords`]) by `pro_E^(1)`, in the layout of
/// [`SubJet::j1_coords`].
pub fn cover1_pushforward(t: &SecJet, tangent: &[f64]) -> Result<Vec<f64>> {
    let x = crate::jets::inverse_greek_block(t)?;
    let (n, l) = (t.n(), t.l());
    let m = l - n;
    let covered = cover1(t)?;
    let udot_x = |a: usize, lambda: usize| tangent[SecJet::j1_slot(n, l, a, lambda)];
    let mut out = vec![0.0; j1_dim(n, m)];
    out[..l].copy_from_slice(&tangent[n..n + l]);
    for j in n..l {
        for xi in 0..n {
            let mut acc = 0.0;
            for lambda in 0..n {
                let mut inner = udot_x(j, lambda);
                for zeta in 0..n {
                    inner -= covered.d1(j, zeta) * udot_x(zeta, lambda);
                }
                acc += x[(lambda, xi)] * inner;
            }
            out[SubJet::j1_slot(n, m, j, xi)] = acc;
        }
    }
    Ok(out)
}

/// Generators of the distribution of `Γ̈_{pro_M}` at an order-1 section jet:
/// the horizontal lifts of `(e_λ, u^A_{xλ})`.
pub fn pro_distribution_fields(g: &Connection, theta: &Connection, t: &SecJet) -> Result<Vec<Vec<f64>>> {
    let lift = dot_gamma_pro(g, theta, t)?;
    let n = t.n();
    Ok((0..n)
        .map(|lambda| {
            let x_dot: Vec<f64> = (0..n).map(|mu| if mu == lambda { 1.0 } else { 0.0 }).collect();
            let u_dot: Vec<f64> = (0..t.l()).map(|a| t.d1(a, lambda)).collect();
            lift.horizontal_lift(&x_dot, &u_dot)
        })
        .collect())
}

/// Outcome of pushing the parametrized distribution through the covering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionPushforward {
    /// Largest least-squares distance of a pushed generator from the span.
    pub span_residual: f64,
    /// Rank of the pushed generators.
    pub rank: usize,
}

/// Push the generators of the parametrized distribution at `t` through
/// `T pro_E^(1)` and test membership in the span of
/// [`distribution_fields`] at `pro_E^(1)(t)`.
pub fn distribution_pushforward(g: &Connection, theta: &Connection, t: &SecJet) -> Result<DistributionPushforward> {
    let n = t.n();
    let target = distribution_fields(g, n, &cover1(t)?)?;
    let pushed = pro_distribution_fields(g, theta, t)?
        .iter()
        .map(|v| cover1_pushforward(t, v))
        .collect::<Result<Vec<_>>>()?;
    let span_residual = pushed.iter().map(|v| linalg::span_residual(&target, v)).fold(0.0, f64::max);
    Ok(DistributionPushforward { span_residual, rank: linalg::rank(&pushed) })
}
