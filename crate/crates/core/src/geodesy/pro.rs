use crate::connections::Connection;
use crate::error::{Error, Result};
use crate::jets::SecJet;

fn check(g: &Connection, theta: &Connection, t: &SecJet, min_order: usize) -> Result<()> {
    if g.dim() != t.l() || theta.dim() != t.n() {
        return Err(Error::DimensionMismatch(format!(
            "connections on dimensions ({}, {}) for a section jet with (l, n) = ({}, {})",
            g.dim(),
            theta.dim(),
            t.l(),
            t.n()
        )));
    }
    if t.order() < min_order {
        return Err(Error::DimensionMismatch(format!("section jet of order {} where {min_order} is needed", t.order())));
    }
    Ok(())
}

/// Left side of the parametrized totally geodesic equation,
/// `r[C, ξ, λ] = u^C_{xξxλ} + Γ_A^C_B u^A_{xξ} u^B_{xλ} − Θ_ξ^η_λ u^C_{xη}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamResidual2 {
    n: usize,
    l: usize,
    values: Vec<f64>,
}

impl ParamResidual2 {
    pub fn get(&self, c: usize, xi: usize, lambda: usize) -> f64 {
        self.values[(c * self.n + xi) * self.n + lambda]
    }

    /// Independent components `(C, ξ ≤ λ)` in that loop order.
    pub fn components(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for c in 0..self.l {
            for xi in 0..self.n {
                for lambda in xi..self.n {
                    out.push(self.get(c, xi, lambda));
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Largest `|r[C,ξ,λ] − r[C,λ,ξ]|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for c in 0..self.l {
            for xi in 0..self.n {
                for lambda in 0..self.n {
                    worst = worst.max((self.get(c, xi, lambda) - self.get(c, lambda, xi)).abs());
                }
            }
        }
        worst
    }
}

/// Values `Γ_A^C_B u^A_{xξ} u^B_{xλ} − Θ_ξ^η_λ u^C_{xη}` (the residual
/// without its second-derivative term).
fn forcing(g: &Connection, theta: &Connection, t: &SecJet) -> Result<Vec<f64>> {
    let (n, l) = (t.n(), t.l());
    let gamma = g.eval(t.u())?;
    let th = theta.eval(t.x())?;
    let mut out = vec![0.0; l * n * n];
    for c in 0..l {
        for xi in 0..n {
            for lambda in 0..n {
                let mut acc = 0.0;
                for a in 0..l {
                    let ua = t.d1(a, xi);
                    if ua == 0.0 {
                        continue;
                    }
                    for b in 0..l {
                        acc += gamma.get(a, c, b) * ua * t.d1(b, lambda);
                    }
                }
                for eta in 0..n {
                    acc -= th.get(xi, eta, lambda) * t.d1(c, eta);
                }
                out[(c * n + xi) * n + lambda] = acc;
            }
        }
    }
    Ok(out)
}

pub fn param_residual2(g: &Connection, theta: &Connection, t: &SecJet) -> Result<ParamResidual2> {
    check(g, theta, t, 2)?;
    let (n, l) = (t.n(), t.l());
    let mut values = forcing(g, theta, t)?;
    for c in 0..l {
        for xi in 0..n {
            for lambda in 0..n {
                values[(c * n + xi) * n + lambda] += t.d2(c, xi, lambda);
            }
        }
    }
    Ok(ParamResidual2 { n, l, values })
}

/// `Γ̈_{pro_M}`: `t` extended by
/// `u^C_{xξxλ} = −Γ_A^C_B u^A_{xξ} u^B_{xλ} + Θ_ξ^η_λ u^C_{xη}`.
pub fn ddot_gamma_pro(g: &Connection, theta: &Connection, t: &SecJet) -> Result<SecJet> {
    check(g, theta, t, 1)?;
    let n = t.n();
    let f = forcing(g, theta, t)?;
    Ok(t.extend2(|c, xi, lambda| -0.5 * (f[(c * n + xi) * n + lambda] + f[(c * n + lambda) * n + xi])))
}

/// Coefficients of the connection `dotΓ_{pro_M}` on `J¹(pro_M) → M × E`
/// as a tangent valued form:
///
/// `dx^λ ⊗ (∂_{x^λ} + Θ_λ^ξ_η u^A_{xξ} ∂_{u^A_{xη}}) + du^B ⊗ (∂_{u^B} − Γ_B^C_A u^A_{xξ} ∂_{u^C_{xξ}})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProLift {
    n: usize,
    l: usize,
    /// `[λ][A][η]`: coefficient of `dx^λ ⊗ ∂_{u^A_{xη}}`.
    x_coeffs: Vec<f64>,
    /// `[B][C][ξ]`: coefficient of `du^B ⊗ ∂_{u^C_{xξ}}`.
    u_coeffs: Vec<f64>,
}

impl ProLift {
    pub fn x_coeff(&self, lambda: usize, a: usize, eta: usize) -> f64 {
        self.x_coeffs[(lambda * self.l + a) * self.n + eta]
    }

    pub fn u_coeff(&self, b: usize, c: usize, xi: usize) -> f64 {
        self.u_coeffs[(b * self.l + c) * self.n + xi]
    }

    /// Vertical projection `υ` of a tangent vector given in the layout of
    /// [`SecJet::j1_coords`]: the tangent vector minus the horizontal lift
    /// of its base part, as components `[C][η]` on `∂_{u^C_{xη}}`.
    pub fn vertical_part(&self, tangent: &[f64]) -> Vec<f64> {
        let (n, l) = (self.n, self.l);
        let mut out = vec![0.0; l * n];
        for c in 0..l {
            for eta in 0..n {
                let mut v = tangent[n + l + c * n + eta];
                for lambda in 0..n {
                    v -= tangent[lambda] * self.x_coeff(lambda, c, eta);
                }
                for b in 0..l {
                    v -= tangent[n + b] * self.u_coeff(b, c, eta);
                }
                out[c * n + eta] = v;
            }
        }
        out
    }

    /// Horizontal lift of the base vector `(ẋ, u̇)` in `J¹(pro_M)` coordinates.
    pub fn horizontal_lift(&self, x_dot: &[f64], u_dot: &[f64]) -> Vec<f64> {
        let (n, l) = (self.n, self.l);
        let mut out = Vec::with_capacity(n + l + l * n);
        out.extend_from_slice(x_dot);
        out.extend_from_slice(u_dot);
        for c in 0..l {
            for eta in 0..n {
                let mut v = 0.0;
                for lambda in 0..n {
                    v += x_dot[lambda] * self.x_coeff(lambda, c, eta);
                }
                for b in 0..l {
                    v += u_dot[b] * self.u_coeff(b, c, eta);
                }
                out.push(v);
            }
        }
        out
    }
}

pub fn dot_gamma_pro(g: &Connection, theta: &Connection, t: &SecJet) -> Result<ProLift> {
    check(g, theta, t, 1)?;
    let (n, l) = (t.n(), t.l());
    let gamma = g.eval(t.u())?;
    let th = theta.eval(t.x())?;
    let mut x_coeffs = vec![0.0; n * l * n];
    for lambda in 0..n {
        for a in 0..l {
            for eta in 0..n {
                x_coeffs[(lambda * l + a) * n + eta] = (0..n).map(|xi| th.get(lambda, xi, eta) * t.d1(a, xi)).sum();
            }
        }
    }
    let mut u_coeffs = vec![0.0; l * l * n];
    for b in 0..l {
        for c in 0..l {
            for xi in 0..n {
                u_coeffs[(b * l + c) * n + xi] = -(0..l).map(|a| gamma.get(b, c, a) * t.d1(a, xi)).sum::<f64>();
            }
        }
    }
    Ok(ProLift { n, l, x_coeffs, u_coeffs })
}
