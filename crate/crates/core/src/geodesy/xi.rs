use rand::Rng;

use crate::connections::Connection;
use crate::error::{Error, Result};
use crate::jets::SubJet;

use super::dot_gamma::{check_jet, DotGamma};

/// Values at a point of an auxiliary linear connection `Ξ` on `H^{1,0*}`:
/// `Ξ_A_ξ^λ` (`horizontal[A][ξ][λ]`) and `Ξ^α_h_ξ^λ`
/// (`vertical[α][h][ξ][λ]`, `h` local Latin).
#[derive(Debug, Clone, PartialEq)]
pub struct XiTable {
    n: usize,
    m: usize,
    horizontal: Vec<f64>,
    vertical: Vec<f64>,
}

impl XiTable {
    pub fn zeros(n: usize, m: usize) -> XiTable {
        XiTable { n, m, horizontal: vec![0.0; (n + m) * n * n], vertical: vec![0.0; n * m * n * n] }
    }

    /// Entries uniform in `[-scale, scale]`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, m: usize, scale: f64) -> XiTable {
        let mut t = XiTable::zeros(n, m);
        t.horizontal.iter_mut().chain(t.vertical.iter_mut()).for_each(|v| *v = rng.random_range(-scale..=scale));
        t
    }

    /// `Ξ_A_ξ^λ`.
    pub fn horizontal(&self, a: usize, xi: usize, lambda: usize) -> f64 {
        self.horizontal[(a * self.n + xi) * self.n + lambda]
    }

    /// `Ξ^α_h_ξ^λ` with `h` a global Latin index.
    pub fn vertical(&self, alpha: usize, h: usize, xi: usize, lambda: usize) -> f64 {
        let h = h - self.n;
        self.vertical[((alpha * self.m + h) * self.n + xi) * self.n + lambda]
    }
}

/// Result of projecting `υ_Ω ∘ TD¹` onto `H^{1,0*} ⊗ V^{1,0}`.
///
/// `horizontal` holds the `du^A` coefficients (the candidate `dotΓ`),
/// `vertical[h][α][k][ξ]` the `du^h_α` coefficients, which must equal
/// `δ_h^k δ_ξ^α` for the projection to define a connection.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaProjection {
    pub horizontal: DotGamma,
    vertical: Vec<f64>,
    n: usize,
    m: usize,
}

impl OmegaProjection {
    /// Coefficient of `du^h_α ⊗ du^ξ ⊗ ∂_{u^k}` (global Latin `h`, `k`).
    pub fn vertical(&self, h: usize, alpha: usize, k: usize, xi: usize) -> f64 {
        let (n, m) = (self.n, self.m);
        self.vertical[(((h - n) * n + alpha) * m + (k - n)) * n + xi]
    }

    /// Largest deviation of the vertical block from `δ_h^k δ_ξ^α`.
    pub fn vertical_defect(&self) -> f64 {
        let (n, l) = (self.n, self.n + self.m);
        let mut worst: f64 = 0.0;
        for h in n..l {
            for alpha in 0..n {
                for k in n..l {
                    for xi in 0..n {
                        let expected = if h == k && alpha == xi { 1.0 } else { 0.0 };
                        worst = worst.max((self.vertical(h, alpha, k, xi) - expected).abs());
                    }
                }
            }
        }
        worst
    }
}

/// Materialize `Ω = Ξ ⊗ Γ` at the point of `p`,
/// `Ω_A^C_ξ^λ_B = δ_B^C Ξ_A_ξ^λ + δ_ξ^λ Γ_A^C_B`,
/// `Ω^α_h^C_ξ^λ_B = δ_B^C Ξ^α_h_ξ^λ`,
/// compose with `TD¹` and project onto `H^{1,0*} ⊗ V^{1,0}` by subtracting
/// the `u^k_β`-weighted Greek components.
pub fn omega_projection(g: &Connection, xi_table: &XiTable, p: &SubJet) -> Result<OmegaProjection> {
    check_jet(g, p, 1)?;
    let (n, m, l) = (p.n(), p.m(), p.l());
    if (xi_table.n, xi_table.m) != (n, m) {
        return Err(Error::FrameMismatch(format!(
            "Ξ table for (n, m) = ({}, {}) used at a jet with ({n}, {m})",
            xi_table.n, xi_table.m
        )));
    }
    let gamma = g.eval(p.base())?;
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };

    // Ω tables, indexed [A][C][ξ][λ][B] and [α][h][C][ξ][λ][B].
    let idx5 = |a: usize, c: usize, xi: usize, lam: usize, b: usize| (((a * l + c) * n + xi) * n + lam) * l + b;
    let mut omega = vec![0.0; l * l * n * n * l];
    for a in 0..l {
        for c in 0..l {
            for xi in 0..n {
                for lam in 0..n {
                    for b in 0..l {
                        omega[idx5(a, c, xi, lam, b)] = d(b, c) * xi_table.horizontal(a, xi, lam) + d(xi, lam) * gamma.get(a, c, b);
                    }
                }
            }
        }
    }
    let idx6 = |alpha: usize, h: usize, c: usize, xi: usize, lam: usize, b: usize| {
        ((((alpha * m + (h - n)) * l + c) * n + xi) * n + lam) * l + b
    };
    let mut omega_v = vec![0.0; n * m * l * n * n * l];
    for alpha in 0..n {
        for h in n..l {
            for c in 0..l {
                for xi in 0..n {
                    for lam in 0..n {
                        for b in 0..l {
                            omega_v[idx6(alpha, h, c, xi, lam, b)] = d(b, c) * xi_table.vertical(alpha, h, xi, lam);
                        }
                    }
                }
            }
        }
    }

    // Coefficients of υ_Ω ∘ TD¹ on du^A and du^h_α, before projection.
    let coeff_a = |a: usize, c: usize, xi: usize| {
        let mut acc = 0.0;
        for lam in 0..n {
            acc += omega[idx5(a, c, xi, lam, lam)];
            for i in n..l {
                acc += omega[idx5(a, c, xi, lam, i)] * p.d1(i, lam);
            }
        }
        acc
    };
    let coeff_h = |h: usize, alpha: usize, c: usize, xi: usize| {
        let mut acc = d(c, h) * d(alpha, xi);
        for lam in 0..n {
            acc += omega_v[idx6(alpha, h, c, xi, lam, lam)];
            for i in n..l {
                acc += omega_v[idx6(alpha, h, c, xi, lam, i)] * p.d1(i, lam);
            }
        }
        acc
    };

    let mut horizontal = DotGamma::zeros(n, m);
    for a in 0..l {
        for xi in 0..n {
            for k in n..l {
                let mut v = coeff_a(a, k, xi);
                for beta in 0..n {
                    v -= p.d1(k, beta) * coeff_a(a, beta, xi);
                }
                horizontal.set(a, k, xi, v);
            }
        }
    }
    let mut vertical = vec![0.0; m * n * m * n];
    for h in n..l {
        for alpha in 0..n {
            for k in n..l {
                for xi in 0..n {
                    let mut v = coeff_h(h, alpha, k, xi);
                    for beta in 0..n {
                        v -= p.d1(k, beta) * coeff_h(h, alpha, beta, xi);
                    }
                    vertical[(((h - n) * n + alpha) * m + (k - n)) * n + xi] = v;
                }
            }
        }
    }
    Ok(OmegaProjection { horizontal, vertical, n, m })
}

/// `dotΓ` obtained through the auxiliary connection `Ξ`; equal to
/// [`super::dot_gamma`] whatever `Ξ` is.
pub fn dot_gamma_via_xi(g: &Connection, xi_table: &XiTable, p: &SubJet) -> Result<DotGamma> {
    Ok(omega_projection(g, xi_table, p)?.horizontal)
}
