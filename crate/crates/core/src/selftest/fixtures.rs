//! Connections with known geometry used by the self-test and examples.

use crate::connections::Connection;
use crate::error::{Error, Result};
use crate::expr::{CoordinateFrame, Expr};

/// Levi-Civita connection of a diagonal metric `g = diag(g_0, …)`:
/// `Γ_A^C_B = ½ g^{CC} (∂_A g_BC + ∂_B g_AC − ∂_C g_AB)`. The metric is
/// attached to the result.
pub fn levi_civita_diagonal(frame: &CoordinateFrame, diagonal: &[Expr]) -> Result<Connection> {
    let l = frame.dim();
    if diagonal.len() != l {
        return Err(Error::DimensionMismatch(format!("{} diagonal entries for dimension {l}", diagonal.len())));
    }
    let metric = |a: usize, b: usize| if a == b { diagonal[a].clone() } else { Expr::zero() };
    let d = |e: Expr, c: usize| e.differentiate(frame.name(c));
    let mut g = Connection::zero(frame.clone());
    for a in 0..l {
        for b in a..l {
            for c in 0..l {
                let bracket = d(metric(b, c), a) + d(metric(a, c), b) - d(metric(a, b), c);
                let value = (Expr::rational(1, 2) * bracket / diagonal[c].clone()).simplify();
                if !value.is_zero() {
                    g.set(a, c, b, value);
                }
            }
        }
    }
    let full = (0..l).map(|a| (0..l).map(|b| metric(a, b)).collect()).collect();
    Ok(g.with_metric(full))
}

/// The round unit sphere in stereographic coordinates `(u, v)`:
/// `g = 4 (1 + u² + v²)⁻² (du² + dv²)`, split at `n = 1`.
pub fn sphere() -> Connection {
    let frame = CoordinateFrame::new(&["u", "v"], 1).expect("valid frame");
    let conformal = Expr::parse("4*(1 + u^2 + v^2)^-2", &frame).expect("valid expression");
    levi_civita_diagonal(&frame, &[conformal.clone(), conformal]).expect("diagonal metric")
}

/// Flat connection on `ℝ^dim` with coordinates `u1, …` split at `n`.
pub fn flat(dim: usize, n: usize) -> Connection {
    Connection::zero(CoordinateFrame::numbered("u", dim, n).expect("valid frame"))
}

/// Flat connection on the parameter space `ℝⁿ` with coordinates `x1, …`.
pub fn flat_parameters(n: usize) -> Connection {
    Connection::zero(CoordinateFrame::numbered("x", n, n).expect("valid frame"))
}
