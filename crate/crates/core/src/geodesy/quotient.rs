use crate::connections::Connection;
use crate::error::Result;
use crate::jets::{cover1, SecJet, SubJet};

use super::distribution::cover1_pushforward;
use super::dot_gamma::dot_gamma;
use super::pro::dot_gamma_pro;

/// Vertical projection `υ_{dotΓ}` of a tangent vector of `J¹(E, n)` (layout
/// of [`SubJet::j1_coords`]): components `[k][ξ]` of `U̇^k_ξ + dotΓ_A^k_ξ U̇^A`.
pub fn unparam_vertical(g: &Connection, p: &SubJet, tangent: &[f64]) -> Result<Vec<f64>> {
    let dg = dot_gamma(g, p)?;
    let (n, m, l) = (p.n(), p.m(), p.l());
    let mut out = vec![0.0; m * n];
    for k in n..l {
        for xi in 0..n {
            let mut v = tangent[SubJet::j1_slot(n, m, k, xi)];
            for a in 0..l {
                v += dg.get(a, k, xi) * tangent[a];
            }
            out[(k - n) * n + xi] = v;
        }
    }
    Ok(out)
}

/// Both sides of the quotient-connection square at a section jet `t` and a
/// tangent vector there:
/// `T pro_E^(1) (υ_{dotΓ_pro}(V))` and `υ_{dotΓ}(T pro_E^(1) V)`, each as
/// `[k][ξ]` components. Returns the largest component difference.
pub fn quotient_diagram_residual(g: &Connection, theta: &Connection, t: &SecJet, tangent: &[f64]) -> Result<f64> {
    let (n, l) = (t.n(), t.l());
    let m = l - n;
    let p = cover1(t)?;

    // left: vertical part upstairs, pushed down as a vertical vector
    let lift = dot_gamma_pro(g, theta, t)?;
    let w = lift.vertical_part(tangent);
    let mut vertical_tangent = vec![0.0; tangent.len()];
    vertical_tangent[n + l..].copy_from_slice(&w);
    let pushed = cover1_pushforward(t, &vertical_tangent)?;
    let left: Vec<f64> = (n..l)
        .flat_map(|k| (0..n).map(move |xi| (k, xi)))
        .map(|(k, xi)| pushed[SubJet::j1_slot(n, m, k, xi)])
        .collect();

    // right: push down first, then project
    let right = unparam_vertical(g, &p, &cover1_pushforward(t, tangent)?)?;
    Ok(left.iter().zip(&right).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}
