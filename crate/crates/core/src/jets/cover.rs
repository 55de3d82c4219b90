use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::{SecJet, SubJet};

/// Threshold on `|det J| / max|J|^n` below which the Greek block of a
/// section jet counts as singular.
pub const SINGULAR_THRESHOLD: f64 = 1e-12;

/// Inverse `X[λ][ξ] = x^λ_{u^ξ}` of the Greek block `J[ξ][λ] = u^ξ_{xλ}`.
pub fn inverse_greek_block(t: &SecJet) -> Result<DMatrix<f64>> {
    if t.order() < 1 {
        return Err(Error::DimensionMismatch("covering needs a jet of order ≥ 1".into()));
    }
    let scaled_det = t.scaled_greek_det();
    if !(scaled_det >= SINGULAR_THRESHOLD) {
        return Err(Error::SingularJacobian { scaled_det });
    }
    let lu = t.greek_block().lu();
    lu.try_inverse().ok_or(Error::SingularJacobian { scaled_det })
}

/// `pro_E^(1)`: the order-1 jet of the unparametrized submanifold,
/// `u^j_ξ = u^j_{xλ} x^λ_{u^ξ}`.
pub fn cover1(t: &SecJet) -> Result<SubJet> {
    let x = inverse_greek_block(t)?;
    Ok(cover1_with(t, &x))
}

fn cover1_with(t: &SecJet, x: &DMatrix<f64>) -> SubJet {
    let n = t.n();
    SubJet::from_fn(n, t.l() - n, 1, t.u().to_vec(), |j, s| {
        let xi = s.indices()[0];
        (0..n).map(|lambda| t.d1(j, lambda) * x[(lambda, xi)]).sum()
    })
}

/// `pro_E^(2)`:
/// `u^j_{ξη} = u^j_{xλxμ} x^λ_{ξ} x^μ_{η} − u^j_{xλ} x^λ_{α} u^α_{xβxγ} x^γ_{ξ} x^β_{η}`,
/// averaged over `ξ ↔ η`.
pub fn cover2(t: &SecJet) -> Result<SubJet> {
    if t.order() < 2 {
        return Err(Error::DimensionMismatch("cover2 needs a jet of order ≥ 2".into()));
    }
    let x = inverse_greek_block(t)?;
    let n = t.n();
    let first = cover1_with(t, &x);
    // v^j_α = u^j_{xλ} x^λ_α, i.e. the first-order covered derivatives
    let entry = |j: usize, xi: usize, eta: usize| {
        let mut acc = 0.0;
        for lambda in 0..n {
            for mu in 0..n {
                acc += t.d2(j, lambda, mu) * x[(lambda, xi)] * x[(mu, eta)];
            }
        }
        for alpha in 0..n {
            let v = first.d1(j, alpha);
            for beta in 0..n {
                for gamma in 0..n {
                    acc -= v * t.d2(alpha, beta, gamma) * x[(gamma, xi)] * x[(beta, eta)];
                }
            }
        }
        acc
    };
    Ok(first.extend2(|j, xi, eta| 0.5 * (entry(j, xi, eta) + entry(j, eta, xi))))
}

/// A section jet over the identity parametrization of the Greek block:
/// `x^λ = u^λ`, `u^ξ_{xλ} = δ`, `u^j_{xλ} = u^j_λ`. Order-2 data is copied
/// when present. `cover1` (and `cover2`) map it back to `p`.
pub fn identity_preimage(p: &SubJet) -> SecJet {
    let n = p.n();
    let x = p.base()[..n].to_vec();
    SecJet::from_fn(n, p.l(), p.order().min(2), x, p.base().to_vec(), |a, s| {
        if a < n {
            if s.order() == 1 && s.indices()[0] == a {
                1.0
            } else {
                0.0
            }
        } else {
            p.deriv(a, s)
        }
    })
}
