use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::expr::{CoordinateFrame, Expr};

use super::{MultiIndex, SecJet};

/// `x̃ = a·x + b` on `ℝⁿ`, with `det a ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    a: DMatrix<f64>,
    b: DVector<f64>,
    a_inv: DMatrix<f64>,
}

impl AffineMap {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>) -> Result<AffineMap> {
        if !a.is_square() || a.nrows() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "affine map with {}×{} matrix and {}-vector",
                a.nrows(),
                a.ncols(),
                b.len()
            )));
        }
        let a_inv = a.clone().try_inverse().ok_or(Error::SingularJacobian { scaled_det: 0.0 })?;
        if a.determinant() == 0.0 {
            return Err(Error::SingularJacobian { scaled_det: 0.0 });
        }
        Ok(AffineMap { a, b, a_inv })
    }

    pub fn identity(n: usize) -> AffineMap {
        AffineMap::new(DMatrix::identity(n, n), DVector::zeros(n)).expect("identity is invertible")
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn translation(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn inverse_matrix(&self) -> &DMatrix<f64> {
        &self.a_inv
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (&self.a * DVector::from_column_slice(x) + &self.b).iter().copied().collect()
    }

    /// `self ∘ first`: `a = a₂a₁`, `b = a₂b₁ + b₂`.
    pub fn after(&self, first: &AffineMap) -> AffineMap {
        AffineMap::new(&self.a * &first.a, &self.a * &first.b + &self.b).expect("product of invertible maps")
    }
}

/// Action of an affine change of parameters on a section jet of any order:
/// `x̃ = a x + b`, `u^A` unchanged and
/// `u^A_{x̃σ} = Σ_τ u^A_{xτ} Π_k (a⁻¹)^{τ_k}_{σ_k}` over ordered tuples `τ`.
pub fn affine_act(g: &AffineMap, t: &SecJet) -> Result<SecJet> {
    let n = t.n();
    if g.dim() != n {
        return Err(Error::DimensionMismatch(format!("affine map on ℝ^{} acting on jets over ℝ^{n}", g.dim())));
    }
    let ainv = &g.a_inv;
    Ok(SecJet::from_fn(n, t.l(), t.order(), g.apply(t.x()), t.u().to_vec(), |a, sigma| {
        let k = sigma.order();
        let mut acc = 0.0;
        let mut tau = vec![0usize; k];
        loop {
            let weight: f64 = tau.iter().zip(sigma.indices()).map(|(&t_, &s)| ainv[(t_, s)]).product();
            if weight != 0.0 {
                acc += weight * t.deriv(a, &MultiIndex::new(tau.clone()));
            }
            let mut d = k;
            loop {
                if d == 0 {
                    return acc;
                }
                d -= 1;
                tau[d] += 1;
                if tau[d] < n {
                    break;
                }
                tau[d] = 0;
            }
        }
    }))
}

/// A general change of parameters `x̃ = φ(x)` given symbolically, used to
/// contrast affine and non-affine reparametrizations.
#[derive(Debug, Clone, PartialEq)]
pub struct Reparametrization {
    params: CoordinateFrame,
    components: Vec<Expr>,
}

impl Reparametrization {
    /// Parse components written in `x1, …, xn`.
    pub fn parse(components: &[&str]) -> Result<Reparametrization> {
        let n = components.len();
        let params = CoordinateFrame::numbered("x", n, n)?;
        let components = components.iter().map(|t| Expr::parse(t, &params)).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Reparametrization { params, components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Order-2 action on a section jet: with `a = ∂φ/∂x`, `H = ∂²φ/∂x²`,
    /// `ũ_{x̃λ} = u_{xξ} (a⁻¹)^ξ_λ` and
    /// `ũ_{x̃λx̃μ} = (u_{xξxη} − ũ_{x̃ν} H^ν_{ξη}) (a⁻¹)^ξ_λ (a⁻¹)^η_μ`.
    pub fn act2(&self, t: &SecJet) -> Result<SecJet> {
        let n = t.n();
        if self.dim() != n || t.order() < 2 {
            return Err(Error::DimensionMismatch("reparametrization needs an order-2 jet over the same parameters".into()));
        }
        let x = t.x();
        let eval = |e: &Expr| self.params.eval(e, x);
        let mut jac = DMatrix::zeros(n, n);
        let mut hess = vec![DMatrix::zeros(n, n); n];
        for nu in 0..n {
            for xi in 0..n {
                let d = self.components[nu].differentiate(self.params.name(xi));
                jac[(nu, xi)] = eval(&d)?;
                for eta in 0..n {
                    hess[nu][(xi, eta)] = eval(&d.differentiate(self.params.name(eta)))?;
                }
            }
        }
        let ainv = jac.try_inverse().ok_or(Error::SingularJacobian { scaled_det: 0.0 })?;
        let x_new = self.components.iter().map(eval).collect::<std::result::Result<Vec<_>, _>>()?;
        let first = |a: usize, lambda: usize| (0..n).map(|xi| t.d1(a, xi) * ainv[(xi, lambda)]).sum::<f64>();
        Ok(SecJet::from_fn(n, t.l(), 2, x_new, t.u().to_vec(), |a, sigma| match sigma.indices() {
            [lambda] => first(a, *lambda),
            [lambda, mu] => {
                let mut acc = 0.0;
                for xi in 0..n {
                    for eta in 0..n {
                        let inhom: f64 = (0..n).map(|nu| first(a, nu) * hess[nu][(xi, eta)]).sum();
                        acc += (t.d2(a, xi, eta) - inhom) * ainv[(xi, *lambda)] * ainv[(eta, *mu)];
                    }
                }
                acc
            }
            _ => unreachable!("order ≤ 2"),
        }))
    }
}
