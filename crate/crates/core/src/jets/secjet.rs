use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::MultiIndex;

/// A point of `J^r(pro_M)`: parameters `x^λ`, values `u^A` and derivatives
/// `u^A_{xσ}` for every `A ∈ 0..l` and `1 ≤ |σ| ≤ r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecJet {
    n: usize,
    l: usize,
    r: usize,
    x: Vec<f64>,
    u: Vec<f64>,
    derivs: BTreeMap<(usize, MultiIndex), f64>,
}

impl SecJet {
    pub fn new(n: usize, l: usize, r: usize, x: Vec<f64>, u: Vec<f64>, derivs: BTreeMap<(usize, MultiIndex), f64>) -> Result<SecJet> {
        if n == 0 || n > l {
            return Err(Error::BadSplit { n, dim: l });
        }
        if x.len() != n || u.len() != l {
            return Err(Error::DimensionMismatch(format!(
                "x has {} and u has {} coordinates, expected {n} and {l}",
                x.len(),
                u.len()
            )));
        }
        for a in 0..l {
            for sigma in MultiIndex::up_to(n, r) {
                if !derivs.contains_key(&(a, sigma.clone())) {
                    return Err(Error::Load(format!("missing derivative u^{}_x{sigma}", a + 1)));
                }
            }
        }
        if derivs.keys().any(|(a, s)| *a >= l || s.order() == 0 || s.order() > r || s.indices().iter().any(|&x| x >= n)) {
            return Err(Error::Load("derivative entry outside the jet's index ranges".into()));
        }
        Ok(SecJet { n, l, r, x, u, derivs })
    }

    pub fn from_fn(n: usize, l: usize, r: usize, x: Vec<f64>, u: Vec<f64>, mut f: impl FnMut(usize, &MultiIndex) -> f64) -> SecJet {
        assert_eq!((x.len(), u.len()), (n, l), "coordinate lengths");
        let mut derivs = BTreeMap::new();
        for a in 0..l {
            for sigma in MultiIndex::up_to(n, r) {
                let v = f(a, &sigma);
                derivs.insert((a, sigma), v);
            }
        }
        SecJet { n, l, r, x, u, derivs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn order(&self) -> usize {
        self.r
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// `u^A_{xσ}`. Panics if the entry is outside the jet.
    pub fn deriv(&self, a: usize, sigma: &MultiIndex) -> f64 {
        match self.derivs.get(&(a, sigma.clone())) {
            Some(v) => *v,
            None => panic!("u^{}_x{sigma} is not a coordinate of this jet", a + 1),
        }
    }

    pub fn d1(&self, a: usize, lambda: usize) -> f64 {
        self.deriv(a, &MultiIndex::single(lambda))
    }

    pub fn d2(&self, a: usize, lambda: usize, mu: usize) -> f64 {
        self.deriv(a, &MultiIndex::pair(lambda, mu))
    }

    pub fn derivs(&self) -> &BTreeMap<(usize, MultiIndex), f64> {
        &self.derivs
    }

    pub fn truncate(&self, r: usize) -> SecJet {
        assert!(r <= self.r, "cannot truncate to a higher order");
        let derivs = self.derivs.iter().filter(|((_, s), _)| s.order() <= r).map(|(k, v)| (k.clone(), *v)).collect();
        SecJet { n: self.n, l: self.l, r, x: self.x.clone(), u: self.u.clone(), derivs }
    }

    /// This jet's order-1 part extended by second derivatives `f(A, λ, μ)`.
    pub fn extend2(&self, mut f: impl FnMut(usize, usize, usize) -> f64) -> SecJet {
        let mut out = self.truncate(1);
        out.r = 2;
        for a in 0..self.l {
            for s in MultiIndex::of_order(self.n, 2) {
                let v = f(a, s.indices()[0], s.indices()[1]);
                out.derivs.insert((a, s), v);
            }
        }
        out
    }

    /// Greek block `J[ξ][λ] = u^ξ_{xλ}`.
    pub fn greek_block(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |xi, lambda| self.d1(xi, lambda))
    }

    /// Full Jacobian `u^A_{xλ}` (`l × n`).
    pub fn jacobian(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.l, self.n, |a, lambda| self.d1(a, lambda))
    }

    /// `|det J| / max|J_{ξλ}|^n` for the Greek block.
    pub fn scaled_greek_det(&self) -> f64 {
        let j = self.greek_block();
        let scale = j.amax();
        if scale == 0.0 {
            return 0.0;
        }
        (j.determinant() / scale.powi(self.n as i32)).abs()
    }

    /// Whether the full Jacobian has rank `n`.
    pub fn is_immersion(&self) -> bool {
        let j = self.jacobian();
        let scale = j.amax().max(f64::MIN_POSITIVE);
        j.rank(1e-12 * scale) == self.n
    }

    /// Coordinates of the order-1 part: `x^λ`, `u^A`, then `u^A_{xλ}` with
    /// `A` outer and `λ` inner.
    pub fn j1_coords(&self) -> Vec<f64> {
        let mut out = self.x.clone();
        out.extend_from_slice(&self.u);
        for a in 0..self.l {
            for lambda in 0..self.n {
                out.push(self.d1(a, lambda));
            }
        }
        out
    }

    pub fn from_j1_coords(n: usize, l: usize, coords: &[f64]) -> Result<SecJet> {
        if coords.len() != sec_j1_dim(n, l) {
            return Err(Error::DimensionMismatch(format!("{} J¹ coordinates, expected {}", coords.len(), sec_j1_dim(n, l))));
        }
        Ok(SecJet::from_fn(n, l, 1, coords[..n].to_vec(), coords[n..n + l].to_vec(), |a, s| {
            coords[n + l + a * n + s.indices()[0]]
        }))
    }

    /// Position of `u^A_{xλ}` in [`SecJet::j1_coords`].
    pub fn j1_slot(n: usize, l: usize, a: usize, lambda: usize) -> usize {
        n + l + a * n + lambda
    }
}

/// Dimension of `J¹(pro_M)` for `dim M = n`, `dim E = l`.
pub fn sec_j1_dim(n: usize, l: usize) -> usize {
    n + l + l * n
}
