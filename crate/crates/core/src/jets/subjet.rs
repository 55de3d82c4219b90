use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::CoordinateFrame;

use super::MultiIndex;

/// A point of `J^r(E, n)` in a divided chart.
///
/// `base` holds `(u^λ, u^i)` in frame order. Derivatives `u^i_σ` are keyed
/// by the global 0-based coordinate index `i ∈ n..l` and a multi-index over
/// the Greek coordinates. Every `(i, σ)` with `1 ≤ |σ| ≤ r` is present.
#[derive(Debug, Clone, PartialEq)]
pub struct SubJet {
    n: usize,
    m: usize,
    r: usize,
    base: Vec<f64>,
    derivs: BTreeMap<(usize, MultiIndex), f64>,
}

impl SubJet {
    pub fn new(n: usize, m: usize, r: usize, base: Vec<f64>, derivs: BTreeMap<(usize, MultiIndex), f64>) -> Result<SubJet> {
        if n == 0 || m == 0 {
            return Err(Error::BadSplit { n, dim: n + m });
        }
        if base.len() != n + m {
            return Err(Error::DimensionMismatch(format!("base has {} coordinates, expected {}", base.len(), n + m)));
        }
        for i in n..n + m {
            for sigma in MultiIndex::up_to(n, r) {
                if !derivs.contains_key(&(i, sigma.clone())) {
                    return Err(Error::Load(format!("missing derivative u^{}_{sigma}", i + 1)));
                }
            }
        }
        if derivs.keys().any(|(i, s)| *i < n || *i >= n + m || s.order() == 0 || s.order() > r || s.indices().iter().any(|&x| x >= n)) {
            return Err(Error::Load("derivative entry outside the jet's index ranges".into()));
        }
        Ok(SubJet { n, m, r, base, derivs })
    }

    /// Jet whose derivative values are produced by `f(i, σ)`.
    pub fn from_fn(n: usize, m: usize, r: usize, base: Vec<f64>, mut f: impl FnMut(usize, &MultiIndex) -> f64) -> SubJet {
        assert_eq!(base.len(), n + m, "base length");
        let mut derivs = BTreeMap::new();
        for i in n..n + m {
            for sigma in MultiIndex::up_to(n, r) {
                let v = f(i, &sigma);
                derivs.insert((i, sigma), v);
            }
        }
        SubJet { n, m, r, base, derivs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.n + self.m
    }

    pub fn order(&self) -> usize {
        self.r
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    /// `u^i_σ`. Panics if the entry is outside the jet.
    pub fn deriv(&self, i: usize, sigma: &MultiIndex) -> f64 {
        match self.derivs.get(&(i, sigma.clone())) {
            Some(v) => *v,
            None => panic!("u^{}_{sigma} is not a coordinate of this jet", i + 1),
        }
    }

    /// `u^i_λ`.
    pub fn d1(&self, i: usize, lambda: usize) -> f64 {
        self.deriv(i, &MultiIndex::single(lambda))
    }

    /// `u^i_{λξ}`.
    pub fn d2(&self, i: usize, lambda: usize, xi: usize) -> f64 {
        self.deriv(i, &MultiIndex::pair(lambda, xi))
    }

    pub fn derivs(&self) -> &BTreeMap<(usize, MultiIndex), f64> {
        &self.derivs
    }

    /// The projection to order `r' ≤ r`.
    pub fn truncate(&self, r: usize) -> SubJet {
        assert!(r <= self.r, "cannot truncate to a higher order");
        let derivs = self.derivs.iter().filter(|((_, s), _)| s.order() <= r).map(|(k, v)| (k.clone(), *v)).collect();
        SubJet { n: self.n, m: self.m, r, base: self.base.clone(), derivs }
    }

    /// This order-1 jet extended by second derivatives `f(i, λ, ξ)`,
    /// `λ ≤ ξ`.
    pub fn extend2(&self, mut f: impl FnMut(usize, usize, usize) -> f64) -> SubJet {
        assert!(self.r >= 1);
        let mut out = self.truncate(1);
        out.r = 2;
        for i in self.n..self.l() {
            for s in MultiIndex::of_order(self.n, 2) {
                let v = f(i, s.indices()[0], s.indices()[1]);
                out.derivs.insert((i, s), v);
            }
        }
        out
    }

    /// Coordinates of the order-1 part: `u^A` followed by `u^i_λ` with `i`
    /// outer and `λ` inner.
    pub fn j1_coords(&self) -> Vec<f64> {
        let mut out = self.base.clone();
        for i in self.n..self.l() {
            for lambda in 0..self.n {
                out.push(self.d1(i, lambda));
            }
        }
        out
    }

    pub fn from_j1_coords(n: usize, m: usize, coords: &[f64]) -> Result<SubJet> {
        let l = n + m;
        if coords.len() != j1_dim(n, m) {
            return Err(Error::DimensionMismatch(format!("{} J¹ coordinates, expected {}", coords.len(), j1_dim(n, m))));
        }
        Ok(SubJet::from_fn(n, m, 1, coords[..l].to_vec(), |i, s| coords[l + (i - n) * n + s.indices()[0]]))
    }

    /// Position of `u^i_λ` in [`SubJet::j1_coords`].
    pub fn j1_slot(n: usize, m: usize, i: usize, lambda: usize) -> usize {
        n + m + (i - n) * n + lambda
    }
}

/// Dimension of `J¹(E, n)` for `dim E = n + m`.
pub fn j1_dim(n: usize, m: usize) -> usize {
    n + m + m * n
}

/// Names of the `J¹(E, n)` coordinates in [`SubJet::j1_coords`] order:
/// the frame's names followed by `{u^i}_{u^λ}`.
pub fn j1_names(frame: &CoordinateFrame) -> Result<Vec<String>> {
    let n = frame.split();
    let mut names: Vec<String> = frame.names().iter().map(|s| s.to_string()).collect();
    for i in n..frame.dim() {
        for lambda in 0..n {
            names.push(format!("{}_{}", frame.name(i), frame.name(lambda)));
        }
    }
    let mut seen = std::collections::HashSet::new();
    for name in &names {
        if !seen.insert(name.as_str()) {
            return Err(Error::FrameMismatch(format!("jet coordinate name `{name}` collides with a base coordinate")));
        }
    }
    Ok(names)
}
