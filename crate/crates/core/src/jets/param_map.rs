use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::{CoordinateFrame, Expr};

use super::{MultiIndex, SecJet};

/// A parametrized submanifold `x ↦ s^A(x)` of `E`, `A = 1..l`, over the
/// parameters of `params` (all of them Greek).
#[derive(Debug, Clone, PartialEq)]
pub struct ParamMap {
    params: CoordinateFrame,
    components: Vec<Expr>,
}

impl ParamMap {
    pub fn new(params: CoordinateFrame, components: Vec<Expr>) -> Result<ParamMap> {
        for (a, e) in components.iter().enumerate() {
            if let Some(sym) = e.symbols().into_iter().find(|s| !params.contains(s)) {
                return Err(Error::FrameMismatch(format!("component {} uses `{sym}`, not a parameter", a + 1)));
            }
        }
        Ok(ParamMap { params, components })
    }

    /// Parse components written in the parameters `x1, …, xn`.
    pub fn parse(n: usize, components: &[&str]) -> Result<ParamMap> {
        let params = CoordinateFrame::numbered("x", n, n)?;
        let parsed = components.iter().map(|t| Expr::parse(t, &params)).collect::<std::result::Result<Vec<_>, _>>()?;
        ParamMap::new(params, parsed)
    }

    pub fn params(&self) -> &CoordinateFrame {
        &self.params
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn n(&self) -> usize {
        self.params.dim()
    }

    pub fn l(&self) -> usize {
        self.components.len()
    }

    /// Symbolic partial derivatives `∂^σ s^A` for `1 ≤ |σ| ≤ r`.
    pub fn derivative_table(&self, r: usize) -> BTreeMap<(usize, MultiIndex), Expr> {
        let mut table: BTreeMap<(usize, MultiIndex), Expr> = BTreeMap::new();
        for (a, s) in self.components.iter().enumerate() {
            table.insert((a, MultiIndex::empty()), s.clone());
        }
        for order in 1..=r {
            for sigma in MultiIndex::of_order(self.n(), order) {
                let (parent, last) = sigma.split_last().expect("order ≥ 1");
                for a in 0..self.l() {
                    let d = table[&(a, parent.clone())].differentiate(self.params.name(last));
                    table.insert((a, sigma.clone()), d);
                }
            }
        }
        table.retain(|(_, s), _| s.order() > 0);
        table
    }

    /// The `r`-jet of the map at `x`.
    pub fn prolong(&self, x: &[f64], r: usize) -> Result<SecJet> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch(format!("point has {} parameters, expected {}", x.len(), self.n())));
        }
        let u = self.components.iter().map(|e| self.params.eval(e, x)).collect::<std::result::Result<Vec<_>, _>>()?;
        let mut derivs = BTreeMap::new();
        for (k, e) in self.derivative_table(r) {
            derivs.insert(k, self.params.eval(&e, x)?);
        }
        SecJet::new(self.n(), self.l(), r, x.to_vec(), u, derivs)
    }

    /// `s ∘ φ` for a map `φ` of the parameter space given by expressions in
    /// the same parameters.
    pub fn compose(&self, inner: &[Expr]) -> Result<ParamMap> {
        if inner.len() != self.n() {
            return Err(Error::DimensionMismatch(format!("inner map has {} components, expected {}", inner.len(), self.n())));
        }
        let components = self
            .components
            .iter()
            .map(|e| e.substitute(&|name| self.params.index_of(name).map(|i| inner[i].clone())).simplify())
            .collect();
        ParamMap::new(self.params.clone(), components)
    }
}
