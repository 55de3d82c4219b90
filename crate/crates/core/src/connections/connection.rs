use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::{CoordinateFrame, Expr};

/// A torsion-free linear connection given by symbolic Christoffel symbols.
///
/// `Γ_A^C_B` is stored once under the key `(min(A,B), C, max(A,B))`, so the
/// lower pair is symmetric by construction. Missing keys are zero. All
/// indices are 0-based; the frame's split separates Greek (`0..n`) from
/// Latin (`n..l`) indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    frame: CoordinateFrame,
    symbols: BTreeMap<(usize, usize, usize), Expr>,
    singular_points: Vec<Vec<f64>>,
    metric: Option<Vec<Vec<Expr>>>,
}

fn key(a: usize, c: usize, b: usize) -> (usize, usize, usize) {
    if a <= b {
        (a, c, b)
    } else {
        (b, c, a)
    }
}

impl Connection {
    /// The flat connection of the frame's coordinates.
    pub fn zero(frame: CoordinateFrame) -> Connection {
        Connection { frame, symbols: BTreeMap::new(), singular_points: Vec::new(), metric: None }
    }

    /// Build from `(A, C, B, Γ_A^C_B)` entries. Listing both `(A, B)` and
    /// `(B, A)` with structurally different expressions is an error.
    pub fn from_components<I>(frame: CoordinateFrame, components: I) -> Result<Connection>
    where
        I: IntoIterator<Item = (usize, usize, usize, Expr)>,
    {
        let mut g = Connection::zero(frame);
        let mut seen: BTreeMap<(usize, usize, usize), Expr> = BTreeMap::new();
        for (a, c, b, e) in components {
            g.check_index(a)?;
            g.check_index(b)?;
            g.check_index(c)?;
            let k = key(a, c, b);
            if let Some(prev) = seen.get(&k) {
                if prev.simplify() != e.simplify() {
                    return Err(Error::Load(format!(
                        "conflicting entries for lower pair ({}, {}) upper {}: `{prev}` vs `{e}`",
                        a + 1,
                        b + 1,
                        c + 1
                    )));
                }
                continue;
            }
            seen.insert(k, e.clone());
            g.set(a, c, b, e);
        }
        Ok(g)
    }

    fn check_index(&self, a: usize) -> Result<()> {
        if a >= self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "index {} outside 1..={}",
                a + 1,
                self.dim()
            )));
        }
        Ok(())
    }

    /// Set `Γ_A^C_B` (and hence `Γ_B^C_A`).
    pub fn set(&mut self, a: usize, c: usize, b: usize, e: Expr) {
        let k = key(a, c, b);
        if e.is_zero() {
            self.symbols.remove(&k);
        } else {
            self.symbols.insert(k, e);
        }
    }

    pub fn get(&self, a: usize, c: usize, b: usize) -> Option<&Expr> {
        self.symbols.get(&key(a, c, b))
    }

    /// `Γ_A^C_B` as an expression (zero when absent).
    pub fn symbol(&self, a: usize, c: usize, b: usize) -> Expr {
        self.get(a, c, b).cloned().unwrap_or_default()
    }

    /// Stored components as `((A, C, B), Γ_A^C_B)` with `A ≤ B`.
    pub fn components(&self) -> impl Iterator<Item = ((usize, usize, usize), &Expr)> {
        self.symbols.iter().map(|(k, e)| (*k, e))
    }

    pub fn frame(&self) -> &CoordinateFrame {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn split(&self) -> usize {
        self.frame.split()
    }

    /// Same symbols, divided chart with `n` Greek coordinates.
    pub fn with_split(&self, n: usize) -> Result<Connection> {
        if n == 0 || n > self.dim() {
            return Err(Error::BadSplit { n, dim: self.dim() });
        }
        let mut g = self.clone();
        g.frame = self.frame.with_split(n)?;
        Ok(g)
    }

    /// Points where the symbols are known to blow up; samplers stay away.
    pub fn singular_points(&self) -> &[Vec<f64>] {
        &self.singular_points
    }

    pub fn with_singular_points(mut self, points: Vec<Vec<f64>>) -> Self {
        self.singular_points = points;
        self
    }

    /// Optional metric the connection was derived from, used for speed
    /// diagnostics along geodesics.
    pub fn metric(&self) -> Option<&Vec<Vec<Expr>>> {
        self.metric.as_ref()
    }

    pub fn with_metric(mut self, metric: Vec<Vec<Expr>>) -> Self {
        self.metric = Some(metric);
        self
    }

    pub fn is_flat(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Apply `f` to every stored symbol, dropping results that simplify to zero.
    pub fn map_symbols(&self, f: impl Fn((usize, usize, usize), &Expr) -> Expr) -> Connection {
        let mut out = Connection { symbols: BTreeMap::new(), ..self.clone() };
        for (k, e) in &self.symbols {
            out.set(k.0, k.1, k.2, f(*k, e).simplify());
        }
        out
    }

    /// Numeric values of all symbols at `point`.
    pub fn eval(&self, point: &[f64]) -> Result<Christoffel> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, connection has {}",
                point.len(),
                self.dim()
            )));
        }
        let mut out = Christoffel::zeros(self.dim());
        for (&(a, c, b), e) in &self.symbols {
            let v = self.frame.eval(e, point)?;
            out.set(a, c, b, v);
        }
        Ok(out)
    }

    /// Metric components at `point`, if a metric is attached.
    pub fn eval_metric(&self, point: &[f64]) -> Option<Result<Vec<Vec<f64>>>> {
        let metric = self.metric.as_ref()?;
        Some(
            metric
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| self.frame.eval(e, point).map_err(Error::from))
                        .collect::<Result<Vec<f64>>>()
                })
                .collect(),
        )
    }
}

/// Christoffel symbols evaluated at a point, dense and symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    dim: usize,
    values: Vec<f64>,
}

impl Christoffel {
    pub fn zeros(dim: usize) -> Christoffel {
        Christoffel { dim, values: vec![0.0; dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ_A^C_B`.
    #[inline]
    pub fn get(&self, a: usize, c: usize, b: usize) -> f64 {
        self.values[(a * self.dim + c) * self.dim + b]
    }

    pub fn set(&mut self, a: usize, c: usize, b: usize, v: f64) {
        let l = self.dim;
        self.values[(a * l + c) * l + b] = v;
        self.values[(b * l + c) * l + a] = v;
    }

    pub fn max_abs_diff(&self, other: &Christoffel) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
