//! JSON connection specs.
//!
//! ```json
//! {"coords": ["u1", "u2"], "n": 1,
//!  "christoffel": [{"lower": [1, 1], "upper": 2, "expr": "u1*u2"}],
//!  "singular_points": [], "metric": [["1", "0"], ["0", "1"]]}
//! ```
//!
//! Indices are 1-based, unlisted components are zero. `metric` is optional.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{CoordinateFrame, Expr, ExprError, GRAMMAR};

use super::Connection;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChristoffelEntry {
    pub lower: [usize; 2],
    pub upper: usize,
    pub expr: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionSpec {
    pub coords: Vec<String>,
    pub n: usize,
    #[serde(default)]
    pub christoffel: Vec<ChristoffelEntry>,
    #[serde(default)]
    pub singular_points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<String>>>,
}

fn expr_error(context: &str, text: &str, e: ExprError) -> Error {
    match e {
        ExprError::Syntax { .. } => Error::Load(format!("{context}: `{text}`: {e}; grammar: {GRAMMAR}")),
        other => Error::Load(format!("{context}: `{text}`: {other}")),
    }
}

impl ConnectionSpec {
    pub fn from_json(text: &str) -> Result<ConnectionSpec> {
        serde_json::from_str(text).map_err(|e| {
            Error::Load(format!("invalid connection spec at line {} column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn build(&self) -> Result<Connection> {
        let frame = CoordinateFrame::new(&self.coords, self.n).map_err(|e| Error::Load(e.to_string()))?;
        let l = frame.dim();
        let mut components = Vec::with_capacity(self.christoffel.len());
        for (idx, entry) in self.christoffel.iter().enumerate() {
            let [a, b] = entry.lower;
            let c = entry.upper;
            if [a, b, c].iter().any(|&x| x == 0 || x > l) {
                return Err(Error::Load(format!(
                    "christoffel[{idx}]: indices must lie in 1..={l}, got lower {:?} upper {c}",
                    entry.lower
                )));
            }
            let e = Expr::parse(&entry.expr, &frame)
                .map_err(|e| expr_error(&format!("christoffel[{idx}]"), &entry.expr, e))?;
            components.push((a - 1, c - 1, b - 1, e));
        }
        let mut g = Connection::from_components(frame.clone(), components)?;
        for p in &self.singular_points {
            if p.len() != l {
                return Err(Error::Load(format!("singular point {p:?} must have {l} coordinates")));
            }
        }
        g = g.with_singular_points(self.singular_points.clone());
        if let Some(rows) = &self.metric {
            if rows.len() != l || rows.iter().any(|r| r.len() != l) {
                return Err(Error::Load(format!("metric must be a {l}×{l} matrix")));
            }
            let mut metric = Vec::with_capacity(l);
            for (r, row) in rows.iter().enumerate() {
                let mut parsed = Vec::with_capacity(l);
                for (c, text) in row.iter().enumerate() {
                    parsed.push(
                        Expr::parse(text, &frame)
                            .map_err(|e| expr_error(&format!("metric[{r}][{c}]"), text, e))?,
                    );
                }
                metric.push(parsed);
            }
            g = g.with_metric(metric);
        }
        Ok(g)
    }

    /// Spec describing `g` (stored components only).
    pub fn from_connection(g: &Connection) -> ConnectionSpec {
        ConnectionSpec {
            coords: g.frame().names().iter().map(|s| s.to_string()).collect(),
            n: g.split(),
            christoffel: g
                .components()
                .map(|((a, c, b), e)| ChristoffelEntry { lower: [a + 1, b + 1], upper: c + 1, expr: e.to_string() })
                .collect(),
            singular_points: g.singular_points().to_vec(),
            metric: g
                .metric()
                .map(|rows| rows.iter().map(|r| r.iter().map(Expr::to_string).collect()).collect()),
        }
    }
}

impl Connection {
    pub fn from_json(text: &str) -> Result<Connection> {
        ConnectionSpec::from_json(text)?.build()
    }

    pub fn to_json(&self) -> String {
        ConnectionSpec::from_connection(self).to_json()
    }
}
