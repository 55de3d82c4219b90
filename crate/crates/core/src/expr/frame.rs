use std::collections::HashMap;
use std::sync::Arc;

use super::{Expr, ExprError};

/// Ordered coordinate names with a split position `n`.
///
/// The first `n` coordinates play the role of the independent variables
/// `u^λ` of a divided chart, the remaining ones are the dependent `u^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateFrame {
    names: Vec<Arc<str>>,
    split: usize,
    index: HashMap<Arc<str>, usize>,
}

impl CoordinateFrame {
    pub fn new<S: AsRef<str>>(names: &[S], split: usize) -> Result<Self, ExprError> {
        let names: Vec<Arc<str>> = names.iter().map(|s| Arc::from(s.as_ref())).collect();
        if names.is_empty() {
            return Err(ExprError::InvalidFrame("no coordinates".into()));
        }
        if split == 0 || split > names.len() {
            return Err(ExprError::InvalidFrame(format!(
                "split {split} outside 1..={}",
                names.len()
            )));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) || super::Func::from_name(name).is_some() {
                return Err(ExprError::InvalidFrame(format!(
                    "`{name}` is not a usable coordinate name"
                )));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(ExprError::InvalidFrame(format!("duplicate coordinate `{name}`")));
            }
        }
        Ok(CoordinateFrame { names, split, index })
    }

    /// Frame `prefix1, …, prefixN` with the given split.
    pub fn numbered(prefix: &str, dim: usize, split: usize) -> Result<Self, ExprError> {
        let names: Vec<String> = (1..=dim).map(|i| format!("{prefix}{i}")).collect();
        CoordinateFrame::new(&names, split)
    }

    pub fn with_split(&self, split: usize) -> Result<Self, ExprError> {
        CoordinateFrame::new(&self.names, split)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn names(&self) -> &[Arc<str>] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// The coordinate function `i` as an expression.
    pub fn symbol(&self, i: usize) -> Expr {
        Expr::Var(self.names[i].clone())
    }

    /// Evaluate `expr` at `point`, given in frame order.
    pub fn eval(&self, expr: &Expr, point: &[f64]) -> Result<f64, ExprError> {
        debug_assert_eq!(point.len(), self.dim());
        expr.eval_with(&|name| self.index_of(name).map(|i| point[i]))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
