use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{CoordinateFrame, Expr};
use crate::jets::{j1_names, AffineMap};

/// Which first-order jet space a map or field lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JetKind {
    /// `J¹(E, n)`, coordinates of [`crate::jets::SubJet::j1_coords`].
    Subjet,
    /// `J¹(pro_M)`, coordinates of [`crate::jets::SecJet::j1_coords`].
    Secjet,
}

/// How a [`JetMap`] was obtained. Prolonged maps are contact by
/// construction; raw maps are checked for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapOrigin {
    Prolonged,
    Raw,
}

/// Coordinate frame of `J¹(E, n)` built from a frame of `E` split at `n`.
pub fn subjet_frame(e: &CoordinateFrame) -> Result<CoordinateFrame> {
    Ok(CoordinateFrame::new(&j1_names(e)?, e.split())?)
}

/// Coordinate frame of `J¹(pro_M)`: `x1..xn`, the names of `E`, then
/// `{u}_x{λ}`.
pub fn secjet_frame(e: &CoordinateFrame, n: usize) -> Result<CoordinateFrame> {
    let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    names.extend(e.names().iter().map(|s| s.to_string()));
    for a in 0..e.dim() {
        for lambda in 1..=n {
            names.push(format!("{}_x{lambda}", e.name(a)));
        }
    }
    CoordinateFrame::new(&names, n).map_err(|err| Error::FrameMismatch(format!("section jet coordinates: {err}")))
}

/// A smooth map of a first-order jet space into itself, with its symbolic
/// Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct JetMap {
    kind: JetKind,
    origin: MapOrigin,
    n: usize,
    l: usize,
    frame: CoordinateFrame,
    components: Vec<Expr>,
    jacobian: Vec<Vec<Expr>>,
}

fn check_symbols(frame: &CoordinateFrame, exprs: &[Expr], what: &str) -> Result<()> {
    for (a, e) in exprs.iter().enumerate() {
        if let Some(sym) = e.symbols().into_iter().find(|s| !frame.contains(s)) {
            return Err(Error::FrameMismatch(format!("{what} component {} uses unknown symbol `{sym}`", a + 1)));
        }
    }
    Ok(())
}

fn jet_frame(kind: JetKind, e: &CoordinateFrame, n: usize) -> Result<CoordinateFrame> {
    match kind {
        JetKind::Subjet => subjet_frame(&e.with_split(n)?),
        JetKind::Secjet => secjet_frame(e, n),
    }
}

impl JetMap {
    /// A map given directly by its components in the jet coordinates of
    /// `kind` over `E = e` (split at `n` for sub-manifold jets).
    pub fn new(kind: JetKind, e: &CoordinateFrame, n: usize, components: Vec<Expr>) -> Result<JetMap> {
        JetMap::build(kind, MapOrigin::Raw, e, n, components)
    }

    /// Parse components written in the jet coordinate names.
    pub fn parse(kind: JetKind, e: &CoordinateFrame, n: usize, components: &[&str]) -> Result<JetMap> {
        let frame = jet_frame(kind, e, n)?;
        let parsed = components.iter().map(|t| Expr::parse(t, &frame)).collect::<std::result::Result<Vec<_>, _>>()?;
        JetMap::new(kind, e, n, parsed)
    }

    fn build(kind: JetKind, origin: MapOrigin, e: &CoordinateFrame, n: usize, components: Vec<Expr>) -> Result<JetMap> {
        let frame = jet_frame(kind, e, n)?;
        if components.len() != frame.dim() {
            return Err(Error::DimensionMismatch(format!(
                "jet map with {} components on a {}-dimensional jet space",
                components.len(),
                frame.dim()
            )));
        }
        check_symbols(&frame, &components, "jet map")?;
        let jacobian = components
            .iter()
            .map(|c| frame.names().iter().map(|v| c.differentiate(v)).collect())
            .collect();
        Ok(JetMap { kind, origin, n, l: e.dim(), frame, components, jacobian })
    }

    /// Identity map of the jet space of `kind`.
    pub fn identity(kind: JetKind, e: &CoordinateFrame, n: usize) -> Result<JetMap> {
        let frame = jet_frame(kind, e, n)?;
        let components = (0..frame.dim()).map(|i| frame.symbol(i)).collect();
        JetMap::build(kind, MapOrigin::Prolonged, e, n, components)
    }

    /// Action of an affine change of parameters on `J¹(pro_M)`:
    /// `x̃ = a x + b`, `ũ^A = u^A`, `ũ^A_{x̃λ} = u^A_{xξ} (a⁻¹)^ξ_λ`.
    pub fn affine_action(aff: &AffineMap, e: &CoordinateFrame) -> Result<JetMap> {
        let n = aff.dim();
        let frame = secjet_frame(e, n)?;
        let l = e.dim();
        let num = |v: f64| Expr::constant(crate::expr::Number::from_f64(v));
        let mut components = Vec::with_capacity(frame.dim());
        for lambda in 0..n {
            let row = (0..n).map(|mu| num(aff.matrix()[(lambda, mu)]) * frame.symbol(mu));
            components.push(Expr::sum(row.chain([num(aff.translation()[lambda])])).simplify());
        }
        for a in 0..l {
            components.push(frame.symbol(n + a));
        }
        for a in 0..l {
            for lambda in 0..n {
                let terms = (0..n).map(|xi| frame.symbol(n + l + a * n + xi) * num(aff.inverse_matrix()[(xi, lambda)]));
                components.push(Expr::sum(terms).simplify());
            }
        }
        JetMap::build(JetKind::Secjet, MapOrigin::Prolonged, e, n, components)
    }

    pub fn kind(&self) -> JetKind {
        self.kind
    }

    pub fn origin(&self) -> MapOrigin {
        self.origin
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Frame of the jet coordinates the components are written in.
    pub fn frame(&self) -> &CoordinateFrame {
        &self.frame
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.components.iter().map(|c| Ok(self.frame.eval(c, point)?)).collect()
    }

    /// Jacobian matrix at `point`, rows indexed by component.
    pub fn jacobian(&self, point: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.jacobian
            .iter()
            .map(|row| row.iter().map(|d| Ok(self.frame.eval(d, point)?)).collect())
            .collect()
    }
}

/// A vector field on a first-order jet space with its symbolic Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct JetField {
    n: usize,
    frame: CoordinateFrame,
    components: Vec<Expr>,
    jacobian: Vec<Vec<Expr>>,
}

impl JetField {
    /// A field on `J¹(E, n)` given by its components in the jet coordinates.
    pub fn new(e: &CoordinateFrame, n: usize, components: Vec<Expr>) -> Result<JetField> {
        let frame = subjet_frame(&e.with_split(n)?)?;
        if components.len() != frame.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector field with {} components on a {}-dimensional jet space",
                components.len(),
                frame.dim()
            )));
        }
        check_symbols(&frame, &components, "vector field")?;
        let jacobian = components
            .iter()
            .map(|c| frame.names().iter().map(|v| c.differentiate(v)).collect())
            .collect();
        Ok(JetField { n, frame, components, jacobian })
    }

    pub fn parse(e: &CoordinateFrame, n: usize, components: &[&str]) -> Result<JetField> {
        let frame = subjet_frame(&e.with_split(n)?)?;
        let parsed = components.iter().map(|t| Expr::parse(t, &frame)).collect::<std::result::Result<Vec<_>, _>>()?;
        JetField::new(e, n, parsed)
    }

    /// The coordinate field `∂/∂(coordinate index)`.
    pub fn coordinate(e: &CoordinateFrame, n: usize, index: usize) -> Result<JetField> {
        let dim = subjet_frame(&e.with_split(n)?)?.dim();
        if index >= dim {
            return Err(Error::InvalidArgument(format!("coordinate {index} of a {dim}-dimensional jet space")));
        }
        JetField::new(e, n, (0..dim).map(|i| if i == index { Expr::one() } else { Expr::zero() }).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frame(&self) -> &CoordinateFrame {
        &self.frame
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub(crate) fn symbolic_jacobian(&self) -> &[Vec<Expr>] {
        &self.jacobian
    }
}

/// Symbolic determinant by cofactor expansion along the first row.
fn determinant(m: &[Vec<Expr>]) -> Expr {
    match m.len() {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        size => Expr::sum((0..size).map(|c| {
            let sign = if c % 2 == 0 { Expr::one() } else { Expr::int(-1) };
            Expr::product([sign, m[0][c].clone(), determinant(&minor(m, 0, c))])
        })),
    }
}

fn minor(m: &[Vec<Expr>], row: usize, col: usize) -> Vec<Vec<Expr>> {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != row)
        .map(|(_, rr)| rr.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, e)| e.clone()).collect())
        .collect()
}

/// Symbolic inverse via the adjugate.
fn inverse(m: &[Vec<Expr>]) -> Vec<Vec<Expr>> {
    let size = m.len();
    let det = determinant(m).simplify();
    (0..size)
        .map(|r| {
            (0..size)
                .map(|c| {
                    let sign = if (r + c) % 2 == 0 { Expr::one() } else { Expr::int(-1) };
                    (sign * determinant(&minor(m, c, r)) / det.clone()).simplify()
                })
                .collect()
        })
        .collect()
}

/// Total derivative `D_λ F = ∂_λ F + u^i_λ ∂_i F` on `J¹(E, n)`.
fn total_derivative(f: &Expr, lambda: usize, e: &CoordinateFrame, jet: &CoordinateFrame) -> Expr {
    let n = e.split();
    let m = e.dim() - n;
    let mut terms = vec![f.differentiate(e.name(lambda))];
    for i in n..e.dim() {
        let slope = jet.symbol(crate::jets::SubJet::j1_slot(n, m, i, lambda));
        terms.push(slope * f.differentiate(e.name(i)));
    }
    Expr::sum(terms).simplify()
}

/// First prolongation of a point map `F` of `E` (components in the names
/// of `e`, split at `n`) to `J¹(E, n)`:
/// `ũ^A = F^A`, `ũ^j_ξ = D_λF^j (B⁻¹)^λ_ξ` with `B^ξ_λ = D_λF^ξ`.
pub fn prolong_point_map(e: &CoordinateFrame, n: usize, point_map: &[Expr]) -> Result<JetMap> {
    let e = e.with_split(n)?;
    if point_map.len() != e.dim() {
        return Err(Error::DimensionMismatch(format!("point map with {} components on E of dimension {}", point_map.len(), e.dim())));
    }
    check_symbols(&e, point_map, "point map")?;
    let jet = subjet_frame(&e)?;
    let w: Vec<Vec<Expr>> = point_map.iter().map(|f| (0..n).map(|lambda| total_derivative(f, lambda, &e, &jet)).collect()).collect();
    let b_inv = inverse(&w[..n]);
    let mut components: Vec<Expr> = point_map.to_vec();
    for row in &w[n..] {
        for xi in 0..n {
            components.push(Expr::sum((0..n).map(|lambda| row[lambda].clone() * b_inv[lambda][xi].clone())).simplify());
        }
    }
    JetMap::build(JetKind::Subjet, MapOrigin::Prolonged, &e, n, components)
}

/// Parse a point map written in the names of `e`.
pub fn parse_point_map(e: &CoordinateFrame, components: &[&str]) -> Result<Vec<Expr>> {
    Ok(components.iter().map(|t| Expr::parse(t, e)).collect::<std::result::Result<Vec<_>, _>>()?)
}

/// First prolongation of a vector field `η^A ∂_A` of `E` to `J¹(E, n)`:
/// `φ^k_ξ = D_ξ η^k − u^k_β D_ξ η^β`.
pub fn prolong_point_field(e: &CoordinateFrame, n: usize, field: &[Expr]) -> Result<JetField> {
    let e = e.with_split(n)?;
    if field.len() != e.dim() {
        return Err(Error::DimensionMismatch(format!("vector field with {} components on E of dimension {}", field.len(), e.dim())));
    }
    check_symbols(&e, field, "vector field")?;
    let jet = subjet_frame(&e)?;
    let m = e.dim() - n;
    let mut components: Vec<Expr> = field.to_vec();
    for k in n..e.dim() {
        for xi in 0..n {
            let mut terms = vec![total_derivative(&field[k], xi, &e, &jet)];
            for beta in 0..n {
                let slope = jet.symbol(crate::jets::SubJet::j1_slot(n, m, k, beta));
                terms.push(Expr::int(-1) * slope * total_derivative(&field[beta], xi, &e, &jet));
            }
            components.push(Expr::sum(terms).simplify());
        }
    }
    JetField::new(&e, n, components)
}

/// Serialized form of a raw [`JetMap`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetMapSpec {
    pub kind: JetKind,
    /// Coordinates of `E`.
    pub coords: Vec<String>,
    pub n: usize,
    /// Components in the jet coordinate names, in jet coordinate order.
    pub components: Vec<String>,
}

impl JetMapSpec {
    pub fn from_json(text: &str) -> Result<JetMapSpec> {
        serde_json::from_str(text)
            .map_err(|e| Error::Load(format!("jet map spec, line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn build(&self) -> Result<JetMap> {
        let split = self.n.min(self.coords.len()).max(1);
        let e = CoordinateFrame::new(&self.coords, split)?;
        let parts: Vec<&str> = self.components.iter().map(String::as_str).collect();
        JetMap::parse(self.kind, &e, self.n, &parts)
    }
}
