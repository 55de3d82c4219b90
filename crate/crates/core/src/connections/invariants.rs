use crate::error::{Error, Result};
use crate::expr::{CoordinateFrame, Expr};
use crate::sampling::{max_deviation, EqualityConfig};

use super::Connection;

fn delta(a: usize, b: usize) -> bool {
    a == b
}

/// Projective change of connection by the one-form `Φ`:
/// `Γ'_A^C_B = Γ_A^C_B − δ_A^C Φ_B − δ_B^C Φ_A`.
pub fn projective_shift(g: &Connection, phi: &[Expr]) -> Result<Connection> {
    let l = g.dim();
    if phi.len() != l {
        return Err(Error::DimensionMismatch(format!("one-form has {} components, expected {l}", phi.len())));
    }
    let mut out = g.clone();
    for a in 0..l {
        for b in a..l {
            for c in 0..l {
                let mut terms = vec![g.symbol(a, c, b)];
                if delta(a, c) {
                    terms.push(-phi[b].clone());
                }
                if delta(b, c) {
                    terms.push(-phi[a].clone());
                }
                if terms.len() > 1 {
                    out.set(a, c, b, Expr::sum(terms).simplify());
                }
            }
        }
    }
    Ok(out)
}

/// Thomas projective invariants
/// `Π_A^C_B = Γ_A^C_B − (Γ_A^F_F δ_B^C + Γ_B^F_F δ_A^C) / (l+1)`.
///
/// `Π` has the symmetries of a torsion-free connection, so it reuses that
/// storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjInvariants {
    pi: Connection,
}

impl ProjInvariants {
    pub fn component(&self, a: usize, c: usize, b: usize) -> Expr {
        self.pi.symbol(a, c, b)
    }

    pub fn as_table(&self) -> &Connection {
        &self.pi
    }

    /// All `l³` components in `(A, C, B)` row-major order.
    pub fn flat(&self) -> Vec<Expr> {
        let l = self.pi.dim();
        let mut out = Vec::with_capacity(l * l * l);
        for a in 0..l {
            for c in 0..l {
                for b in 0..l {
                    out.push(self.pi.symbol(a, c, b));
                }
            }
        }
        out
    }
}

pub fn thomas_pi(g: &Connection) -> ProjInvariants {
    let l = g.dim();
    let weight = Expr::rational(1, l as i64 + 1);
    let traces: Vec<Expr> = (0..l)
        .map(|a| Expr::sum((0..l).map(|f| g.symbol(a, f, f))).simplify())
        .collect();
    let mut pi = Connection::zero(g.frame().clone()).with_singular_points(g.singular_points().to_vec());
    for a in 0..l {
        for b in a..l {
            for c in 0..l {
                let mut correction = Vec::new();
                if delta(b, c) {
                    correction.push(traces[a].clone());
                }
                if delta(a, c) {
                    correction.push(traces[b].clone());
                }
                let e = g.symbol(a, c, b) - weight.clone() * Expr::sum(correction);
                pi.set(a, c, b, e.simplify());
            }
        }
    }
    ProjInvariants { pi }
}

/// A dense family of expressions with a fixed index shape (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct IndexedFamily {
    shape: Vec<usize>,
    entries: Vec<Expr>,
}

impl IndexedFamily {
    fn build(shape: Vec<usize>, f: impl Fn(&[usize]) -> Expr) -> IndexedFamily {
        let total: usize = shape.iter().product();
        let mut entries = Vec::with_capacity(total);
        let mut idx = vec![0; shape.len()];
        for _ in 0..total {
            entries.push(f(&idx).simplify());
            for d in (0..shape.len()).rev() {
                idx[d] += 1;
                if idx[d] < shape[d] {
                    break;
                }
                idx[d] = 0;
            }
        }
        IndexedFamily { shape, entries }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn entries(&self) -> &[Expr] {
        &self.entries
    }

    pub fn get(&self, index: &[usize]) -> &Expr {
        assert_eq!(index.len(), self.shape.len(), "index rank");
        let mut flat = 0;
        for (i, (&k, &s)) in index.iter().zip(&self.shape).enumerate() {
            assert!(k < s, "index {k} out of range in slot {i}");
            flat = flat * s + k;
        }
        &self.entries[flat]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Expr::is_zero)
    }
}

/// The four coefficient families of the totally geodesic equation,
/// which are `n`-Grassmannian invariants.
///
/// Greek indices run over `0..n`, Latin ones over `0..m` (local numbering;
/// Latin `i` is the global coordinate `n + i`).
///
/// * `g0[λ,k,ξ] = Γ_λ^k_ξ`
/// * `g1[λ,k,i,β,ξ] = δ_ξ^β Γ_λ^k_i + δ_λ^β Γ_i^k_ξ − δ_i^k Γ_λ^β_ξ`
/// * `g2[j,k,i,α,β,λ,ξ]`: the coefficient of `u^j_α u^i_β`,
///   `δ_λ^α δ_ξ^β Γ_j^k_i − δ_ξ^α δ_i^k Γ_λ^β_j − δ_λ^α δ_i^k Γ_j^β_ξ`,
///   symmetrized under `(j,α) ↔ (i,β)` because only that part multiplies
///   the commuting monomial
/// * `g3[j,β,i] = Γ_j^β_i`
#[derive(Debug, Clone, PartialEq)]
pub struct GrassInvariants {
    pub n: usize,
    pub m: usize,
    pub g0: IndexedFamily,
    pub g1: IndexedFamily,
    pub g2: IndexedFamily,
    pub g3: IndexedFamily,
}

fn check_split(g: &Connection, n: usize) -> Result<()> {
    if n == 0 || n >= g.dim() {
        return Err(Error::BadSplit { n, dim: g.dim() });
    }
    Ok(())
}

pub fn grass_invariants(g: &Connection, n: usize) -> Result<GrassInvariants> {
    check_split(g, n)?;
    let m = g.dim() - n;
    let s = |a: usize, c: usize, b: usize| g.symbol(a, c, b);
    let d = |a: usize, b: usize| a == b;
    let when = |cond: bool, e: Expr| if cond { e } else { Expr::zero() };

    let g0 = IndexedFamily::build(vec![n, m, n], |ix| s(ix[0], n + ix[1], ix[2]));
    let g1 = IndexedFamily::build(vec![n, m, m, n, n], |ix| {
        let (lam, k, i, beta, xi) = (ix[0], n + ix[1], n + ix[2], ix[3], ix[4]);
        when(d(xi, beta), s(lam, k, i)) + when(d(lam, beta), s(i, k, xi)) - when(d(i, k), s(lam, beta, xi))
    });
    let raw_g2 = |j: usize, k: usize, i: usize, alpha: usize, beta: usize, lam: usize, xi: usize| {
        when(d(lam, alpha) && d(xi, beta), s(j, k, i))
            - when(d(xi, alpha) && d(i, k), s(lam, beta, j))
            - when(d(lam, alpha) && d(i, k), s(j, beta, xi))
    };
    let g2 = IndexedFamily::build(vec![m, m, m, n, n, n, n], |ix| {
        let (j, k, i) = (n + ix[0], n + ix[1], n + ix[2]);
        let (alpha, beta, lam, xi) = (ix[3], ix[4], ix[5], ix[6]);
        Expr::rational(1, 2) * (raw_g2(j, k, i, alpha, beta, lam, xi) + raw_g2(i, k, j, beta, alpha, lam, xi))
    });
    let g3 = IndexedFamily::build(vec![m, n, m], |ix| s(n + ix[0], ix[1], n + ix[2]));
    Ok(GrassInvariants { n, m, g0, g1, g2, g3 })
}

impl GrassInvariants {
    /// All entries of the four families, in order.
    pub fn flat(&self) -> Vec<Expr> {
        [&self.g0, &self.g1, &self.g2, &self.g3]
            .iter()
            .flat_map(|f| f.entries.iter().cloned())
            .collect()
    }

    pub fn families(&self) -> [(&'static str, &IndexedFamily); 4] {
        [("G0", &self.g0), ("G1", &self.g1), ("G2", &self.g2), ("G3", &self.g3)]
    }

    /// Largest numeric difference from `other` over sample points of `frame`.
    pub fn max_deviation(&self, other: &GrassInvariants, frame: &CoordinateFrame, singular: &[Vec<f64>], cfg: &EqualityConfig) -> Result<f64> {
        if (self.n, self.m) != (other.n, other.m) {
            return Err(Error::FrameMismatch(format!(
                "invariants for (n, m) = ({}, {}) vs ({}, {})",
                self.n, self.m, other.n, other.m
            )));
        }
        crate::sampling::max_expr_difference(frame, singular, &self.flat(), &other.flat(), cfg)
    }
}

/// Free data of an `n`-Grassmannian change of connection.
///
/// Contracting the δ-identities of the equivalence relations (set `β = ξ`
/// and sum, as in the projective case) shows that the difference of two
/// equivalent connections has the form `D_A^C_B = δ_A^C Φ_B + δ_B^C Φ_A`
/// for a one-form `Φ = (φ_λ, ψ_i)`: the Greek part `phi` and the Latin part
/// `psi` are the free functions.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassPerturbation {
    pub phi: Vec<Expr>,
    pub psi: Vec<Expr>,
}

impl GrassPerturbation {
    pub fn zero(n: usize, m: usize) -> GrassPerturbation {
        GrassPerturbation { phi: vec![Expr::zero(); n], psi: vec![Expr::zero(); m] }
    }

    /// The full one-form `Φ_A`.
    pub fn one_form(&self) -> Vec<Expr> {
        self.phi.iter().chain(&self.psi).cloned().collect()
    }

    /// Recover the free functions from a proposed difference table
    /// `D = Γ − Γ'` (given as a connection-shaped table).
    ///
    /// The trace `D_A^F_F = (l+1) Φ_A` determines `Φ`; the remaining
    /// components must then match `δ_A^C Φ_B + δ_B^C Φ_A`, which is checked
    /// numerically. Any mismatch, in particular a nonzero difference in the
    /// frozen blocks `Γ_λ^k_ξ` or `Γ_j^β_i`, is reported as
    /// [`Error::InconsistentPerturbation`].
    pub fn from_difference(difference: &Connection, n: usize, cfg: &EqualityConfig) -> Result<GrassPerturbation> {
        check_split(difference, n)?;
        let l = difference.dim();
        let weight = Expr::rational(1, l as i64 + 1);
        let form: Vec<Expr> = (0..l)
            .map(|a| (weight.clone() * Expr::sum((0..l).map(|f| difference.symbol(a, f, f)))).simplify())
            .collect();
        let frame = difference.frame();
        let mut expected = Vec::new();
        let mut given = Vec::new();
        for a in 0..l {
            for b in a..l {
                for c in 0..l {
                    let mut terms = Vec::new();
                    if a == c {
                        terms.push(form[b].clone());
                    }
                    if b == c {
                        terms.push(form[a].clone());
                    }
                    expected.push(Expr::sum(terms));
                    given.push(difference.symbol(a, c, b));
                }
            }
        }
        let dev = crate::sampling::max_expr_difference(frame, difference.singular_points(), &expected, &given, cfg)?;
        if dev > cfg.tol {
            return Err(Error::InconsistentPerturbation(format!(
                "difference is not of the form δΦ + δΦ (deviation {dev:.3e})"
            )));
        }
        Ok(GrassPerturbation { phi: form[..n].to_vec(), psi: form[n..].to_vec() })
    }
}

/// The `n`-Grassmannian equivalent connection `Γ' = Γ − (δΦ + δΦ)` for the
/// perturbation's one-form. For `n = 1` this is exactly the projective shift.
pub fn grass_shift(g: &Connection, n: usize, perturbation: &GrassPerturbation) -> Result<Connection> {
    check_split(g, n)?;
    let m = g.dim() - n;
    if perturbation.phi.len() != n || perturbation.psi.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "perturbation has ({}, {}) components, expected ({n}, {m})",
            perturbation.phi.len(),
            perturbation.psi.len()
        )));
    }
    projective_shift(g, &perturbation.one_form())
}

/// Largest violation of the four displayed relations between `g` and `h`,
/// with the third relation taken in its symmetrized form (see
/// [`GrassInvariants`]). Zero iff the invariants agree.
pub fn grass_relation_residual(g: &Connection, h: &Connection, n: usize, cfg: &EqualityConfig) -> Result<f64> {
    let a = grass_invariants(g, n)?;
    let b = grass_invariants(h, n)?;
    a.max_deviation(&b, g.frame(), g.singular_points(), cfg)
}

/// Largest violation of the literal (unsymmetrized) third relation.
pub fn literal_third_relation_residual(g: &Connection, h: &Connection, n: usize, cfg: &EqualityConfig) -> Result<f64> {
    check_split(g, n)?;
    let l = g.dim();
    let dd = |a: usize, c: usize, b: usize| g.symbol(a, c, b) - h.symbol(a, c, b);
    let mut residuals = Vec::new();
    for j in n..l {
        for k in n..l {
            for i in n..l {
                for lam in 0..n {
                    for xi in 0..n {
                        for alpha in 0..n {
                            for beta in 0..n {
                                let mut lhs = Vec::new();
                                if beta == lam && alpha == xi {
                                    lhs.push(Expr::int(2) * dd(j, k, i));
                                }
                                let mut rhs = Vec::new();
                                if alpha == xi && k == j {
                                    rhs.push(dd(lam, beta, i));
                                }
                                if k == j && alpha == lam {
                                    rhs.push(dd(i, beta, xi));
                                }
                                if alpha == xi && i == k {
                                    rhs.push(dd(lam, beta, j));
                                }
                                if k == i && alpha == lam {
                                    rhs.push(dd(j, beta, xi));
                                }
                                residuals.push((Expr::sum(lhs) - Expr::sum(rhs)).simplify());
                            }
                        }
                    }
                }
            }
        }
    }
    let frame = g.frame();
    max_deviation(frame.dim(), g.singular_points(), cfg, |p| {
        let mut worst: f64 = 0.0;
        for r in &residuals {
            worst = worst.max(frame.eval(r, p)?.abs());
        }
        Ok(worst)
    })
}
