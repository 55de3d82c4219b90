use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::connections::Connection;
use crate::error::{Error, Result};
use crate::expr::{CoordinateFrame, Expr};
use crate::geodesy::{distribution_fields, pro_distribution_fields};
use crate::jets::{SecJet, SubJet};
use crate::linalg;
use crate::sampling::{random_secjet, random_subjet, rng_for};

use super::jet_map::{JetField, JetKind, JetMap, MapOrigin};
use super::report::SymmetryReport;

/// Default tolerance of the span-membership tests.
pub const SPAN_TOL: f64 = 1e-8;

/// Sampling parameters shared by the symmetry checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { samples: 200, tol: SPAN_TOL, seed: 0 }
    }
}

/// Run `sample` for every index with its own generator. Domain failures
/// become skipped rows; other errors abort the check.
pub(crate) fn run_samples<F>(cfg: &CheckConfig, sample: F) -> Result<SymmetryReport>
where
    F: Fn(&mut ChaCha8Rng) -> (Vec<f64>, Result<f64>) + Sync,
{
    if cfg.samples == 0 || !(cfg.tol > 0.0) {
        return Err(Error::InvalidArgument("need samples ≥ 1 and tol > 0".into()));
    }
    let rows = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(cfg.seed, i as u64);
            let (coords, r) = sample(&mut rng);
            match r {
                Ok(v) => Ok((coords, Ok(v))),
                Err(e) if e.is_domain() => Ok((coords, Err(e.to_string()))),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymmetryReport::from_residuals(rows, cfg.tol))
}

fn at_sample<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Expr(inner) => Error::SingularityAtSample(inner.to_string()),
        other => other,
    })
}

fn apply(jac: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    jac.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Largest span residual of the pushed `source` vectors against `target`.
fn pushed_residual(jac: &[Vec<f64>], source: &[Vec<f64>], target: &[Vec<f64>]) -> f64 {
    source.iter().map(|v| linalg::span_residual(target, &apply(jac, v))).fold(0.0, f64::max)
}

fn unit(dim: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v
}

/// Cartan distribution at an order-1 point: the truncated total
/// derivatives plus every first-derivative direction.
fn cartan_fields(coords: &[f64], kind: JetKind, n: usize, l: usize) -> Vec<Vec<f64>> {
    let dim = coords.len();
    let mut out = Vec::new();
    match kind {
        JetKind::Subjet => {
            let m = l - n;
            for lambda in 0..n {
                let mut v = unit(dim, lambda);
                for j in n..l {
                    v[j] = coords[SubJet::j1_slot(n, m, j, lambda)];
                }
                out.push(v);
            }
            out.extend((l..dim).map(|s| unit(dim, s)));
        }
        JetKind::Secjet => {
            for lambda in 0..n {
                let mut v = unit(dim, lambda);
                for a in 0..l {
                    v[n + a] = coords[SecJet::j1_slot(n, l, a, lambda)];
                }
                out.push(v);
            }
            out.extend((n + l..dim).map(|s| unit(dim, s)));
        }
    }
    out
}

fn contact_residual(map: &JetMap, jac: &[Vec<f64>], p: &[f64], q: &[f64]) -> f64 {
    if map.origin() == MapOrigin::Prolonged {
        return 0.0;
    }
    let (n, l) = (map.n(), map.l());
    pushed_residual(jac, &cartan_fields(p, map.kind(), n, l), &cartan_fields(q, map.kind(), n, l))
}

fn expect_kind(map: &JetMap, kind: JetKind) -> Result<()> {
    if map.kind() != kind {
        return Err(Error::InvalidArgument(format!("expected a map of {kind:?} jets, got {:?}", map.kind())));
    }
    Ok(())
}

/// Whether `map` sends the distribution `R∘Γ̈` of `g` (split at the map's
/// `n`) into itself at sampled order-1 jets. Raw maps must also preserve
/// the Cartan distribution.
pub fn preserves_distribution(map: &JetMap, g: &Connection, cfg: &CheckConfig) -> Result<SymmetryReport> {
    expect_kind(map, JetKind::Subjet)?;
    if g.dim() != map.l() {
        return Err(Error::DimensionMismatch(format!("map on jets of E^{} with a connection on E^{}", map.l(), g.dim())));
    }
    let (n, m) = (map.n(), map.l() - map.n());
    let g = g.with_split(n)?;
    run_samples(cfg, |rng| {
        let p = random_subjet(rng, n, m, 1, g.singular_points());
        let coords = p.j1_coords();
        let residual = (|| {
            let image = at_sample(map.eval(&coords))?;
            let jac = at_sample(map.jacobian(&coords))?;
            let q = SubJet::from_j1_coords(n, m, &image)?;
            let source = distribution_fields(&g, n, &p)?;
            let target = at_sample(distribution_fields(&g, n, &q))?;
            Ok(pushed_residual(&jac, &source, &target).max(contact_residual(map, &jac, &coords, &image)))
        })();
        (coords, residual)
    })
}

/// Whether a map of `J¹(pro_M)` preserves the distribution of `Γ̈_{pro_M}`
/// built from `g` and the parameter connection `theta`.
pub fn preserves_pro_distribution(map: &JetMap, g: &Connection, theta: &Connection, cfg: &CheckConfig) -> Result<SymmetryReport> {
    expect_kind(map, JetKind::Secjet)?;
    let (n, l) = (map.n(), map.l());
    if g.dim() != l || theta.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "map on J¹(pro_M) with (n, l) = ({n}, {l}) and connections on dimensions ({}, {})",
            theta.dim(),
            g.dim()
        )));
    }
    run_samples(cfg, |rng| {
        let t = random_secjet(rng, n, l, 1, g.singular_points());
        let coords = t.j1_coords();
        let residual = (|| {
            let image = at_sample(map.eval(&coords))?;
            let jac = at_sample(map.jacobian(&coords))?;
            let s = SecJet::from_j1_coords(n, l, &image)?;
            let source = pro_distribution_fields(g, theta, &t)?;
            let target = at_sample(pro_distribution_fields(g, theta, &s))?;
            Ok(pushed_residual(&jac, &source, &target).max(contact_residual(map, &jac, &coords, &image)))
        })();
        (coords, residual)
    })
}

/// Generators of `R∘Γ̈` as expressions in the jet coordinates of `jet`,
/// whose leading names must be those of `g`.
pub fn symbolic_distribution_fields(g: &Connection, jet: &CoordinateFrame) -> Result<Vec<Vec<Expr>>> {
    let (n, l) = (g.split(), g.dim());
    let m = l - n;
    if jet.dim() != l + m * n || (0..l).any(|a| jet.name(a) != g.frame().name(a)) {
        return Err(Error::FrameMismatch("jet coordinates do not extend the connection's frame".into()));
    }
    let slope = |i: usize, lambda: usize| jet.symbol(SubJet::j1_slot(n, m, i, lambda));
    // w(A, C, ξ) = Γ_A^C_ξ + Γ_A^C_i u^i_ξ
    let w = |a: usize, c: usize, xi: usize| {
        Expr::sum(std::iter::once(g.symbol(a, c, xi)).chain((n..l).map(|i| g.symbol(a, c, i) * slope(i, xi))))
    };
    let dot = |a: usize, k: usize, xi: usize| {
        Expr::sum(std::iter::once(w(a, k, xi)).chain((0..n).map(|beta| Expr::int(-1) * slope(k, beta) * w(a, beta, xi))))
    };
    let mut fields = Vec::with_capacity(n);
    for lambda in 0..n {
        let mut v = vec![Expr::zero(); jet.dim()];
        v[lambda] = Expr::one();
        for j in n..l {
            v[j] = slope(j, lambda);
        }
        for k in n..l {
            for xi in 0..n {
                let terms = std::iter::once(dot(lambda, k, xi)).chain((n..l).map(|j| slope(j, lambda) * dot(j, k, xi)));
                v[SubJet::j1_slot(n, m, k, xi)] = (Expr::int(-1) * Expr::sum(terms)).simplify();
            }
        }
        fields.push(v);
    }
    Ok(fields)
}

/// Whether the flow of `f` preserves `R∘Γ̈`: every bracket `[f, X_λ]` with a
/// generator lies in the span of the generators.
pub fn field_preserves_distribution(f: &JetField, g: &Connection, cfg: &CheckConfig) -> Result<SymmetryReport> {
    let n = f.n();
    let g = g.with_split(n)?;
    let frame = f.frame();
    let m = g.dim() - n;
    let fields = symbolic_distribution_fields(&g, frame)?;
    let field_jac: Vec<Vec<Vec<Expr>>> = fields
        .iter()
        .map(|x| x.iter().map(|c| frame.names().iter().map(|v| c.differentiate(v)).collect()).collect())
        .collect();
    let eval_vec = |v: &[Expr], p: &[f64]| v.iter().map(|e| Ok(frame.eval(e, p)?)).collect::<Result<Vec<f64>>>();
    let eval_mat = |rows: &[Vec<Expr>], p: &[f64]| rows.iter().map(|r| eval_vec(r, p)).collect::<Result<Vec<_>>>();
    run_samples(cfg, |rng| {
        let p = random_subjet(rng, n, m, 1, g.singular_points());
        let coords = p.j1_coords();
        let residual = (|| {
            let fv = at_sample(eval_vec(f.components(), &coords))?;
            let df = at_sample(eval_mat(f.symbolic_jacobian(), &coords))?;
            let xs = fields.iter().map(|x| at_sample(eval_vec(x, &coords))).collect::<Result<Vec<_>>>()?;
            let mut worst: f64 = 0.0;
            for (x, dx) in xs.iter().zip(&field_jac) {
                let dx = at_sample(eval_mat(dx, &coords))?;
                // [f, X]^a = f^b ∂_b X^a − X^b ∂_b f^a
                let bracket: Vec<f64> = apply(&dx, &fv).iter().zip(apply(&df, x)).map(|(a, b)| a - b).collect();
                worst = worst.max(linalg::span_residual(&xs, &bracket));
            }
            Ok(worst)
        })();
        (coords, residual)
    })
}
