use rayon::prelude::*;

use crate::connections::Connection;
use crate::error::{Error, Result};
use crate::expr::CoordinateFrame;
use crate::geodesy::{ddot_gamma_pro, param_residual2, residual2};
use crate::jets::{affine_act, cover1, cover2, identity_preimage, AffineMap, Reparametrization, SecJet};
use crate::sampling::{random_affine, random_secjet, random_subjet, rng_for};

use super::checks::{run_samples, CheckConfig};
use super::report::SymmetryReport;

/// Attempts per sample before a domain failure is reported.
const MAX_RESAMPLES: usize = 64;

fn check_dims(g: &Connection, theta: &Connection, n: usize) -> Result<()> {
    if theta.dim() != n || g.split() >= g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "parameter connection on ℝ^{} for {n} parameters",
            theta.dim()
        )));
    }
    Ok(())
}

/// Residual of a transformed zero-set point: sample an order-1 section
/// jet, complete it on `S_proM` with `ddot_gamma_pro` and evaluate
/// `param_residual2` after `act`.
fn zero_set_check<F>(g: &Connection, theta: &Connection, n: usize, cfg: &CheckConfig, act: F) -> Result<SymmetryReport>
where
    F: Fn(&SecJet) -> Result<SecJet> + Sync,
{
    check_dims(g, theta, n)?;
    let l = g.dim();
    run_samples(cfg, |rng| {
        let t = random_secjet(rng, n, l, 1, g.singular_points());
        let coords = t.j1_coords();
        let residual = (|| {
            let q = ddot_gamma_pro(g, theta, &t)?;
            Ok(param_residual2(g, theta, &act(&q)?)?.max_abs())
        })();
        (coords, residual)
    })
}

/// Whether the affine change of parameters `aff` maps points of `S_proM`
/// to points of `S_proM`. The action is a symmetry when `theta` is flat.
pub fn affine_symmetry_check(g: &Connection, theta: &Connection, aff: &AffineMap, cfg: &CheckConfig) -> Result<SymmetryReport> {
    zero_set_check(g, theta, aff.dim(), cfg, |q| affine_act(aff, q))
}

/// The same test for a general change of parameters, whose second-order
/// action carries the inhomogeneous Hessian term.
pub fn reparametrization_check(g: &Connection, theta: &Connection, rep: &Reparametrization, cfg: &CheckConfig) -> Result<SymmetryReport> {
    zero_set_check(g, theta, rep.dim(), cfg, |q| rep.act2(q))
}

/// Outcome of [`orbit_quotient_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitQuotientReport {
    pub samples: usize,
    pub maps_per_sample: usize,
    /// Largest change of `cover1` along an affine orbit.
    pub constancy: f64,
    /// Largest `|cover1(identity_preimage(p)) − p|`.
    pub preimage_error: f64,
    /// Largest `|residual2(g, cover2(q))|` over `q` on `S_proM` with flat
    /// parameter connection.
    pub factoring_residual: f64,
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn orbit_sample(g: &Connection, flat: &Connection, seed: u64, index: usize, maps: usize) -> Result<[f64; 3]> {
    let (n, l) = (g.split(), g.dim());
    let mut rng = rng_for(seed, index as u64);
    let mut last = None;
    for _ in 0..MAX_RESAMPLES {
        let outcome = (|| -> Result<[f64; 3]> {
            let t = random_secjet(&mut rng, n, l, 1, g.singular_points());
            let base = cover1(&t)?.j1_coords();
            let mut constancy: f64 = 0.0;
            for _ in 0..maps {
                let aff = random_affine(&mut rng, n);
                constancy = constancy.max(max_diff(&base, &cover1(&affine_act(&aff, &t)?)?.j1_coords()));
            }
            let p = random_subjet(&mut rng, n, l - n, 1, g.singular_points());
            let preimage = max_diff(&p.j1_coords(), &cover1(&identity_preimage(&p))?.j1_coords());
            let q = ddot_gamma_pro(g, flat, &t)?;
            let factoring = residual2(g, &cover2(&q)?)?.max_abs();
            Ok([constancy, preimage, factoring])
        })();
        match outcome {
            Err(e) if e.is_domain() => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Well-definedness and surjectivity of the quotient `J¹(pro_M)/Aff(ℝⁿ)`
/// realized by `cover1`, plus the factoring of `S_proM` onto the
/// unparametrized equation, over `samples` random section jets.
pub fn orbit_quotient_check(g: &Connection, samples: usize, maps_per_sample: usize, seed: u64) -> Result<OrbitQuotientReport> {
    let n = g.split();
    if samples == 0 {
        return Err(Error::InvalidArgument("need samples ≥ 1".into()));
    }
    let flat = Connection::zero(CoordinateFrame::numbered("x", n, n)?);
    let rows = (0..samples)
        .into_par_iter()
        .map(|i| orbit_sample(g, &flat, seed, i, maps_per_sample))
        .collect::<Result<Vec<_>>>()?;
    let worst = |k: usize| rows.iter().map(|r| r[k]).fold(0.0, f64::max);
    Ok(OrbitQuotientReport {
        samples,
        maps_per_sample,
        constancy: worst(0),
        preimage_error: worst(1),
        factoring_residual: worst(2),
    })
}
