use rayon::prelude::*;

use crate::connections::{grass_invariants, Connection};
use crate::error::{Error, Result};
use crate::sampling::{random_subjet, rng_for, EqualityConfig};

use super::residual::ddot_gamma;

/// Verdict of [`grass_equivalent`].
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    /// `Γ̈` agrees within tolerance at every sampled jet.
    pub equivalent: bool,
    /// Largest difference of the second derivatives of `Γ̈`.
    pub max_deviation: f64,
    /// Fast path: the Grassmannian invariants agree within tolerance.
    pub invariants_equal: bool,
    pub invariant_deviation: f64,
    pub samples: usize,
}

const MAX_RESAMPLES: usize = 64;

/// Compare `Γ̈` of two connections at `samples` random order-1 jets.
pub fn grass_equivalent(g1: &Connection, g2: &Connection, n: usize, samples: usize, tol: f64, seed: u64) -> Result<EquivalenceReport> {
    if g1.frame().names() != g2.frame().names() {
        return Err(Error::FrameMismatch("connections live on different coordinate frames".into()));
    }
    let (a, b) = (g1.with_split(n)?, g2.with_split(n)?);
    let l = a.dim();
    if n >= l {
        return Err(Error::BadSplit { n, dim: l });
    }
    let mut singular = a.singular_points().to_vec();
    singular.extend_from_slice(b.singular_points());
    let deviations: Vec<Result<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let mut last = None;
            for _ in 0..MAX_RESAMPLES {
                let p = random_subjet(&mut rng, n, l - n, 1, &singular);
                match (ddot_gamma(&a, &p), ddot_gamma(&b, &p)) {
                    (Ok(q1), Ok(q2)) => {
                        let mut worst: f64 = 0.0;
                        for (k, v) in q1.derivs() {
                            worst = worst.max((v - q2.derivs()[k]).abs());
                        }
                        return Ok(worst);
                    }
                    (Err(e), _) | (_, Err(e)) if e.is_domain() => last = Some(e),
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                }
            }
            Err(last.unwrap_or_else(|| Error::SingularityAtSample("no admissible jet".into())))
        })
        .collect();
    let mut max_deviation: f64 = 0.0;
    for d in deviations {
        let d = d?;
        max_deviation = if d.is_nan() { f64::INFINITY } else { max_deviation.max(d) };
    }
    let cfg = EqualityConfig { tol, seed, ..EqualityConfig::default() };
    let invariant_deviation = grass_invariants(&a, n)?.max_deviation(&grass_invariants(&b, n)?, a.frame(), &singular, &cfg)?;
    Ok(EquivalenceReport {
        equivalent: max_deviation <= tol,
        max_deviation,
        invariants_equal: invariant_deviation <= tol,
        invariant_deviation,
        samples,
    })
}
