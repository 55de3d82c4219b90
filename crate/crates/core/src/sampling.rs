//! Seeded random sampling and numeric equality of symbolic data.
//!
//! Every random draw comes from a ChaCha8 stream derived from a 64-bit seed
//! and a sample index, so a parallel loop over indices produces the same
//! values as a serial one.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connections::Connection;
use crate::error::{Error, Result};
use crate::expr::{CoordinateFrame, Expr, Number};
use crate::jets::{AffineMap, SecJet, SubJet};

/// Default number of evaluation points for symbolic equality checks.
pub const EQUALITY_POINTS: usize = 12;
/// Default tolerance for symbolic equality checks.
pub const EQUALITY_TOL: f64 = 1e-10;

/// Minimum distance kept from declared singular points.
const SINGULAR_CLEARANCE: f64 = 1e-3;
/// Attempts per point before giving up on a domain with too many holes.
const MAX_RESAMPLES: usize = 64;

/// Independent generator for sample `stream` of a run seeded with `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualityConfig {
    pub points: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for EqualityConfig {
    fn default() -> Self {
        EqualityConfig { points: EQUALITY_POINTS, tol: EQUALITY_TOL, seed: 0 }
    }
}

/// Uniform point in `[-1, 1]^dim`.
pub fn random_point<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// Uniform point in `[-1, 1]^dim` away from the given singular points.
pub fn random_point_avoiding<R: Rng>(rng: &mut R, dim: usize, singular: &[Vec<f64>]) -> Vec<f64> {
    loop {
        let p = random_point(rng, dim);
        let clear = singular.iter().all(|s| {
            s.iter().zip(&p).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() > SINGULAR_CLEARANCE
        });
        if clear {
            return p;
        }
    }
}

/// Largest value of `deviation` over `cfg.points` sample points of the
/// frame. Points where evaluation hits a domain error are redrawn.
pub fn max_deviation<F>(dim: usize, singular: &[Vec<f64>], cfg: &EqualityConfig, deviation: F) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    use rayon::prelude::*;
    let values: Vec<Result<f64>> = (0..cfg.points as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(cfg.seed, i);
            let mut last = None;
            for _ in 0..MAX_RESAMPLES {
                let p = random_point_avoiding(&mut rng, dim, singular);
                match deviation(&p) {
                    Ok(v) => return Ok(v),
                    Err(e) if e.is_domain() => last = Some(e),
                    Err(e) => return Err(e),
                }
            }
            Err(last.unwrap_or_else(|| Error::SingularityAtSample("no admissible point".into())))
        })
        .collect();
    let mut worst: f64 = 0.0;
    for v in values {
        let v = v?;
        worst = if v.is_nan() { f64::INFINITY } else { worst.max(v) };
    }
    Ok(worst)
}

/// Largest difference between two lists of expressions over the frame.
pub fn max_expr_difference(frame: &CoordinateFrame, singular: &[Vec<f64>], a: &[Expr], b: &[Expr], cfg: &EqualityConfig) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} expressions", a.len(), b.len())));
    }
    max_deviation(frame.dim(), singular, cfg, |p| {
        let mut worst: f64 = 0.0;
        for (x, y) in a.iter().zip(b) {
            worst = worst.max((frame.eval(x, p)? - frame.eval(y, p)?).abs());
        }
        Ok(worst)
    })
}

/// Coefficient `k/1000` with `k` uniform in `-1000..=1000`.
pub fn random_coefficient<R: Rng>(rng: &mut R) -> Number {
    Number::from_ratio(rng.random_range(-1000..=1000), 1000)
}

/// Dense random polynomial of total degree at most `degree` in the frame's
/// coordinates.
pub fn random_polynomial<R: Rng>(rng: &mut R, frame: &CoordinateFrame, degree: usize) -> Expr {
    let mut terms = Vec::new();
    for exponents in monomial_exponents(frame.dim(), degree) {
        let c = random_coefficient(rng);
        if c.is_zero() {
            continue;
        }
        let mut factors = vec![Expr::constant(c)];
        for (i, &k) in exponents.iter().enumerate() {
            if k > 0 {
                factors.push(frame.symbol(i).pow(k as i64));
            }
        }
        terms.push(Expr::product(factors).simplify());
    }
    Expr::sum(terms).simplify()
}

fn monomial_exponents(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        let mut next = Vec::new();
        for prefix in &out {
            let used: usize = prefix.iter().sum();
            for k in 0..=degree - used {
                let mut e = prefix.clone();
                e.push(k);
                next.push(e);
            }
        }
        out = next;
    }
    out
}

/// Connection with every independent symbol a random polynomial.
pub fn random_connection<R: Rng>(rng: &mut R, frame: &CoordinateFrame, degree: usize) -> Connection {
    let l = frame.dim();
    let mut g = Connection::zero(frame.clone());
    for a in 0..l {
        for b in a..l {
            for c in 0..l {
                g.set(a, c, b, random_polynomial(rng, frame, degree));
            }
        }
    }
    g
}

/// Random one-form `Φ_A` with polynomial components.
pub fn random_one_form<R: Rng>(rng: &mut R, frame: &CoordinateFrame, degree: usize) -> Vec<Expr> {
    (0..frame.dim()).map(|_| random_polynomial(rng, frame, degree)).collect()
}

/// Order-`r` jet with base point away from `singular` and derivatives
/// uniform in `[-1, 1]`.
pub fn random_subjet<R: Rng>(rng: &mut R, n: usize, m: usize, r: usize, singular: &[Vec<f64>]) -> SubJet {
    let base = random_point_avoiding(rng, n + m, singular);
    SubJet::from_fn(n, m, r, base, |_, _| rng.random_range(-1.0..=1.0))
}

/// Smallest `|det|` accepted for the Greek block of random section jets.
pub const MIN_GREEK_DET: f64 = 0.25;

/// Order-`r` section jet over `x ∈ [-1, 1]^n` with `u` away from `singular`,
/// derivatives uniform in `[-1, 1]` and a Greek block with
/// `|det| ≥` [`MIN_GREEK_DET`].
pub fn random_secjet<R: Rng>(rng: &mut R, n: usize, l: usize, r: usize, singular: &[Vec<f64>]) -> SecJet {
    let x = random_point(rng, n);
    let u = random_point_avoiding(rng, l, singular);
    loop {
        let t = SecJet::from_fn(n, l, r, x.clone(), u.clone(), |_, _| rng.random_range(-1.0..=1.0));
        if t.greek_block().determinant().abs() >= MIN_GREEK_DET {
            return t;
        }
    }
}

/// Affine map `x ↦ a x + b` with `a = I + U[-1/2, 1/2]`, `|det a| ≥`
/// [`MIN_GREEK_DET`] and `b` uniform in `[-1, 1]ⁿ`.
pub fn random_affine<R: Rng>(rng: &mut R, n: usize) -> AffineMap {
    loop {
        let a = DMatrix::<f64>::from_fn(n, n, |r, c| if r == c { 1.0 } else { 0.0 } + rng.random_range(-0.5..=0.5));
        if a.determinant().abs() < MIN_GREEK_DET {
            continue;
        }
        let b = DVector::from_vec(random_point(rng, n));
        return AffineMap::new(a, b).expect("determinant bounded away from zero");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = rng_for(7, 3).random();
        let b: f64 = rng_for(7, 3).random();
        let c: f64 = rng_for(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn monomial_count() {
        // C(dim + degree, degree)
        assert_eq!(monomial_exponents(3, 2).len(), 10);
        assert_eq!(monomial_exponents(1, 2).len(), 3);
    }

    #[test]
    fn deviation_skips_domain_errors() {
        let frame = CoordinateFrame::new(&["u"], 1).unwrap();
        let e = Expr::parse("1/u", &frame).unwrap();
        let cfg = EqualityConfig::default();
        let d = max_deviation(1, &[vec![0.0]], &cfg, |p| Ok(frame.eval(&e, p)?.abs() * 0.0)).unwrap();
        assert_eq!(d, 0.0);
    }
}
