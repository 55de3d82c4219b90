//! The acceptance suite: eleven numeric criteria, each reported as one
//! PASS/FAIL line with its worst deviation.
//!
//! Lines contain no timings, so a fixed seed reproduces them byte for
//! byte. Elapsed time is kept in [`CriterionResult::elapsed`].

pub mod fixtures;

use std::fmt;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::connections::{grass_invariants, grass_shift, projective_shift, thomas_pi, GrassPerturbation};
use crate::error::{Error, Result};
use crate::expr::{CoordinateFrame, Expr};
use crate::geodesy::{
    ddot_gamma, ddot_gamma_pro, distribution_pushforward, dot_gamma, dot_gamma_via_xi, integrate_geodesic, grass_equivalent,
    quotient_diagram_residual, residual2, GeodesicStart, XiTable,
};
use crate::jets::{cover1, cover2, sec_j1_dim, ParamMap, Reparametrization, SubJet};
use crate::sampling::{
    max_expr_difference, random_affine, random_coefficient, random_connection, random_one_form, random_point,
    random_polynomial, random_secjet, random_subjet, rng_for, EqualityConfig,
};
use crate::symmetry::{
    affine_symmetry_check, field_preserves_distribution, orbit_quotient_check, parse_point_map, preserves_distribution,
    prolong_point_field, prolong_point_map, reparametrization_check, CheckConfig, SPAN_TOL,
};

/// Number of criteria.
pub const CRITERIA: usize = 11;

/// Overrides for a self-test run. `samples` replaces the main sample count
/// of every criterion and `tol` every upper bound on a deviation; lower
/// bounds that certify a failure are never changed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

impl RunConfig {
    fn count(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{:>2}] {verdict} {}: {}", self.id, self.title, self.detail)
    }
}

const TITLES: [&str; CRITERIA] = [
    "defining identity",
    "independence of Xi",
    "projective invariance",
    "Grassmannian invariance",
    "covering commutation",
    "quotient connection",
    "affine symmetry and quotient",
    "flat ground truth",
    "sphere geodesics",
    "polynomial degree bound",
    "symmetry checks",
];

/// Run criterion `id` (1-based).
pub fn run_criterion(id: usize, cfg: &RunConfig) -> CriterionResult {
    assert!((1..=CRITERIA).contains(&id), "criterion {id} does not exist");
    let start = Instant::now();
    let outcome = match id {
        1 => defining_identity(cfg),
        2 => xi_independence(cfg),
        3 => projective_invariance(cfg),
        4 => grassmannian_invariance(cfg),
        5 => covering_commutation(cfg),
        6 => quotient_connection(cfg),
        7 => affine_symmetry(cfg),
        8 => flat_ground_truth(cfg),
        9 => sphere_geodesics(cfg),
        10 => degree_bound(cfg),
        _ => symmetry_checks(cfg),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if id == 1 && elapsed > RUNTIME_LIMIT {
        passed = false;
        detail.push_str(&format!("; runtime {:.2} s exceeds the limit", elapsed.as_secs_f64()));
    }
    CriterionResult { id, title: TITLES[id - 1], passed, detail, elapsed }
}

/// Run every criterion in order.
pub fn run_all(cfg: &RunConfig) -> Vec<CriterionResult> {
    (1..=CRITERIA).map(|id| run_criterion(id, cfg)).collect()
}

const RUNTIME_LIMIT: Duration = Duration::from_secs(5);
const MAX_RESAMPLES: usize = 64;

type Outcome = Result<(bool, String)>;

/// Component-wise maximum of `metrics` over `count` samples drawn on
/// independent streams. Domain failures redraw the sample.
fn sample_max<const K: usize, F>(cfg: &RunConfig, criterion: u64, count: usize, metrics: F) -> Result<[f64; K]>
where
    F: Fn(&mut ChaCha8Rng, usize) -> Result<[f64; K]> + Sync,
{
    let rows = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(cfg.seed, (criterion << 32) | i as u64);
            let mut last = None;
            for _ in 0..MAX_RESAMPLES {
                match metrics(&mut rng, i) {
                    Ok(v) => return Ok(v),
                    Err(e) if e.is_domain() => last = Some(e),
                    Err(e) => return Err(e),
                }
            }
            Err(last.expect("at least one attempt"))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut worst = [f64::NEG_INFINITY; K];
    for row in rows {
        for (w, v) in worst.iter_mut().zip(row) {
            *w = if v.is_nan() { f64::INFINITY } else { w.max(v) };
        }
    }
    Ok(worst)
}

fn frame(l: usize, n: usize) -> CoordinateFrame {
    CoordinateFrame::numbered("u", l, n).expect("valid frame")
}

fn params(n: usize) -> CoordinateFrame {
    CoordinateFrame::numbered("x", n, n).expect("valid frame")
}

/// `(n, m)` cycling through `{1, 2}²`.
fn shape(i: usize) -> (usize, usize) {
    (1 + i % 2, 1 + (i / 2) % 2)
}

fn max_diff<'a>(a: impl IntoIterator<Item = &'a f64>, b: impl IntoIterator<Item = &'a f64>) -> f64 {
    a.into_iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn le(value: f64, bound: f64) -> bool {
    value <= bound
}

fn defining_identity(cfg: &RunConfig) -> Outcome {
    let (count, tol) = (cfg.count(200), cfg.tol(1e-10));
    let [worst] = sample_max(cfg, 1, count, |rng, i| {
        let (n, m) = shape(i);
        let g = random_connection(rng, &frame(n + m, n), 2);
        let p = random_subjet(rng, n, m, 1, &[]);
        Ok([residual2(&g, &ddot_gamma(&g, &p)?)?.max_abs()])
    })?;
    Ok((le(worst, tol), format!("max |residual2(ddot_gamma)| = {worst:.3e} (tol {tol:e}, {count} jets)")))
}

fn xi_independence(cfg: &RunConfig) -> Outcome {
    let (jets, tol, tables) = (cfg.count(10), cfg.tol(1e-12), 50);
    let [worst] = sample_max(cfg, 2, 4 * jets, |rng, i| {
        let (n, m) = shape(i);
        let g = random_connection(rng, &frame(n + m, n), 2);
        let p = random_subjet(rng, n, m, 1, &[]);
        let base = dot_gamma(&g, &p)?;
        let mut dev: f64 = 0.0;
        for _ in 0..tables {
            let xi = XiTable::random(rng, n, m, 1.0);
            dev = dev.max(dot_gamma_via_xi(&g, &xi, &p)?.max_abs_diff(&base));
        }
        Ok([dev])
    })?;
    Ok((
        le(worst, tol),
        format!("max |dotGamma via Xi - dotGamma| = {worst:.3e} (tol {tol:e}, {} jets x {tables} tables)", 4 * jets),
    ))
}

fn projective_invariance(cfg: &RunConfig) -> Outcome {
    let (count, tol) = (cfg.count(50), cfg.tol(1e-10));
    let [pi_dev, equiv_dev] = sample_max(cfg, 3, count, |rng, i| {
        let f = frame(2 + i % 2, 1);
        let g = random_connection(rng, &f, 2);
        let shifted = projective_shift(&g, &random_one_form(rng, &f, 2))?;
        let eq = EqualityConfig { points: 12, tol, seed: cfg.seed ^ i as u64 };
        let pi = max_expr_difference(&f, &[], &thomas_pi(&g).flat(), &thomas_pi(&shifted).flat(), &eq)?;
        let verdict = grass_equivalent(&g, &shifted, 1, 12, tol, cfg.seed ^ i as u64)?;
        Ok([pi, verdict.max_deviation])
    })?;
    Ok((
        le(pi_dev, tol) && le(equiv_dev, tol),
        format!("max |Pi - Pi'| = {pi_dev:.3e}, n=1 equivalence deviation = {equiv_dev:.3e} (tol {tol:e}, {count} pairs)"),
    ))
}

const NON_ADMISSIBLE_MIN: f64 = 1e-3;

fn grassmannian_invariance(cfg: &RunConfig) -> Outcome {
    let (count, tol) = (cfg.count(12), cfg.tol(1e-10));
    let shapes = [(3, 1), (3, 2), (4, 2)];
    let [inv_dev, equiv_dev, failed_detection, neg_dev] = sample_max(cfg, 4, count, |rng, i| {
        let (l, n) = shapes[i % shapes.len()];
        let f = frame(l, n);
        let g = random_connection(rng, &f, 2);
        let pert = GrassPerturbation {
            phi: (0..n).map(|_| random_polynomial(rng, &f, 1)).collect(),
            psi: (n..l).map(|_| random_polynomial(rng, &f, 1)).collect(),
        };
        let shifted = grass_shift(&g, n, &pert)?;
        let eq = EqualityConfig { points: 12, tol, seed: cfg.seed ^ i as u64 };
        let inv = grass_invariants(&g, n)?.max_deviation(&grass_invariants(&shifted, n)?, &f, &[], &eq)?;
        let verdict = grass_equivalent(&g, &shifted, n, 12, tol, cfg.seed ^ i as u64)?;
        // disturb the frozen block Γ_λ^k_ξ
        let mut bent = g.clone();
        let bump = Expr::rational(1, 2) + random_polynomial(rng, &f, 1);
        bent.set(0, n, 0, (g.symbol(0, n, 0) + bump).simplify());
        let negative = grass_equivalent(&g, &bent, n, 12, tol, cfg.seed ^ i as u64)?;
        let missed = if negative.equivalent { 1.0 } else { 0.0 };
        // track the smallest deviation of the negative case through its negation
        Ok([inv, verdict.max_deviation, missed, -negative.max_deviation])
    })?;
    let neg_dev = -neg_dev;
    Ok((
        le(inv_dev, tol) && le(equiv_dev, tol) && failed_detection == 0.0 && neg_dev > NON_ADMISSIBLE_MIN,
        format!(
            "invariant deviation = {inv_dev:.3e}, equivalence deviation = {equiv_dev:.3e} (tol {tol:e}); \
             non-admissible min deviation = {neg_dev:.3e} (> {NON_ADMISSIBLE_MIN:e}); {count} pairs"
        ),
    ))
}

fn covering_commutation(cfg: &RunConfig) -> Outcome {
    let (count, tol) = (cfg.count(200), cfg.tol(1e-10));
    let [dev, span, rank_defect] = sample_max(cfg, 5, count, |rng, i| {
        let (n, m) = shape(i);
        let l = n + m;
        let g = random_connection(rng, &frame(l, n), 2);
        let theta = random_connection(rng, &params(n), 1);
        let t = random_secjet(rng, n, l, 1, &[]);
        let left = cover2(&ddot_gamma_pro(&g, &theta, &t)?)?;
        let right = ddot_gamma(&g, &cover1(&t)?)?;
        let dev = max_diff(left.derivs().values(), right.derivs().values());
        let push = distribution_pushforward(&g, &theta, &t)?;
        Ok([dev, push.span_residual, (push.rank as f64 - n as f64).abs()])
    })?;
    Ok((
        le(dev, tol) && le(span, tol) && rank_defect == 0.0,
        format!("max |cover2 o ddot_pro - ddot o cover1| = {dev:.3e}, pushforward span residual = {span:.3e} (tol {tol:e}), full rank: {} ({count} jets)", rank_defect == 0.0),
    ))
}

fn quotient_connection(cfg: &RunConfig) -> Outcome {
    let (count, tol) = (cfg.count(100), cfg.tol(1e-10));
    let [worst] = sample_max(cfg, 6, count, |rng, i| {
        let (n, m) = shape(i);
        let l = n + m;
        let g = random_connection(rng, &frame(l, n), 2);
        let theta = fixtures::flat_parameters(n);
        let t = random_secjet(rng, n, l, 1, &[]);
        let tangent = random_point(rng, sec_j1_dim(n, l));
        Ok([quotient_diagram_residual(&g, &theta, &t, &tangent)?])
    })?;
    Ok((le(worst, tol), format!("max diagram defect = {worst:.3e} (tol {tol:e}, {count} tangent vectors)")))
}

fn affine_symmetry(cfg: &RunConfig) -> Outcome {
    let (maps, points, tol) = (cfg.count(20), cfg.count(50), cfg.tol(1e-10));
    let const_tol = cfg.tol(1e-12);
    let reports = (0..maps)
        .into_par_iter()
        .map(|k| {
            let n = 1 + k % 2;
            let mut rng = rng_for(cfg.seed, (7 << 32) | k as u64);
            let g = random_connection(&mut rng, &frame(3, n), 2);
            let aff = random_affine(&mut rng, n);
            let check = CheckConfig { samples: points, tol, seed: cfg.seed ^ k as u64 };
            affine_symmetry_check(&g, &fixtures::flat_parameters(n), &aff, &check)
        })
        .collect::<Result<Vec<_>>>()?;
    let affine_ok = reports.iter().all(|r| r.holds());
    let affine_worst = reports.iter().map(|r| r.worst()).fold(0.0, f64::max);

    let mut orbit = [0.0f64; 3];
    for n in [1, 2] {
        let mut rng = rng_for(cfg.seed, (7 << 32) | (1 << 20) | n as u64);
        let g = random_connection(&mut rng, &frame(3, n), 2);
        let r = orbit_quotient_check(&g, cfg.count(100), 10, cfg.seed)?;
        orbit[0] = orbit[0].max(r.constancy);
        orbit[1] = orbit[1].max(r.preimage_error);
        orbit[2] = orbit[2].max(r.factoring_residual);
    }

    let mut rng = rng_for(cfg.seed, (7 << 32) | (2 << 20));
    let g = random_connection(&mut rng, &frame(2, 1), 2);
    let rep = Reparametrization::parse(&["x1^3 + x1"])?;
    let cubic = reparametrization_check(&g, &fixtures::flat_parameters(1), &rep, &CheckConfig { samples: points, tol, seed: cfg.seed })?;
    let cubic_worst = cubic.worst();

    let passed = affine_ok
        && le(orbit[0], const_tol)
        && le(orbit[1], const_tol)
        && le(orbit[2], tol)
        && cubic_worst > NON_ADMISSIBLE_MIN;
    Ok((
        passed,
        format!(
            "affine residual = {affine_worst:.3e} ({maps} maps x {points} points, tol {tol:e}); orbit constancy = {:.3e}, \
             preimage error = {:.3e} (tol {const_tol:e}); factoring residual = {:.3e}; non-affine residual = {cubic_worst:.3e} (> {NON_ADMISSIBLE_MIN:e})",
            orbit[0], orbit[1], orbit[2]
        ),
    ))
}

/// Affine map `x ↦ c + x·A` into `ℝ^l` with a Greek block near the identity.
fn affine_plane(rng: &mut ChaCha8Rng, n: usize, l: usize) -> Result<ParamMap> {
    let x = params(n);
    let components = (0..l)
        .map(|a| {
            let mut terms = vec![Expr::constant(random_coefficient(rng))];
            for lambda in 0..n {
                let mut c = Expr::constant(random_coefficient(rng));
                if a == lambda {
                    c = Expr::int(2) + c;
                }
                terms.push(c * x.symbol(lambda));
            }
            Expr::sum(terms).simplify()
        })
        .collect();
    ParamMap::new(x, components)
}

fn flat_ground_truth(cfg: &RunConfig) -> Outcome {
    let (count, tol) = (cfg.count(50), cfg.tol(1e-12));
    let [plane_residual, second] = sample_max(cfg, 8, count, |rng, i| {
        let n = 1 + i % 2;
        let g = fixtures::flat(3, n);
        let plane = affine_plane(rng, n, 3)?;
        let t = plane.prolong(&random_point(rng, n), 2)?;
        let r = residual2(&g, &cover2(&t)?)?.max_abs();
        let p = random_subjet(rng, n, 3 - n, 1, &[]);
        let q = ddot_gamma(&g, &p)?;
        let d2 = q.derivs().iter().filter(|((_, s), _)| s.order() == 2).map(|(_, v)| v.abs()).fold(0.0, f64::max);
        Ok([r, d2])
    })?;
    Ok((
        le(plane_residual, tol) && le(second, tol),
        format!("affine plane residual = {plane_residual:.3e}, max |ddot_gamma second derivative| = {second:.3e} (tol {tol:e}, {count} samples)"),
    ))
}

fn sphere_geodesics(cfg: &RunConfig) -> Outcome {
    let tol = cfg.tol(1e-8);
    let (h, steps) = (1e-3, 1000);
    let g = fixtures::sphere();
    let theta = fixtures::flat_parameters(1);
    let mut rng = rng_for(cfg.seed, 9 << 32);
    let start = GeodesicStart {
        x: 0.0,
        u: (0..2).map(|_| rng.random_range(-0.5..=0.5)).collect(),
        velocity: (0..2).map(|_| rng.random_range(-1.0..=1.0)).collect(),
    };
    let trajectory = integrate_geodesic(&g, &theta, &start, h, steps)?;
    if let Some(e) = &trajectory.error {
        return Ok((false, format!("integration stopped after {} steps: {e}", trajectory.jets.len())));
    }
    let speeds = trajectory.speeds(&g).expect("sphere carries a metric")?;
    let drift = speeds.iter().map(|s| (s - speeds[0]).abs()).fold(0.0, f64::max);
    let residual = trajectory
        .jets
        .par_iter()
        .map(|t| Ok(residual2(&g, &cover2(t)?)?.max_abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok((
        le(drift, tol) && le(residual, tol),
        format!("speed drift = {drift:.3e}, covered residual = {residual:.3e} (tol {tol:e}, h = {h:e}, {steps} steps)"),
    ))
}

fn degree_bound(cfg: &RunConfig) -> Outcome {
    let (count, tol) = (cfg.count(50), cfg.tol(1e-12));
    let [worst] = sample_max(cfg, 10, count, |rng, i| {
        let (n, m) = shape(i);
        let l = n + m;
        let g = random_connection(rng, &frame(l, n), 2);
        let p = random_subjet(rng, n, m, 1, &[]);
        let coords = p.j1_coords();
        let at = |slot: usize, s: f64| -> Result<Vec<f64>> {
            let mut c = coords.clone();
            c[slot] = s;
            Ok(dot_gamma(&g, &SubJet::from_j1_coords(n, m, &c)?)?.values().to_vec())
        };
        let mut dev: f64 = 0.0;
        for i in n..l {
            for lambda in 0..n {
                let slot = SubJet::j1_slot(n, m, i, lambda);
                let s0 = coords[slot];
                let nodes = [at(slot, s0 - 1.0)?, at(slot, s0)?, at(slot, s0 + 1.0)?];
                let t: f64 = rng.random_range(-1.0..=1.0);
                // Lagrange weights on the nodes −1, 0, 1
                let w = [t * (t - 1.0) / 2.0, (1.0 - t) * (1.0 + t), t * (t + 1.0) / 2.0];
                let actual = at(slot, s0 + t)?;
                for (k, v) in actual.iter().enumerate() {
                    let predicted: f64 = (0..3).map(|j| w[j] * nodes[j][k]).sum();
                    dev = dev.max((predicted - v).abs());
                }
            }
        }
        Ok([dev])
    })?;
    Ok((le(worst, tol), format!("max quadratic interpolation error = {worst:.3e} (tol {tol:e}, {count} jets)")))
}

/// Random invertible linear map of `ℝ^l` with entries in `ℤ/4`.
fn linear_map(rng: &mut ChaCha8Rng, l: usize) -> Vec<Expr> {
    loop {
        let entries: Vec<i64> = (0..l * l).map(|k| rng.random_range(-4..=4) + if k % (l + 1) == 0 { 4 } else { 0 }).collect();
        let a = DMatrix::from_fn(l, l, |r, c| entries[r * l + c] as f64 / 4.0);
        if a.determinant().abs() < 0.25 {
            continue;
        }
        let x = frame(l, 1);
        return (0..l)
            .map(|r| {
                let shift = Expr::rational(rng.random_range(-4..=4), 4);
                Expr::sum(std::iter::once(shift).chain((0..l).map(|c| Expr::rational(entries[r * l + c], 4) * x.symbol(c)))).simplify()
            })
            .collect();
    }
}

fn symmetry_checks(cfg: &RunConfig) -> Outcome {
    let tol = cfg.tol(SPAN_TOL);
    let samples = cfg.count(50);
    let mut linear_worst: f64 = 0.0;
    let mut linear_ok = true;
    let mut euler_worst: f64 = 0.0;
    let mut euler_ok = true;
    let mut rng = rng_for(cfg.seed, 11 << 32);
    for (l, n) in [(2, 1), (3, 1), (3, 2)] {
        let check = CheckConfig { samples, tol, seed: cfg.seed };
        let space = frame(l, n);
        let flat = fixtures::flat(l, n);
        for _ in 0..3 {
            let map = prolong_point_map(&space, n, &linear_map(&mut rng, l))?;
            let r = preserves_distribution(&map, &flat, &check)?;
            linear_ok &= r.holds();
            linear_worst = linear_worst.max(r.worst());
        }
        let euler = prolong_point_field(&space, n, &(0..l).map(|a| space.symbol(a)).collect::<Vec<_>>())?;
        let r = field_preserves_distribution(&euler, &flat, &check)?;
        euler_ok &= r.holds();
        euler_worst = euler_worst.max(r.worst());
    }
    let plane = frame(2, 1);
    let quadratic = prolong_point_map(&plane, 1, &parse_point_map(&plane, &["u1", "u2 + u1^2"])?)?;
    let bent = preserves_distribution(&quadratic, &fixtures::flat(2, 1), &CheckConfig { samples, tol, seed: cfg.seed })?;
    if bent.evaluated() == 0 {
        return Err(Error::SingularityAtSample("quadratic counterexample produced no evaluable samples".into()));
    }
    let passed = linear_ok && euler_ok && !bent.holds() && bent.worst() > tol;
    Ok((
        passed,
        format!(
            "linear maps worst = {linear_worst:.3e}, Euler field worst = {euler_worst:.3e} (tol {tol:e}); \
             quadratic map worst = {:.3e} ({})",
            bent.worst(),
            if bent.holds() { "not detected" } else { "rejected" }
        ),
    ))
}
