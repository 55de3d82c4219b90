use crate::connections::{Christoffel, Connection};
use crate::error::{Error, Result};
use crate::jets::SecJet;

/// Initial data of a parametrized geodesic.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicStart {
    pub x: f64,
    pub u: Vec<f64>,
    pub velocity: Vec<f64>,
}

/// Output of [`integrate_geodesic`]: order-2 section jets at
/// `x0, x0 + h, …`, and the error that stopped the integration early, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub jets: Vec<SecJet>,
    pub error: Option<Error>,
}

impl Trajectory {
    /// `g_AB u'^A u'^B` along the trajectory, if `g` carries a metric.
    pub fn speeds(&self, g: &Connection) -> Option<Result<Vec<f64>>> {
        g.metric()?;
        Some(
            self.jets
                .iter()
                .map(|t| {
                    let metric = g.eval_metric(t.u()).expect("metric present")?;
                    let l = t.l();
                    let mut s = 0.0;
                    for a in 0..l {
                        for b in 0..l {
                            s += metric[a][b] * t.d1(a, 0) * t.d1(b, 0);
                        }
                    }
                    Ok(s)
                })
                .collect(),
        )
    }
}

fn acceleration(gamma: &Christoffel, theta: f64, v: &[f64]) -> Vec<f64> {
    let l = v.len();
    (0..l)
        .map(|c| {
            let mut acc = theta * v[c];
            for a in 0..l {
                for b in 0..l {
                    acc -= gamma.get(a, c, b) * v[a] * v[b];
                }
            }
            acc
        })
        .collect()
}

struct Rhs<'a> {
    g: &'a Connection,
    theta: &'a Connection,
}

impl Rhs<'_> {
    fn accel(&self, x: f64, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let gamma = self.g.eval(u)?;
        let th = self.theta.eval(&[x])?.get(0, 0, 0);
        Ok(acceleration(&gamma, th, v))
    }

    fn jet(&self, x: f64, u: &[f64], v: &[f64]) -> Result<SecJet> {
        let a = self.accel(x, u, v)?;
        Ok(SecJet::from_fn(1, u.len(), 2, vec![x], u.to_vec(), |c, s| if s.order() == 1 { v[c] } else { a[c] }))
    }

    /// One classical RK4 step of `u' = v`, `v' = −Γ(u)(v, v) + Θ(x) v`.
    fn step(&self, x: f64, u: &[f64], v: &[f64], h: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let axpy = |y: &[f64], k: &[f64], s: f64| y.iter().zip(k).map(|(a, b)| a + s * b).collect::<Vec<_>>();
        let k1u = v.to_vec();
        let k1v = self.accel(x, u, v)?;
        let (u2, v2) = (axpy(u, &k1u, h / 2.0), axpy(v, &k1v, h / 2.0));
        let k2u = v2.clone();
        let k2v = self.accel(x + h / 2.0, &u2, &v2)?;
        let (u3, v3) = (axpy(u, &k2u, h / 2.0), axpy(v, &k2v, h / 2.0));
        let k3u = v3.clone();
        let k3v = self.accel(x + h / 2.0, &u3, &v3)?;
        let (u4, v4) = (axpy(u, &k3u, h), axpy(v, &k3v, h));
        let k4u = v4.clone();
        let k4v = self.accel(x + h, &u4, &v4)?;
        let combine = |y: &[f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64]| {
            (0..y.len()).map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect::<Vec<_>>()
        };
        Ok((combine(u, &k1u, &k2u, &k3u, &k4u), combine(v, &k1v, &k2v, &k3v, &k4v)))
    }
}

/// Fixed-step RK4 integration of the parametrized geodesic equation for
/// `n = 1`. Emits `steps + 1` jets whose second derivatives are the right
/// side of the equation, so their parametrized residual vanishes.
///
/// Evaluation failures along the way end the trajectory; the jets computed
/// so far are returned together with the error.
pub fn integrate_geodesic(g: &Connection, theta: &Connection, start: &GeodesicStart, h: f64, steps: usize) -> Result<Trajectory> {
    if theta.dim() != 1 {
        return Err(Error::DimensionMismatch(format!("geodesics need a connection on ℝ¹, got dimension {}", theta.dim())));
    }
    if start.u.len() != g.dim() || start.velocity.len() != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "start point and velocity must have {} coordinates",
            g.dim()
        )));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {h}")));
    }
    let rhs = Rhs { g, theta };
    let mut jets = Vec::with_capacity(steps + 1);
    let (mut u, mut v) = (start.u.clone(), start.velocity.clone());
    for i in 0..=steps {
        let x = start.x + h * i as f64;
        match rhs.jet(x, &u, &v) {
            Ok(t) => jets.push(t),
            Err(e) => return Ok(Trajectory { jets, error: Some(e) }),
        }
        if i == steps {
            break;
        }
        match rhs.step(x, &u, &v, h) {
            Ok((nu, nv)) if nu.iter().chain(&nv).all(|z| z.is_finite()) => (u, v) = (nu, nv),
            Ok(_) => {
                let e = Error::Expr(crate::expr::ExprError::Domain(format!("non-finite state after step {}", i + 1)));
                return Ok(Trajectory { jets, error: Some(e) });
            }
            Err(e) => return Ok(Trajectory { jets, error: Some(e) }),
        }
    }
    Ok(Trajectory { jets, error: None })
}
