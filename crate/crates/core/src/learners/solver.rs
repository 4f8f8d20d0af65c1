//! Minimizer for sums of strongly convex losses over a ball.
//!
//! Any sum of hinge+L2 and quadratic losses has the form
//!
//! ```text
//! P(x) = (mu/2)||x||^2 - <c, x> + sum_s max(0, 1 - <u_s, x>) + const
//! ```
//!
//! with `mu` the summed strong-convexity moduli and `u_s = y_s w_s`. Two
//! methods are provided:
//!
//! * [`Method::DualCoordinate`] maximizes the concave dual
//!   `D(alpha) = sum alpha_s + const - h(||c + sum alpha_s u_s||)` over
//!   `alpha in [0, 1]^m`, where `h` is the ball's support-regularized
//!   conjugate. Every epoch yields the primal point
//!   `x(alpha) = proj(v / mu)` and the exact duality gap `P(x) - D(alpha)`,
//!   which bounds both the objective error and `(mu/2)||x - x*||^2`.
//! * [`Method::ProjectedSubgradient`] runs projected subgradient steps of
//!   size `2 / (mu (k + 1))` with weighted iterate averaging and stops when
//!   successive averages move less than `tol`.
//!
//! Without hinge terms both reduce to the closed form `proj(c / mu)`.

use crate::error::{check_dim, Error, Result};
use crate::linalg::{axpy, dot, norm, norm_sq};
use crate::losses::Loss;
use crate::model::BallDomain;

use super::project_ball;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    DualCoordinate,
    ProjectedSubgradient,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Target distance to the minimizer. The dual method stops once the
    /// certified gap is below `mu * tol^2 / 2` (or below the floating-point
    /// resolution of the objective).
    pub tol: f64,
    pub max_iter: usize,
    pub method: Method,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 10_000, method: Method::DualCoordinate }
    }
}

impl SolverSettings {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Upper bound on `value - min`.
    pub gap: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Hinge<'a> {
    features: &'a [f64],
    label: f64,
}

/// A sum of losses in the normalized form above.
#[derive(Debug, Clone)]
pub struct Objective<'a> {
    dim: usize,
    mu: f64,
    linear: Vec<f64>,
    constant: f64,
    hinges: Vec<Hinge<'a>>,
}

impl<'a> Objective<'a> {
    pub fn new(dim: usize) -> Self {
        Self { dim, mu: 0.0, linear: vec![0.0; dim], constant: 0.0, hinges: Vec::new() }
    }

    pub fn from_losses(dim: usize, losses: impl IntoIterator<Item = &'a Loss>) -> Result<Self> {
        let mut obj = Self::new(dim);
        for l in losses {
            obj.push(l)?;
        }
        Ok(obj)
    }

    pub fn push(&mut self, loss: &'a Loss) -> Result<()> {
        check_dim(self.dim, loss.dim())?;
        match loss {
            Loss::HingeL2(h) => {
                self.mu += h.lambda;
                self.hinges.push(Hinge { features: &h.features, label: h.label });
            }
            Loss::Quadratic(q) => {
                self.mu += q.lambda;
                axpy(q.lambda, &q.anchor, &mut self.linear);
                self.constant += 0.5 * q.lambda * norm_sq(&q.anchor) + q.offset;
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total strong-convexity modulus.
    pub fn modulus(&self) -> f64 {
        self.mu
    }

    pub fn hinge_count(&self) -> usize {
        self.hinges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu == 0.0
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let hinge: f64 = self.hinges.iter().map(|h| (1.0 - h.label * dot(h.features, x)).max(0.0)).sum();
        0.5 * self.mu * norm_sq(x) - dot(&self.linear, x) + hinge + self.constant
    }

    /// Subgradient, dropping hinge terms that sit exactly on their kink.
    pub fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g: Vec<f64> = x.iter().zip(&self.linear).map(|(xi, ci)| self.mu * xi - ci).collect();
        for h in &self.hinges {
            if 1.0 - h.label * dot(h.features, x) > 0.0 {
                axpy(-h.label, h.features, &mut g);
            }
        }
        g
    }

    /// Certified upper bound on `value(x) - min` from strong convexity:
    /// `P(y) >= P(x) + <g, y - x> + (mu/2)||y - x||^2` minimized over the
    /// ball.
    pub fn gap_bound(&self, x: &[f64], radius: f64) -> f64 {
        let g = self.subgradient(x);
        let step: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - gi / self.mu).collect();
        let y = project_ball(&step, radius);
        let d: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
        -(dot(&g, &d) + 0.5 * self.mu * norm_sq(&d))
    }

    fn closed_form(&self, radius: f64) -> Vec<f64> {
        let v: Vec<f64> = self.linear.iter().map(|c| c / self.mu).collect();
        project_ball(&v, radius)
    }
}

/// Minimize the objective over the domain. `Error::NotConverged` carries the
/// last certified gap.
pub fn inner_minimize(objective: &Objective<'_>, domain: &BallDomain, settings: &SolverSettings) -> Result<Solution> {
    let mut alpha = vec![0.0; objective.hinge_count()];
    minimize_warm(objective, domain, settings, &mut alpha, None)
}

/// As [`inner_minimize`], warm-started from dual variables (one per hinge
/// term, updated in place) and, for the subgradient method, a primal point.
pub fn minimize_warm(
    objective: &Objective<'_>,
    domain: &BallDomain,
    settings: &SolverSettings,
    alpha: &mut Vec<f64>,
    primal: Option<&[f64]>,
) -> Result<Solution> {
    check_dim(domain.dim(), objective.dim())?;
    if objective.is_empty() {
        let x = domain.origin();
        return Ok(Solution { value: objective.value(&x), x, gap: 0.0, iterations: 0 });
    }
    if objective.hinges.is_empty() {
        let x = objective.closed_form(domain.radius());
        return Ok(Solution { value: objective.value(&x), x, gap: 0.0, iterations: 0 });
    }
    alpha.resize(objective.hinge_count(), 0.0);
    match settings.method {
        Method::DualCoordinate => dual_coordinate(objective, domain.radius(), settings, alpha),
        Method::ProjectedSubgradient => projected_subgradient(objective, domain.radius(), settings, primal),
    }
}

fn stop_threshold(mu: f64, tol: f64, primal: f64, dual: f64) -> f64 {
    (0.5 * mu * tol * tol).max(64.0 * f64::EPSILON * (1.0 + primal.abs() + dual.abs()))
}

fn dual_coordinate(obj: &Objective<'_>, radius: f64, settings: &SolverSettings, alpha: &mut [f64]) -> Result<Solution> {
    let mu = obj.mu;
    let cap = mu * radius;
    let primal_of = |v: &[f64]| -> Vec<f64> {
        let r = norm(v);
        let s = if r <= cap { 1.0 / mu } else { radius / r };
        v.iter().map(|x| x * s).collect()
    };
    let conj = |r: f64| if r <= cap { r * r / (2.0 * mu) } else { radius * r - 0.5 * mu * radius * radius };
    let sq: Vec<f64> = obj.hinges.iter().map(|h| norm_sq(h.features)).collect();

    let rebuild = |alpha: &[f64]| {
        let mut v = obj.linear.clone();
        for (h, &a) in obj.hinges.iter().zip(alpha.iter()) {
            if a != 0.0 {
                axpy(a * h.label, h.features, &mut v);
            }
        }
        v
    };

    let mut v = rebuild(alpha);
    let mut gap = f64::INFINITY;
    for epoch in 0..=settings.max_iter {
        let x = primal_of(&v);
        let p = obj.value(&x);
        let d = alpha.iter().sum::<f64>() + obj.constant - conj(norm(&v));
        gap = (p - d).max(0.0);
        if gap <= stop_threshold(mu, settings.tol, p, d) {
            return Ok(Solution { x, value: p, gap, iterations: epoch });
        }
        if epoch == settings.max_iter {
            break;
        }

        let mut b = norm_sq(&v);
        for (s, h) in obj.hinges.iter().enumerate() {
            let q = sq[s];
            let lo = -alpha[s];
            let hi = 1.0 - alpha[s];
            let a = h.label * dot(h.features, &v);
            let delta = if q == 0.0 {
                hi
            } else {
                // derivative of the dual along coordinate s
                let slope = |t: f64| {
                    let r = (b + 2.0 * a * t + q * t * t).max(0.0).sqrt();
                    let scale = if r <= cap {
                        1.0 / mu
                    } else if r > 0.0 {
                        radius / r
                    } else {
                        0.0
                    };
                    1.0 - (a + t * q) * scale
                };
                let newton = (slope(0.0) * mu / q).clamp(lo, hi);
                let r_new = (b + 2.0 * a * newton + q * newton * newton).max(0.0).sqrt();
                if b.sqrt() <= cap && r_new <= cap {
                    newton
                } else if slope(lo) <= 0.0 {
                    lo
                } else if slope(hi) >= 0.0 {
                    hi
                } else {
                    let (mut l, mut u) = (lo, hi);
                    for _ in 0..200 {
                        let m = 0.5 * (l + u);
                        if m <= l || m >= u {
                            break;
                        }
                        if slope(m) > 0.0 {
                            l = m;
                        } else {
                            u = m;
                        }
                    }
                    0.5 * (l + u)
                }
            };
            if delta != 0.0 {
                b += 2.0 * a * delta + q * delta * delta;
                axpy(delta * h.label, h.features, &mut v);
                alpha[s] += delta;
            }
        }
        v = rebuild(alpha);
    }
    Err(Error::NotConverged { iterations: settings.max_iter, gap })
}

fn projected_subgradient(
    obj: &Objective<'_>,
    radius: f64,
    settings: &SolverSettings,
    start: Option<&[f64]>,
) -> Result<Solution> {
    let mu = obj.mu;
    let mut x = match start {
        Some(s) => project_ball(s, radius),
        None => vec![0.0; obj.dim],
    };
    let mut avg = x.clone();
    for k in 1..=settings.max_iter {
        let g = obj.subgradient(&x);
        let step = 2.0 / (mu * (k as f64 + 1.0));
        let moved: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
        x = project_ball(&moved, radius);
        // weights proportional to k
        let w = 2.0 / (k as f64 + 1.0);
        let prev = avg.clone();
        for (a, xi) in avg.iter_mut().zip(&x) {
            *a += w * (xi - *a);
        }
        let moved_by = prev.iter().zip(&avg).map(|(p, a)| (p - a) * (p - a)).sum::<f64>().sqrt();
        if k > 1 && moved_by <= settings.tol {
            let value = obj.value(&avg);
            let gap = obj.gap_bound(&avg, radius).max(0.0);
            return Ok(Solution { x: avg, value, gap, iterations: k });
        }
    }
    Err(Error::NotConverged { iterations: settings.max_iter, gap: obj.gap_bound(&avg, radius).max(0.0) })
}
