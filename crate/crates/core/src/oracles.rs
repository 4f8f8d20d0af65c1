//! Reference computations for regret accounting: the offline optimum, the
//! one-step-ahead ("ideal") leaders, regret curves with their logarithmic
//! bounds, and test accuracy.

use std::fmt::Write as _;

use crate::data::Example;
use crate::error::{check_dim, Error, Result};
use crate::learners::project_ball;
use crate::learners::solver::{minimize_warm, Objective, Solution, SolverSettings};
use crate::linalg::distance;
use crate::losses::{surrogate_vector, Loss, QuadraticLoss};
use crate::model::BallDomain;
use crate::sim::RunTrace;

/// `argmin_K sum_t f_t`, certified to an objective gap of at most
/// `1e-8 (1 + |value|)`.
pub fn offline_optimum(losses: &[Loss], domain: &BallDomain, tol: f64) -> Result<Solution> {
    if losses.is_empty() {
        return Err(Error::Empty("loss sequence"));
    }
    let obj = Objective::from_losses(domain.dim(), losses)?;
    let settings = SolverSettings { tol, max_iter: 100_000, ..SolverSettings::default() };
    let mut alpha = Vec::new();
    let sol = minimize_warm(&obj, domain, &settings, &mut alpha, None)?;
    if sol.gap > 1e-8 * (1.0 + sol.value.abs()) {
        return Err(Error::NotConverged { iterations: sol.iterations, gap: sol.gap });
    }
    Ok(sol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealKind {
    /// Leaders of the true losses.
    TrueLoss,
    /// Leaders of the surrogate losses rebuilt from a trace.
    Surrogate,
}

#[derive(Debug, Clone)]
pub struct IdealDecisionSequence {
    pub kind: IdealKind,
    /// `decisions[t - 1]` minimizes the sum of the first `t` losses.
    pub decisions: Vec<Vec<f64>>,
    /// `sum_t f_t(x~_t) - min_K sum_t f_t`; never positive for exact leaders.
    pub ideal_regret: f64,
}

/// Prefix minimizers `x~_t = argmin_K sum_{s <= t} f_s`, each solved to a
/// certified gap, plus the ideal regret against the full-horizon optimum.
pub fn ideal_sequence(
    losses: &[Loss],
    domain: &BallDomain,
    tol: f64,
    kind: IdealKind,
) -> Result<IdealDecisionSequence> {
    if losses.is_empty() {
        return Err(Error::Empty("loss sequence"));
    }
    let settings = SolverSettings { tol, max_iter: 100_000, ..SolverSettings::default() };
    let mut alpha = Vec::new();
    let mut obj = Objective::new(domain.dim());
    let mut decisions = Vec::with_capacity(losses.len());
    for l in losses {
        obj.push(l)?;
        // prefix duals carry over; the new hinge (if any) starts at 0
        let sol = minimize_warm(&obj, domain, &settings, &mut alpha, decisions.last().map(Vec::as_slice))?;
        decisions.push(sol.x);
    }
    let optimum = offline_optimum(losses, domain, tol)?;
    let ideal_total: f64 = losses.iter().zip(&decisions).map(|(l, x)| l.value_unchecked(x)).sum();
    Ok(IdealDecisionSequence { kind, decisions, ideal_regret: ideal_total - optimum.value })
}

/// Surrogate losses `<z_t, x> + (lambda/2)||x||^2` with
/// `z_t = grad f_t(x_t) - lambda x_t`, rebuilt from the decisions of a trace.
pub fn surrogate_losses(trace: &RunTrace, losses: &[Loss], lambda: f64) -> Result<Vec<Loss>> {
    if trace.len() != losses.len() {
        return Err(Error::LengthMismatch { expected: trace.len(), actual: losses.len() });
    }
    trace
        .decisions()
        .zip(losses)
        .map(|(x, l)| {
            let z = surrogate_vector(&l.gradient(x)?, x, lambda)?;
            Ok(QuadraticLoss::from_surrogate(&z, lambda).into())
        })
        .collect()
}

/// Closed-form surrogate leaders: `proj(-(z_1 + ... + z_t) / (t lambda))`.
pub fn surrogate_ideal_sequence(surrogates: &[Vec<f64>], lambda: f64, radius: f64) -> Vec<Vec<f64>> {
    let dim = surrogates.first().map_or(0, Vec::len);
    let mut sum = vec![0.0; dim];
    surrogates
        .iter()
        .enumerate()
        .map(|(t, z)| {
            for (s, v) in sum.iter_mut().zip(z) {
                *s += v;
            }
            let k = (t + 1) as f64;
            let target: Vec<f64> = sum.iter().map(|s| -s / (k * lambda)).collect();
            project_ball(&target, radius)
        })
        .collect()
}

/// Constants entering the logarithmic regret bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub max_delay: usize,
    pub gradient_bound: f64,
    pub lambda: f64,
    pub radius: f64,
}

impl BoundParams {
    pub fn new(max_delay: usize, gradient_bound: f64, lambda: f64, radius: f64) -> Self {
        Self { max_delay, gradient_bound, lambda, radius }
    }

    /// `2 d G^2 (1 + ln t) / lambda`
    pub fn ftdl_bound(&self, t: usize) -> f64 {
        2.0 * self.max_delay as f64 * self.gradient_bound.powi(2) * (1.0 + (t as f64).ln()) / self.lambda
    }

    /// `2 d (G + 2 lambda R)^2 (ln t + 1) / lambda`
    pub fn aftdl_bound(&self, t: usize) -> f64 {
        let g = self.gradient_bound + 2.0 * self.lambda * self.radius;
        2.0 * self.max_delay as f64 * g * g * ((t as f64).ln() + 1.0) / self.lambda
    }

    /// `50 d G^2 (ln t + 1) / lambda`, the approximate-leader bound on the
    /// ball of radius `2G / lambda`.
    pub fn unconstrained_bound(&self, t: usize) -> f64 {
        50.0 * self.max_delay as f64 * self.gradient_bound.powi(2) * ((t as f64).ln() + 1.0) / self.lambda
    }

    /// `2 d G / (t lambda)`: largest distance between the delayed leader and
    /// the ideal leader at round `t`.
    pub fn ftdl_distance(&self, t: usize) -> f64 {
        2.0 * self.max_delay as f64 * self.gradient_bound / (t as f64 * self.lambda)
    }

    /// `2 d (G + 2 lambda R) / (t lambda)`
    pub fn aftdl_distance(&self, t: usize) -> f64 {
        2.0 * self.max_delay as f64 * (self.gradient_bound + 2.0 * self.lambda * self.radius) / (t as f64 * self.lambda)
    }
}

#[derive(Debug, Clone)]
pub struct RegretReport {
    pub x_star: Vec<f64>,
    /// `R_t = sum_{s <= t} f_s(x_s) - f_s(x*)`.
    pub regret: Vec<f64>,
    pub bound_ftdl: Vec<f64>,
    pub bound_aftdl: Vec<f64>,
}

/// Cumulative regret of a trace against the comparator `x_star`.
pub fn regret_curve(trace: &RunTrace, losses: &[Loss], x_star: &[f64], params: &BoundParams) -> Result<RegretReport> {
    if trace.len() != losses.len() {
        return Err(Error::LengthMismatch { expected: trace.len(), actual: losses.len() });
    }
    let mut regret = Vec::with_capacity(losses.len());
    let mut acc = 0.0;
    for (r, l) in trace.records.iter().zip(losses) {
        acc += r.loss - l.value(x_star)?;
        regret.push(acc);
    }
    let ts = 1..=losses.len();
    Ok(RegretReport {
        x_star: x_star.to_vec(),
        regret,
        bound_ftdl: ts.clone().map(|t| params.ftdl_bound(t)).collect(),
        bound_aftdl: ts.map(|t| params.aftdl_bound(t)).collect(),
    })
}

impl RegretReport {
    pub fn final_regret(&self) -> f64 {
        self.regret.last().copied().unwrap_or(0.0)
    }

    pub fn final_bound_ftdl(&self) -> f64 {
        self.bound_ftdl.last().copied().unwrap_or(0.0)
    }

    pub fn final_bound_aftdl(&self) -> f64 {
        self.bound_aftdl.last().copied().unwrap_or(0.0)
    }

    /// `round,regret,bound_thm1,bound_thm2`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("round,regret,bound_thm1,bound_thm2\n");
        for (i, ((r, b1), b2)) in self.regret.iter().zip(&self.bound_ftdl).zip(&self.bound_aftdl).enumerate() {
            let _ = writeln!(out, "{},{r},{b1},{b2}", i + 1);
        }
        out
    }
}

/// `||x_t - x~_t||` for every round.
pub fn distances_to_ideal(trace: &RunTrace, ideal: &[Vec<f64>]) -> Result<Vec<f64>> {
    if trace.len() != ideal.len() {
        return Err(Error::LengthMismatch { expected: trace.len(), actual: ideal.len() });
    }
    Ok(trace.decisions().zip(ideal).map(|(x, y)| distance(x, y)).collect())
}

/// Fraction of examples with `sign(<w, x>) == y`, counting `sign(0)` as +1.
pub fn test_accuracy(x: &[f64], test: &[Example]) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::Empty("test set"));
    }
    let mut correct = 0usize;
    for ex in test {
        if let Some(&(last, _)) = ex.features.last() {
            if last > x.len() {
                check_dim(x.len(), last)?;
            }
        }
        let pred = if ex.dot(x) >= 0.0 { 1.0 } else { -1.0 };
        if pred == ex.label {
            correct += 1;
        }
    }
    Ok(correct as f64 / test.len() as f64)
}
