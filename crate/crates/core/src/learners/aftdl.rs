use super::{project_ball, Learner, OrderedSum};
use crate::error::{check_dim, Error, Result};
use crate::linalg::norm;
use crate::model::{BallDomain, FeedbackMessage, FeedbackMode, Payload};

/// Approximate follow-the-delayed-leader.
///
/// Minimizing `sum_s <z_s, x> + (lambda/2)||x||^2` over the ball is the
/// projection of `-S / (k lambda)` with `S = sum_s z_s` and `k` surrogates
/// received, so the state is just the running sum and its count.
#[derive(Debug, Clone)]
pub struct Aftdl {
    domain: BallDomain,
    lambda: f64,
    sum: OrderedSum,
}

impl Aftdl {
    pub fn new(domain: BallDomain, lambda: f64) -> Self {
        let sum = OrderedSum::new(domain.dim());
        Self { domain, lambda, sum }
    }

    pub fn insert_surrogate(&mut self, origin: usize, z: Vec<f64>) -> Result<()> {
        check_dim(self.domain.dim(), z.len())?;
        self.sum.insert(origin, z)
    }

    /// `S`, summed in ascending origin order.
    pub fn surrogate_sum(&self) -> Vec<f64> {
        self.sum.sum()
    }
}

/// Minimizer over the ball of `sum_s <z_s, x> + (lambda / 2) ||x||^2` for
/// `count` surrogates summing to `S`: `proj_K(-S / (count * lambda))`, or the
/// origin when nothing has been received.
pub fn aftdl_decision(sum: &[f64], count: usize, lambda: f64, radius: f64) -> Vec<f64> {
    if count == 0 {
        return vec![0.0; sum.len()];
    }
    let scale = count as f64 * lambda;
    let target: Vec<f64> = sum.iter().map(|s| -s / scale).collect();
    project_ball(&target, radius)
}

impl Learner for Aftdl {
    fn feedback_mode(&self) -> FeedbackMode {
        FeedbackMode::Surrogate
    }

    fn receive(&mut self, msg: FeedbackMessage) -> Result<()> {
        match msg.payload {
            Payload::Surrogate(z) => self.insert_surrogate(msg.origin, z),
            _ => Err(Error::PayloadMismatch),
        }
    }

    fn decide(&mut self) -> Result<Vec<f64>> {
        Ok(aftdl_decision(&self.sum.sum(), self.sum.count(), self.lambda, self.domain.radius()))
    }

    fn feedback_count(&self) -> usize {
        self.sum.count()
    }

    fn aggregate_norm(&self) -> f64 {
        norm(&self.sum.sum())
    }
}
