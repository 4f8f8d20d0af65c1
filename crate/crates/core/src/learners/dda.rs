use super::{project_ball, Learner, OrderedSum};
use crate::error::{check_dim, Error, Result};
use crate::linalg::norm;
use crate::model::{BallDomain, FeedbackMessage, FeedbackMode, Payload};

/// Delayed dual averaging with regularizer `||x||^2 / 2` and the
/// delay-aware step size of [`dda_eta`].
#[derive(Debug, Clone)]
pub struct Dda {
    domain: BallDomain,
    gradient_bound: f64,
    max_delay: usize,
    sum: OrderedSum,
}

/// `eta = R / (sqrt(2) G sqrt((1 + 2d)(count + d + 1)))`
pub fn dda_eta(count: usize, radius: f64, gradient_bound: f64, max_delay: usize) -> f64 {
    let d = max_delay as f64;
    radius / (std::f64::consts::SQRT_2 * gradient_bound * ((1.0 + 2.0 * d) * (count as f64 + d + 1.0)).sqrt())
}

impl Dda {
    pub fn new(domain: BallDomain, gradient_bound: f64, max_delay: usize) -> Self {
        let sum = OrderedSum::new(domain.dim());
        Self { domain, gradient_bound, max_delay, sum }
    }

    pub fn insert_gradient(&mut self, origin: usize, g: Vec<f64>) -> Result<()> {
        check_dim(self.domain.dim(), g.len())?;
        self.sum.insert(origin, g)
    }

    pub fn eta(&self) -> f64 {
        dda_eta(self.sum.count(), self.domain.radius(), self.gradient_bound, self.max_delay)
    }

    pub fn gradient_sum(&self) -> Vec<f64> {
        self.sum.sum()
    }
}

impl Learner for Dda {
    fn feedback_mode(&self) -> FeedbackMode {
        FeedbackMode::Gradient
    }

    fn receive(&mut self, msg: FeedbackMessage) -> Result<()> {
        match msg.payload {
            Payload::Gradient(g) => self.insert_gradient(msg.origin, g),
            _ => Err(Error::PayloadMismatch),
        }
    }

    /// `argmin <S, x> + ||x||^2 / (2 eta)` over the ball, i.e.
    /// `proj(-eta S)`.
    fn decide(&mut self) -> Result<Vec<f64>> {
        let eta = self.eta();
        let target: Vec<f64> = self.sum.sum().iter().map(|g| -eta * g).collect();
        Ok(project_ball(&target, self.domain.radius()))
    }

    fn feedback_count(&self) -> usize {
        self.sum.count()
    }

    fn aggregate_norm(&self) -> f64 {
        norm(&self.sum.sum())
    }
}
