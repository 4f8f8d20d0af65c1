//! Online decision rules. Each learner is the state of one agent: it
//! absorbs delivered feedback and, when its agent is activated, returns the
//! decision for the current round.

mod aftdl;
mod dda;
mod ftdl;
pub mod solver;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use aftdl::{aftdl_decision, Aftdl};
pub use dda::{dda_eta, Dda};
pub use ftdl::Ftdl;
pub use solver::{inner_minimize, Method, Objective, Solution, SolverSettings};

use crate::error::{Error, Result};
use crate::linalg::{axpy, norm};
use crate::model::{BallDomain, FeedbackMessage, FeedbackMode};

pub trait Learner: Send {
    fn feedback_mode(&self) -> FeedbackMode;

    /// Absorb one delivered message.
    fn receive(&mut self, msg: FeedbackMessage) -> Result<()>;

    /// Decision for the current round given everything received so far.
    fn decide(&mut self) -> Result<Vec<f64>>;

    /// `|G_i|`.
    fn feedback_count(&self) -> usize;

    /// Norm of the learner's running aggregate (sum of surrogate vectors or
    /// gradients; 0 for full-loss learners).
    fn aggregate_norm(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Ftdl,
    Aftdl,
    Dda,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Ftdl, Algorithm::Aftdl, Algorithm::Dda];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ftdl => "ftdl",
            Algorithm::Aftdl => "aftdl",
            Algorithm::Dda => "dda",
        }
    }

    pub fn feedback_mode(self) -> FeedbackMode {
        match self {
            Algorithm::Ftdl => FeedbackMode::FullLoss,
            Algorithm::Aftdl => FeedbackMode::Surrogate,
            Algorithm::Dda => FeedbackMode::Gradient,
        }
    }

    pub fn build(self, params: &LearnerParams) -> Box<dyn Learner> {
        match self {
            Algorithm::Ftdl => Box::new(Ftdl::new(params.domain.clone(), params.solver)),
            Algorithm::Aftdl => Box::new(Aftdl::new(params.domain.clone(), params.lambda)),
            Algorithm::Dda => Box::new(Dda::new(params.domain.clone(), params.gradient_bound, params.max_delay)),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ftdl" => Ok(Algorithm::Ftdl),
            "aftdl" | "a-ftdl" => Ok(Algorithm::Aftdl),
            "dda" => Ok(Algorithm::Dda),
            other => Err(Error::InvalidConfig(format!("unknown algorithm {other:?} (expected ftdl, aftdl or dda)"))),
        }
    }
}

/// Everything needed to build any learner for one run.
#[derive(Debug, Clone)]
pub struct LearnerParams {
    pub domain: BallDomain,
    pub lambda: f64,
    /// `G`, used by the dual-averaging step size.
    pub gradient_bound: f64,
    pub max_delay: usize,
    pub solver: SolverSettings,
}

/// Euclidean projection onto the origin-centered ball of radius `radius`.
pub fn project_ball(v: &[f64], radius: f64) -> Vec<f64> {
    let n = norm(v);
    if n <= radius {
        v.to_vec()
    } else {
        let s = radius / n;
        v.iter().map(|x| x * s).collect()
    }
}

/// Ball of radius `2G / lambda`, which contains the unconstrained minimizer of
/// any sum of `lambda`-strongly convex losses that are `G`-Lipschitz at the
/// origin.
pub fn unconstrained_wrap(dim: usize, g: f64, lambda: f64) -> Result<BallDomain> {
    if !(g > 0.0 && lambda > 0.0) {
        return Err(Error::InvalidConfig(format!("need G > 0 and lambda > 0, got G = {g}, lambda = {lambda}")));
    }
    BallDomain::new(dim, 2.0 * g / lambda)
}

/// Sum of vectors keyed by origin round, always equal bit for bit to the
/// left fold in ascending origin order, whatever the insertion order.
///
/// The contiguous run `1..=p` is folded eagerly; out-of-order arrivals wait
/// in a side map until the run reaches them. Evaluating the sum costs
/// `O(n * (1 + pending))` and `pending` never exceeds the maximum delay.
#[derive(Debug, Clone)]
pub(crate) struct OrderedSum {
    prefix_sum: Vec<f64>,
    prefix: usize,
    pending: BTreeMap<usize, Vec<f64>>,
    count: usize,
}

impl OrderedSum {
    pub(crate) fn new(dim: usize) -> Self {
        Self { prefix_sum: vec![0.0; dim], prefix: 0, pending: BTreeMap::new(), count: 0 }
    }

    pub(crate) fn insert(&mut self, origin: usize, v: Vec<f64>) -> Result<()> {
        if origin <= self.prefix || self.pending.contains_key(&origin) {
            return Err(Error::InvalidConfig(format!("feedback of round {origin} delivered twice")));
        }
        self.count += 1;
        if origin != self.prefix + 1 {
            self.pending.insert(origin, v);
            return Ok(());
        }
        axpy(1.0, &v, &mut self.prefix_sum);
        self.prefix += 1;
        while let Some(next) = self.pending.remove(&(self.prefix + 1)) {
            axpy(1.0, &next, &mut self.prefix_sum);
            self.prefix += 1;
        }
        Ok(())
    }

    pub(crate) fn sum(&self) -> Vec<f64> {
        let mut s = self.prefix_sum.clone();
        for v in self.pending.values() {
            axpy(1.0, v, &mut s);
        }
        s
    }

    pub(crate) fn count(&self) -> usize {
        self.count
    }
}
