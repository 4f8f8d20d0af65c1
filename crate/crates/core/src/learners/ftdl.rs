use std::collections::BTreeMap;

use super::solver::{minimize_warm, Objective, SolverSettings};
use super::Learner;
use crate::error::{check_dim, Error, Result};
use crate::losses::Loss;
use crate::model::{BallDomain, FeedbackMessage, FeedbackMode, Payload};

/// Follow-the-delayed-leader: play the minimizer over the ball of the sum of
/// every loss received so far.
///
/// With no feedback the decision is the origin. Pure-quadratic feedback sets
/// are solved in closed form; anything with hinge terms goes through the
/// dual coordinate solver, warm-started from the previous round's duals.
#[derive(Debug, Clone)]
pub struct Ftdl {
    domain: BallDomain,
    settings: SolverSettings,
    losses: BTreeMap<usize, Loss>,
    duals: BTreeMap<usize, f64>,
    last_decision: Option<Vec<f64>>,
    last_gap: f64,
}

impl Ftdl {
    pub fn new(domain: BallDomain, settings: SolverSettings) -> Self {
        Self { domain, settings, losses: BTreeMap::new(), duals: BTreeMap::new(), last_decision: None, last_gap: 0.0 }
    }

    pub fn insert_loss(&mut self, origin: usize, loss: Loss) -> Result<()> {
        check_dim(self.domain.dim(), loss.dim())?;
        if self.losses.insert(origin, loss).is_some() {
            return Err(Error::InvalidConfig(format!("feedback of round {origin} delivered twice")));
        }
        Ok(())
    }

    /// Certified optimality gap of the last decision.
    pub fn last_gap(&self) -> f64 {
        self.last_gap
    }

    pub fn received(&self) -> impl Iterator<Item = (&usize, &Loss)> {
        self.losses.iter()
    }
}

impl Learner for Ftdl {
    fn feedback_mode(&self) -> FeedbackMode {
        FeedbackMode::FullLoss
    }

    fn receive(&mut self, msg: FeedbackMessage) -> Result<()> {
        match msg.payload {
            Payload::Loss(loss) => self.insert_loss(msg.origin, loss),
            _ => Err(Error::PayloadMismatch),
        }
    }

    fn decide(&mut self) -> Result<Vec<f64>> {
        if self.losses.is_empty() {
            return Ok(self.domain.origin());
        }
        let objective = Objective::from_losses(self.domain.dim(), self.losses.values())?;
        // duals in the same (ascending origin) order as the hinge terms
        let hinge_origins: Vec<usize> =
            self.losses.iter().filter(|(_, l)| matches!(l, Loss::HingeL2(_))).map(|(&o, _)| o).collect();
        let mut alpha: Vec<f64> = hinge_origins.iter().map(|o| self.duals.get(o).copied().unwrap_or(0.0)).collect();
        let sol = minimize_warm(&objective, &self.domain, &self.settings, &mut alpha, self.last_decision.as_deref())?;
        for (o, a) in hinge_origins.into_iter().zip(alpha) {
            self.duals.insert(o, a);
        }
        self.last_gap = sol.gap;
        self.last_decision = Some(sol.x.clone());
        Ok(sol.x)
    }

    fn feedback_count(&self) -> usize {
        self.losses.len()
    }

    fn aggregate_norm(&self) -> f64 {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losses::{HingeL2Loss, QuadraticLoss};

    fn msg(origin: usize, loss: Loss) -> FeedbackMessage {
        FeedbackMessage { origin, payload: Payload::Loss(loss) }
    }

    #[test]
    fn empty_feedback_plays_origin() {
        let mut f = Ftdl::new(BallDomain::new(3, 1.0).unwrap(), SolverSettings::default());
        assert_eq!(f.decide().unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn quadratics_give_mean_anchor() {
        let mut f = Ftdl::new(BallDomain::new(2, 1.0).unwrap(), SolverSettings::default());
        f.receive(msg(1, QuadraticLoss::new(vec![1.0, 0.0], 1.0).into())).unwrap();
        f.receive(msg(2, QuadraticLoss::new(vec![0.0, 1.0], 1.0).into())).unwrap();
        assert_eq!(f.decide().unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn rejects_wrong_payload_and_duplicates() {
        let mut f = Ftdl::new(BallDomain::new(2, 1.0).unwrap(), SolverSettings::default());
        let err = f.receive(FeedbackMessage { origin: 1, payload: Payload::Gradient(vec![0.0, 0.0]) });
        assert_eq!(err, Err(Error::PayloadMismatch));
        f.receive(msg(1, HingeL2Loss::new(vec![1.0, 0.0], 1.0, 0.1).into())).unwrap();
        assert!(f.receive(msg(1, HingeL2Loss::new(vec![1.0, 0.0], 1.0, 0.1).into())).is_err());
        assert!(f.receive(msg(2, HingeL2Loss::new(vec![1.0], 1.0, 0.1).into())).is_err());
    }
}
