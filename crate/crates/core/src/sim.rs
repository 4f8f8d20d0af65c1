//! The asynchronous multi-agent round loop.
//!
//! Round `t` proceeds as:
//!
//! 1. every pending message with delivery round `<= t - 1` is handed to its
//!    target agent (feedback arriving "at the end of round `t - 1`");
//! 2. the active agent for round `t` is chosen by the activation policy;
//! 3. that agent's received set becomes `F_t` and its learner decides `x_t`,
//!    which suffers `f_t(x_t)`;
//! 4. the feedback of round `t` is queued for every agent `j`, including the
//!    active one, for delivery at the end of round `t + d[t][j] - 1`.
//!
//! Messages still queued after the horizon are delivered afterwards so that
//! delivery counts are complete; they influence no decision.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::error::{check_dim, Error, Result};
use crate::learners::{Algorithm, Learner, LearnerParams, SolverSettings};
use crate::losses::{surrogate_vector, LipschitzBudget, Loss};
use crate::model::{AgentState, DelaySchedule, FeedbackMessage, FeedbackMode, Payload, RunConfig};

/// Message queued for delivery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PendingDelivery {
    pub deliver_at: usize,
    pub origin: usize,
    pub target: usize,
}

/// Builds the feedback message of one round for the given mode.
pub fn feedback_for_mode(
    mode: FeedbackMode,
    origin: usize,
    loss: &Loss,
    x: &[f64],
    grad: &[f64],
    lambda: f64,
) -> Result<FeedbackMessage> {
    check_dim(loss.dim(), x.len())?;
    let payload = match mode {
        FeedbackMode::FullLoss => Payload::Loss(loss.clone()),
        FeedbackMode::Surrogate => Payload::Surrogate(surrogate_vector(grad, x, lambda)?),
        FeedbackMode::Gradient => {
            check_dim(x.len(), grad.len())?;
            Payload::Gradient(grad.to_vec())
        }
    };
    Ok(FeedbackMessage { origin, payload })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub round: usize,
    pub agent: usize,
    pub decision: Vec<f64>,
    pub loss: f64,
    /// `|F_t|`.
    pub feedback_count: usize,
    /// Largest `p` with `{1..p}` inside `F_t`.
    pub feedback_prefix: usize,
    /// Largest origin in `F_t` (0 if empty).
    pub feedback_max: usize,
    /// Some `s` in `F_t` had `|F_s| > |F_t|`.
    pub order_violation: bool,
    pub aggregate_norm: f64,
    /// Wall time of this round's deliveries plus the decision.
    pub elapsed: Duration,
    /// Full `F_t`, only when requested.
    pub feedback_set: Option<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct RunTrace {
    pub algorithm: Algorithm,
    pub agents: usize,
    pub max_delay: usize,
    pub lambda: f64,
    pub radius: f64,
    pub gradient_bound: f64,
    pub schedule_digest: String,
    pub records: Vec<RoundRecord>,
    /// Identifier of the loss used at each round (e.g. example index).
    pub loss_ids: Vec<usize>,
    pub delivered_messages: usize,
    /// Number of `n`-vectors carried by all delivered payloads.
    pub payload_vectors: usize,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    config: RunConfig,
    algorithm: Algorithm,
    schedule: DelaySchedule,
    losses: Vec<Loss>,
    loss_ids: Vec<usize>,
    gradient_bound: Option<f64>,
    solver: SolverSettings,
    record_sets: bool,
}

impl Simulation {
    /// A run whose delays are drawn from the config's seed.
    pub fn new(config: RunConfig, algorithm: Algorithm, losses: Vec<Loss>) -> Result<Self> {
        config.validate()?;
        if let Some(mode) = config.feedback_mode {
            if mode != algorithm.feedback_mode() {
                return Err(Error::InvalidConfig(format!(
                    "{algorithm} consumes {} feedback, config requests {}",
                    algorithm.feedback_mode().name(),
                    mode.name()
                )));
            }
        }
        if losses.len() != config.horizon {
            return Err(Error::LengthMismatch { expected: config.horizon, actual: losses.len() });
        }
        for l in &losses {
            check_dim(config.domain.dim(), l.dim())?;
        }
        let schedule = DelaySchedule::generate(&config)?;
        let loss_ids = (1..=losses.len()).collect();
        Ok(Self {
            config,
            algorithm,
            schedule,
            losses,
            loss_ids,
            gradient_bound: None,
            solver: SolverSettings::default(),
            record_sets: false,
        })
    }

    /// Replace the generated schedule (e.g. one replayed from CSV).
    pub fn with_schedule(mut self, schedule: DelaySchedule) -> Result<Self> {
        if schedule.horizon() != self.config.horizon || schedule.agents() != self.config.agents {
            return Err(Error::InvalidConfig(format!(
                "schedule is {}x{}, run is {}x{}",
                schedule.horizon(),
                schedule.agents(),
                self.config.horizon,
                self.config.agents
            )));
        }
        if schedule.max_delay() > self.config.max_delay {
            return Err(Error::InvalidConfig(format!(
                "schedule max delay {} exceeds configured {}",
                schedule.max_delay(),
                self.config.max_delay
            )));
        }
        self.schedule = schedule;
        Ok(self)
    }

    /// `G` for the dual-averaging step size. Defaults to the largest
    /// per-loss gradient bound over the domain.
    pub fn with_gradient_bound(mut self, g: f64) -> Self {
        self.gradient_bound = Some(g);
        self
    }

    pub fn with_solver(mut self, settings: SolverSettings) -> Self {
        self.solver = settings;
        self
    }

    pub fn with_loss_ids(mut self, ids: Vec<usize>) -> Result<Self> {
        if ids.len() != self.losses.len() {
            return Err(Error::LengthMismatch { expected: self.losses.len(), actual: ids.len() });
        }
        self.loss_ids = ids;
        Ok(self)
    }

    /// Keep the full feedback set of every round in the trace.
    pub fn record_feedback_sets(mut self, on: bool) -> Self {
        self.record_sets = on;
        self
    }

    pub fn schedule(&self) -> &DelaySchedule {
        &self.schedule
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn run(self) -> Result<RunTrace> {
        let cfg = &self.config;
        let (m, horizon) = (cfg.agents, cfg.horizon);
        let mode = self.algorithm.feedback_mode();
        let g = self.gradient_bound.unwrap_or_else(|| LipschitzBudget::for_losses(&self.losses, cfg.domain.radius()).g);
        let params = LearnerParams {
            domain: cfg.domain.clone(),
            lambda: cfg.lambda,
            gradient_bound: g,
            max_delay: cfg.max_delay,
            solver: self.solver,
        };
        let mut learners: Vec<Box<dyn Learner>> = (0..m).map(|_| self.algorithm.build(&params)).collect();
        let mut agents: Vec<AgentState> = (1..=m).map(AgentState::new).collect();
        // max |F_s| over the origins s each agent holds
        let mut held_max_count = vec![0usize; m];
        let mut counts_at = vec![0usize; horizon + 1];
        let activation = cfg.activation_sequence();

        let mut queue: BinaryHeap<Reverse<PendingDelivery>> = BinaryHeap::new();
        let mut payloads: Vec<Option<Payload>> = vec![None; horizon + 1];
        let mut records = Vec::with_capacity(horizon);
        let mut delivered = 0usize;

        let mut deliver = |upto: usize,
                           queue: &mut BinaryHeap<Reverse<PendingDelivery>>,
                           learners: &mut [Box<dyn Learner>],
                           agents: &mut [AgentState],
                           held_max_count: &mut [usize],
                           counts_at: &[usize],
                           payloads: &[Option<Payload>]|
         -> Result<()> {
            while let Some(Reverse(next)) = queue.peek().copied() {
                if next.deliver_at > upto {
                    break;
                }
                queue.pop();
                let payload = payloads[next.origin].clone().expect("payload queued before delivery");
                let i = next.target - 1;
                learners[i].receive(FeedbackMessage { origin: next.origin, payload })?;
                if !agents[i].received.insert(next.origin) {
                    return Err(Error::InvalidConfig(format!("round {} delivered twice", next.origin)));
                }
                held_max_count[i] = held_max_count[i].max(counts_at[next.origin]);
                delivered += 1;
            }
            Ok(())
        };

        for t in 1..=horizon {
            let start = Instant::now();
            deliver(t - 1, &mut queue, &mut learners, &mut agents, &mut held_max_count, &counts_at, &payloads)?;
            let active = activation[t - 1];
            let i = active - 1;
            let received = &agents[i].received;
            let count = received.len();
            let x = learners[i].decide()?;
            let elapsed = start.elapsed();
            counts_at[t] = count;

            let loss = &self.losses[t - 1];
            let value = loss.value(&x)?;
            let grad = if mode == FeedbackMode::FullLoss { Vec::new() } else { loss.gradient(&x)? };
            let msg = feedback_for_mode(mode, t, loss, &x, &grad, cfg.lambda)?;
            payloads[t] = Some(msg.payload);
            for j in 1..=m {
                queue.push(Reverse(PendingDelivery {
                    deliver_at: self.schedule.delivery_round(t, j)?,
                    origin: t,
                    target: j,
                }));
            }

            records.push(RoundRecord {
                round: t,
                agent: active,
                decision: x,
                loss: value,
                feedback_count: count,
                feedback_prefix: received.prefix(),
                feedback_max: received.max(),
                order_violation: held_max_count[i] > count,
                aggregate_norm: learners[i].aggregate_norm(),
                elapsed,
                feedback_set: self.record_sets.then(|| received.iter().collect()),
            });
        }
        deliver(usize::MAX, &mut queue, &mut learners, &mut agents, &mut held_max_count, &counts_at, &payloads)?;

        Ok(RunTrace {
            algorithm: self.algorithm,
            agents: m,
            max_delay: cfg.max_delay,
            lambda: cfg.lambda,
            radius: cfg.domain.radius(),
            gradient_bound: g,
            schedule_digest: self.schedule.digest(),
            records,
            loss_ids: self.loss_ids,
            delivered_messages: delivered,
            // every payload variant is a single n-vector (a loss carries its
            // feature or anchor vector)
            payload_vectors: delivered,
        })
    }
}

impl RunTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn decisions(&self) -> impl Iterator<Item = &[f64]> {
        self.records.iter().map(|r| r.decision.as_slice())
    }

    pub fn final_decision(&self) -> Option<&[f64]> {
        self.records.last().map(|r| r.decision.as_slice())
    }

    pub fn cumulative_losses(&self) -> Vec<f64> {
        self.records
            .iter()
            .scan(0.0, |acc, r| {
                *acc += r.loss;
                Some(*acc)
            })
            .collect()
    }

    pub fn total_loss(&self) -> f64 {
        self.records.iter().map(|r| r.loss).sum()
    }

    /// Rounds at which the active agent held feedback from a round whose own
    /// feedback set was larger.
    pub fn order_violations(&self) -> usize {
        self.records.iter().filter(|r| r.order_violation).count()
    }

    /// First round violating `{1..t-d} <= F_t <= {1..t-1}`, if any.
    pub fn feedback_invariant_violation(&self) -> Option<usize> {
        let d = self.max_delay;
        self.records
            .iter()
            .find(|r| {
                let t = r.round;
                r.feedback_max > t - 1 || r.feedback_count > t - 1 || r.feedback_prefix < t.saturating_sub(d)
            })
            .map(|r| r.round)
    }

    /// `round,active_agent,feedback_count,inst_loss,cum_loss`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("round,active_agent,feedback_count,inst_loss,cum_loss\n");
        let mut cum = 0.0;
        for r in &self.records {
            cum += r.loss;
            let _ = writeln!(out, "{},{},{},{},{}", r.round, r.agent, r.feedback_count, r.loss, cum);
        }
        out
    }

    /// One decision per row, comma separated.
    pub fn decisions_csv(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let row: Vec<String> = r.decision.iter().map(|v| v.to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// `round,agent,sum_norm,count`
    pub fn aggregates_csv(&self) -> String {
        let mut out = String::from("round,agent,sum_norm,count\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{},{},{}", r.round, r.agent, r.aggregate_norm, r.feedback_count);
        }
        out
    }
}
