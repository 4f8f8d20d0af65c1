//! Shared domain types: the decision ball, run configuration, delay
//! schedules, feedback messages and per-agent feedback sets.
//!
//! Rounds and agents are 1-based throughout the public API, matching the
//! usual statement of the delivery rule: feedback of round `s` reaches agent
//! `i` at the end of round `s + d[s][i] - 1`.

use std::fmt::Write as _;
use std::io::BufRead;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::losses::Loss;
use crate::rng::{SplitMix64, Stream};

/// Euclidean ball `{x in R^n : ||x|| <= R}` centered at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct BallDomain {
    dim: usize,
    radius: f64,
}

impl BallDomain {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("dimension must be positive".into()));
        }
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::InvalidConfig(format!("radius must be finite and nonnegative, got {radius}")));
        }
        Ok(Self { dim, radius })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }

    pub fn origin(&self) -> Vec<f64> {
        vec![0.0; self.dim]
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim && norm(x) <= self.radius + tol
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActivationPolicy {
    /// Agent `((t - 1) mod M) + 1` is active at round `t`.
    RoundRobin,
    /// Active agent drawn uniformly from the run seed's activation stream.
    UniformRandom,
    /// One 1-based agent id per round.
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeedbackMode {
    /// The whole loss function is shared.
    FullLoss,
    /// `z_t = grad f_t(x_t) - lambda x_t` is shared.
    Surrogate,
    /// `grad f_t(x_t)` is shared.
    Gradient,
}

impl FeedbackMode {
    pub fn name(self) -> &'static str {
        match self {
            FeedbackMode::FullLoss => "full-loss",
            FeedbackMode::Surrogate => "surrogate-z",
            FeedbackMode::Gradient => "gradient",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub agents: usize,
    pub horizon: usize,
    pub max_delay: usize,
    pub lambda: f64,
    pub domain: BallDomain,
    pub seed: u64,
    pub activation: ActivationPolicy,
    /// Checked against the algorithm when a simulation is built; `None`
    /// accepts whatever the algorithm consumes.
    pub feedback_mode: Option<FeedbackMode>,
}

pub struct RunConfigBuilder {
    config: RunConfig,
}

impl RunConfig {
    pub fn builder(domain: BallDomain) -> RunConfigBuilder {
        RunConfigBuilder {
            config: RunConfig {
                agents: 1,
                horizon: 1,
                max_delay: 1,
                lambda: 1.0,
                domain,
                seed: 0,
                activation: ActivationPolicy::RoundRobin,
                feedback_mode: None,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.agents == 0 {
            return bad("at least one agent is required".into());
        }
        if self.horizon == 0 {
            return bad("horizon must be positive".into());
        }
        if self.max_delay == 0 {
            return bad("maximum delay must be at least 1".into());
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return bad(format!("strong convexity must be positive, got {}", self.lambda));
        }
        if let ActivationPolicy::Explicit(seq) = &self.activation {
            if seq.len() != self.horizon {
                return bad(format!("activation sequence has {} entries, horizon is {}", seq.len(), self.horizon));
            }
            if let Some(bad_id) = seq.iter().find(|&&a| a == 0 || a > self.agents) {
                return bad(format!("activation sequence names agent {bad_id}, valid ids are 1..={}", self.agents));
            }
        }
        Ok(())
    }

    /// Active agent (1-based) for every round.
    pub fn activation_sequence(&self) -> Vec<usize> {
        match &self.activation {
            ActivationPolicy::RoundRobin => (0..self.horizon).map(|t| t % self.agents + 1).collect(),
            ActivationPolicy::UniformRandom => {
                let mut rng = SplitMix64::stream(self.seed, Stream::Activation);
                (0..self.horizon).map(|_| rng.range_inclusive(1, self.agents as u64) as usize).collect()
            }
            ActivationPolicy::Explicit(seq) => seq.clone(),
        }
    }
}

impl RunConfigBuilder {
    pub fn agents(mut self, m: usize) -> Self {
        self.config.agents = m;
        self
    }
    pub fn horizon(mut self, t: usize) -> Self {
        self.config.horizon = t;
        self
    }
    pub fn max_delay(mut self, d: usize) -> Self {
        self.config.max_delay = d;
        self
    }
    pub fn strong_convexity(mut self, lambda: f64) -> Self {
        self.config.lambda = lambda;
        self
    }
    pub fn seed(mut self, seed: u64) -> Self {
        self.config.seed = seed;
        self
    }
    pub fn activation(mut self, policy: ActivationPolicy) -> Self {
        self.config.activation = policy;
        self
    }
    pub fn feedback_mode(mut self, mode: FeedbackMode) -> Self {
        self.config.feedback_mode = Some(mode);
        self
    }
    pub fn build(self) -> Result<RunConfig> {
        self.config.validate()?;
        Ok(self.config)
    }
}

/// Per-round, per-agent delays `d[t][i]`, each in `[1, max_delay]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelaySchedule {
    horizon: usize,
    agents: usize,
    max_delay: usize,
    // row-major: round t (0-based) then agent
    delays: Vec<u32>,
}

impl DelaySchedule {
    /// Independent uniform integer delays on `[1, max_delay]`, drawn round by
    /// round and agent by agent from the run seed's delay stream.
    pub fn generate(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = SplitMix64::stream(config.seed, Stream::Delays);
        let d = config.max_delay as u64;
        let delays = (0..config.horizon * config.agents).map(|_| rng.range_inclusive(1, d) as u32).collect();
        Ok(Self { horizon: config.horizon, agents: config.agents, max_delay: config.max_delay, delays })
    }

    /// Every entry equal to `delay`.
    pub fn constant(horizon: usize, agents: usize, delay: usize) -> Result<Self> {
        Self::from_rows(horizon, agents, delay, vec![delay as u32; horizon * agents])
    }

    /// Build from row-major delays (round-major, then agent).
    pub fn from_rows(horizon: usize, agents: usize, max_delay: usize, delays: Vec<u32>) -> Result<Self> {
        if horizon == 0 || agents == 0 || max_delay == 0 {
            return Err(Error::InvalidConfig("schedule dimensions and max delay must be positive".into()));
        }
        if delays.len() != horizon * agents {
            return Err(Error::LengthMismatch { expected: horizon * agents, actual: delays.len() });
        }
        if let Some(&bad) = delays.iter().find(|&&v| v == 0 || v as usize > max_delay) {
            return Err(Error::InvalidConfig(format!("delay {bad} outside [1, {max_delay}]")));
        }
        Ok(Self { horizon, agents, max_delay, delays })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
    pub fn agents(&self) -> usize {
        self.agents
    }
    pub fn max_delay(&self) -> usize {
        self.max_delay
    }
    pub fn as_slice(&self) -> &[u32] {
        &self.delays
    }

    fn index(&self, round: usize, agent: usize) -> Result<usize> {
        if round == 0 || round > self.horizon {
            return Err(Error::OutOfRange { what: "round", value: round, max: self.horizon });
        }
        if agent == 0 || agent > self.agents {
            return Err(Error::OutOfRange { what: "agent", value: agent, max: self.agents });
        }
        Ok((round - 1) * self.agents + (agent - 1))
    }

    pub fn delay(&self, round: usize, agent: usize) -> Result<usize> {
        Ok(self.delays[self.index(round, agent)?] as usize)
    }

    /// Round at whose end agent `agent` receives the feedback of round
    /// `origin`: `origin + d[origin][agent] - 1`.
    pub fn delivery_round(&self, origin: usize, agent: usize) -> Result<usize> {
        Ok(origin + self.delay(origin, agent)? - 1)
    }

    pub fn mean_delay(&self) -> f64 {
        self.delays.iter().map(|&v| v as f64).sum::<f64>() / self.delays.len() as f64
    }

    /// CSV with header `t,agent,delay`, one row per (round, agent).
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.delays.len() * 12 + 16);
        out.push_str("t,agent,delay\n");
        for t in 1..=self.horizon {
            for i in 1..=self.agents {
                let _ = writeln!(out, "{t},{i},{}", self.delays[(t - 1) * self.agents + (i - 1)]);
            }
        }
        out
    }

    /// Parse the [`to_csv`](Self::to_csv) format. Rows may come in any order
    /// but every (round, agent) pair must appear exactly once. The maximum
    /// delay is `max_delay` when given (entries above it are rejected),
    /// otherwise the largest entry.
    pub fn from_csv<R: BufRead>(reader: R, max_delay: Option<usize>) -> Result<Self> {
        let mut rows = Vec::new();
        let mut lines = reader.lines().enumerate();
        match lines.next() {
            Some((_, Ok(h))) if h.trim() == "t,agent,delay" => {}
            Some((_, Ok(h))) => return Err(Error::Parse { line: 1, message: format!("unexpected header {h:?}") }),
            Some((_, Err(e))) => return Err(e.into()),
            None => return Err(Error::Empty("delay schedule")),
        }
        for (idx, line) in lines {
            let line = line?;
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 3 fields, got {}", fields.len()),
                });
            }
            let parse = |s: &str| {
                s.trim().parse::<usize>().map_err(|e| Error::Parse { line: line_no, message: format!("{s:?}: {e}") })
            };
            rows.push((line_no, parse(fields[0])?, parse(fields[1])?, parse(fields[2])?));
        }
        if rows.is_empty() {
            return Err(Error::Empty("delay schedule"));
        }
        let horizon = rows.iter().map(|r| r.1).max().unwrap_or(0);
        let agents = rows.iter().map(|r| r.2).max().unwrap_or(0);
        let observed_max = rows.iter().map(|r| r.3).max().unwrap_or(0);
        let max_delay = max_delay.unwrap_or(observed_max);
        let mut delays = vec![0u32; horizon * agents];
        for &(line, t, i, d) in &rows {
            if t == 0 || i == 0 {
                return Err(Error::Parse { line, message: "rounds and agents are 1-based".into() });
            }
            if d == 0 || d > max_delay {
                return Err(Error::Parse { line, message: format!("delay {d} outside [1, {max_delay}]") });
            }
            let slot = &mut delays[(t - 1) * agents + (i - 1)];
            if *slot != 0 {
                return Err(Error::Parse { line, message: format!("duplicate entry for round {t}, agent {i}") });
            }
            *slot = d as u32;
        }
        if delays.contains(&0) {
            return Err(Error::InvalidConfig("schedule is missing (round, agent) entries".into()));
        }
        Self::from_rows(horizon, agents, max_delay, delays)
    }

    /// Hex SHA-256 of the CSV form, for run metadata.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_csv().as_bytes());
        hash.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Loss(Loss),
    Surrogate(Vec<f64>),
    Gradient(Vec<f64>),
}

impl Payload {
    pub fn mode(&self) -> FeedbackMode {
        match self {
            Payload::Loss(_) => FeedbackMode::FullLoss,
            Payload::Surrogate(_) => FeedbackMode::Surrogate,
            Payload::Gradient(_) => FeedbackMode::Gradient,
        }
    }
}

/// Feedback of round `origin`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackMessage {
    pub origin: usize,
    pub payload: Payload,
}

/// The set `G_i` of origin rounds an agent has received, with the summary
/// statistics the delay invariants are phrased in.
#[derive(Debug, Clone, Default)]
pub struct FeedbackSet {
    received: Vec<bool>,
    count: usize,
    prefix: usize,
    max: usize,
}

impl FeedbackSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` if `origin` was already present.
    pub fn insert(&mut self, origin: usize) -> bool {
        assert!(origin >= 1, "rounds are 1-based");
        if self.received.len() < origin {
            self.received.resize(origin.max(2 * self.received.len()), false);
        }
        if self.received[origin - 1] {
            return false;
        }
        self.received[origin - 1] = true;
        self.count += 1;
        self.max = self.max.max(origin);
        while self.prefix < self.received.len() && self.received[self.prefix] {
            self.prefix += 1;
        }
        true
    }

    pub fn contains(&self, origin: usize) -> bool {
        origin >= 1 && self.received.get(origin - 1).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Largest `p` with `{1, ..., p}` contained in the set.
    pub fn prefix(&self) -> usize {
        self.prefix
    }

    /// Largest origin received, 0 when empty.
    pub fn max(&self) -> usize {
        self.max
    }

    /// Origins in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.received.iter().enumerate().filter(|(_, &r)| r).map(|(i, _)| i + 1)
    }
}

/// An agent's identity and received-timestamp set. Learner aggregates live in
/// the learner that the simulator pairs with it.
#[derive(Debug, Clone)]
pub struct AgentState {
    pub id: usize,
    pub received: FeedbackSet,
}

impl AgentState {
    pub fn new(id: usize) -> Self {
        Self { id, received: FeedbackSet::new() }
    }
}
