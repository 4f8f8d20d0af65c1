use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use async_oco::learners::Algorithm;

use crate::error::ExperimentError;
use crate::manifest::STANDARD_DATASETS;

/// Test examples held out after the training rounds.
pub const TEST_EXAMPLES: usize = 2000;

/// Dimension of the synthetic sequences.
pub const SYNTHETIC_DIM: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DatasetChoice {
    /// A LIBSVM dataset looked up in the manifest.
    Named(String),
    /// Quadratics `(lambda/2)||x - a_t||^2` with anchors in the unit ball.
    SyntheticQuadratic,
    /// Hinge + L2 losses on unit-ball features with noisy labels.
    SyntheticHinge,
}

impl DatasetChoice {
    pub fn name(&self) -> &str {
        match self {
            DatasetChoice::Named(n) => n,
            DatasetChoice::SyntheticQuadratic => "synthetic",
            DatasetChoice::SyntheticHinge => "synthetic-hinge",
        }
    }

    pub fn is_synthetic(&self) -> bool {
        !matches!(self, DatasetChoice::Named(_))
    }

    pub fn standard() -> Vec<DatasetChoice> {
        STANDARD_DATASETS.iter().map(|(n, _, _)| DatasetChoice::Named(n.to_string())).collect()
    }
}

impl fmt::Display for DatasetChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DatasetChoice {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "" => Err(ExperimentError::Invalid("empty dataset name".into())),
            "synthetic" | "synthetic-quadratic" => Ok(DatasetChoice::SyntheticQuadratic),
            "synthetic-hinge" => Ok(DatasetChoice::SyntheticHinge),
            other => Ok(DatasetChoice::Named(other.to_string())),
        }
    }
}

/// The two agent/delay scenarios of the dataset experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// 2 agents, maximum delay 100.
    #[value(name = "paper-2agent")]
    Paper2Agent,
    /// 20 agents, maximum delay 1000.
    #[value(name = "paper-20agent")]
    Paper20Agent,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Paper2Agent => "paper-2agent",
            Preset::Paper20Agent => "paper-20agent",
        }
    }

    pub fn agents(self) -> usize {
        match self {
            Preset::Paper2Agent => 2,
            Preset::Paper20Agent => 20,
        }
    }

    pub fn max_delay(self) -> usize {
        match self {
            Preset::Paper2Agent => 100,
            Preset::Paper20Agent => 1000,
        }
    }

    pub fn spec(self) -> ExperimentSpec {
        ExperimentSpec {
            datasets: DatasetChoice::standard(),
            agents: self.agents(),
            max_delay: self.max_delay(),
            scenario: Some(self.name().to_string()),
            ..ExperimentSpec::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub datasets: Vec<DatasetChoice>,
    pub algorithms: Vec<Algorithm>,
    pub agents: usize,
    pub max_delay: usize,
    pub rounds: usize,
    pub lambda: f64,
    pub radius: f64,
    pub seeds: Vec<u64>,
    /// Label used in metrics and file names; derived from `agents` and
    /// `max_delay` when unset.
    pub scenario: Option<String>,
    pub out: Option<PathBuf>,
    pub dump_decisions: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            datasets: DatasetChoice::standard(),
            algorithms: vec![Algorithm::Aftdl, Algorithm::Dda],
            agents: 2,
            max_delay: 100,
            rounds: 8000,
            lambda: 0.01,
            radius: 1.0,
            seeds: vec![1],
            scenario: None,
            out: None,
            dump_decisions: false,
        }
    }
}

impl ExperimentSpec {
    pub fn scenario(&self) -> String {
        self.scenario.clone().unwrap_or_else(|| format!("m{}-d{}", self.agents, self.max_delay))
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let fail = |m: &str| Err(ExperimentError::Invalid(m.to_string()));
        if self.datasets.is_empty() {
            return fail("no datasets selected");
        }
        if self.algorithms.is_empty() {
            return fail("no algorithms selected");
        }
        if self.seeds.is_empty() {
            return fail("no seeds given");
        }
        if self.agents == 0 || self.max_delay == 0 || self.rounds == 0 {
            return fail("agents, max delay and rounds must be at least 1");
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) || !(self.radius > 0.0 && self.radius.is_finite()) {
            return fail("lambda and radius must be positive and finite");
        }
        Ok(())
    }
}
