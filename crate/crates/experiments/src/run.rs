use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use async_oco::data::{compute_budget, sample_and_split, Example};
use async_oco::learners::Algorithm;
use async_oco::losses::{LipschitzBudget, Loss};
use async_oco::model::{BallDomain, RunConfig};
use async_oco::oracles::{offline_optimum, regret_curve, test_accuracy, BoundParams, RegretReport};
use async_oco::sim::{RunTrace, Simulation};
use async_oco::synthetic;

use crate::error::{ExperimentError, Result};
use crate::manifest::Manifest;
use crate::meta::RunMeta;
use crate::metrics::MetricsTable;
use crate::spec::{DatasetChoice, ExperimentSpec, SYNTHETIC_DIM, TEST_EXAMPLES};

/// Tolerance of the offline optimum used as the regret comparator.
const OPTIMUM_TOL: f64 = 1e-9;

/// Losses and held-out examples for one (dataset, seed) pair, shared by all
/// algorithms of that pair.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub dataset: DatasetChoice,
    pub seed: u64,
    pub dim: usize,
    pub losses: Vec<Loss>,
    pub test: Vec<Example>,
    /// Largest feature norm over the sample (datasets only).
    pub w_max: Option<f64>,
    pub gradient_bound: f64,
    pub source: Option<PathBuf>,
}

impl PreparedData {
    pub fn prepare(dataset: &DatasetChoice, spec: &ExperimentSpec, seed: u64, manifest: &Manifest) -> Result<Self> {
        let (lambda, radius, rounds) = (spec.lambda, spec.radius, spec.rounds);
        match dataset {
            DatasetChoice::Named(name) => {
                let data = manifest.load_dataset(name)?;
                let split = sample_and_split(&data, rounds + TEST_EXAMPLES, rounds, seed)?;
                let (w_max, budget) = compute_budget(&split, lambda, radius);
                Ok(PreparedData {
                    dataset: dataset.clone(),
                    seed,
                    dim: split.dim,
                    losses: split.train_losses(lambda),
                    test: split.test,
                    w_max: Some(w_max),
                    gradient_bound: budget.g,
                    source: manifest.resolve(name).ok(),
                })
            }
            DatasetChoice::SyntheticQuadratic | DatasetChoice::SyntheticHinge => {
                let losses = if *dataset == DatasetChoice::SyntheticQuadratic {
                    synthetic::quadratic_sequence(SYNTHETIC_DIM, rounds, lambda, 1.0, seed)
                } else {
                    synthetic::hinge_sequence(SYNTHETIC_DIM, rounds, lambda, seed)
                };
                let g = LipschitzBudget::for_losses(&losses, radius).g;
                Ok(PreparedData {
                    dataset: dataset.clone(),
                    seed,
                    dim: SYNTHETIC_DIM,
                    losses,
                    test: Vec::new(),
                    w_max: None,
                    gradient_bound: g,
                    source: None,
                })
            }
        }
    }
}

/// Everything produced by one simulated run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub dataset: DatasetChoice,
    pub scenario: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub trace: RunTrace,
    pub regret: RegretReport,
    pub accuracy: Option<f64>,
    pub meta: RunMeta,
}

impl RunOutput {
    /// `dataset_scenario_algo_sSEED`
    pub fn id(&self) -> String {
        format!("{}_{}_{}_s{}", self.dataset, self.scenario, self.algorithm, self.seed)
    }

    pub fn final_loss(&self) -> f64 {
        self.trace.total_loss()
    }

    /// Mean seconds spent per round in delivery plus decision.
    pub fn per_round_seconds(&self) -> f64 {
        let total: Duration = self.trace.records.iter().map(|r| r.elapsed).sum();
        total.as_secs_f64() / self.trace.len().max(1) as f64
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub runs: Vec<RunOutput>,
    pub metrics: MetricsTable,
}

/// Simulates one algorithm on prepared data.
pub fn run_single(
    data: &PreparedData,
    algorithm: Algorithm,
    spec: &ExperimentSpec,
    x_star: &[f64],
) -> Result<RunOutput> {
    let domain = BallDomain::new(data.dim, spec.radius)?;
    let config = RunConfig::builder(domain)
        .agents(spec.agents)
        .horizon(data.losses.len())
        .max_delay(spec.max_delay)
        .strong_convexity(spec.lambda)
        .seed(data.seed)
        .build()?;
    let trace =
        Simulation::new(config, algorithm, data.losses.clone())?.with_gradient_bound(data.gradient_bound).run()?;
    let params = BoundParams::new(spec.max_delay, data.gradient_bound, spec.lambda, spec.radius);
    let regret = regret_curve(&trace, &data.losses, x_star, &params)?;
    let accuracy = match (data.test.is_empty(), trace.final_decision()) {
        (false, Some(x)) => Some(test_accuracy(x, &data.test)?),
        _ => None,
    };
    let scenario = spec.scenario();
    let meta = RunMeta::describe(data, algorithm, spec, &scenario, &trace);
    Ok(RunOutput { dataset: data.dataset.clone(), scenario, algorithm, seed: data.seed, trace, regret, accuracy, meta })
}

/// Runs every (dataset, seed, algorithm) combination of `spec`. When
/// `spec.out` is set, per-run files, the metrics table and the figures are
/// written there.
pub fn run_experiment(spec: &ExperimentSpec, manifest: &Manifest) -> Result<ExperimentOutput> {
    spec.validate()?;
    let mut runs = Vec::new();
    for dataset in &spec.datasets {
        for &seed in &spec.seeds {
            let data = PreparedData::prepare(dataset, spec, seed, manifest)?;
            let domain = BallDomain::new(data.dim, spec.radius)?;
            let x_star = offline_optimum(&data.losses, &domain, OPTIMUM_TOL)?.x;
            for &algorithm in &spec.algorithms {
                let run = run_single(&data, algorithm, spec, &x_star)?;
                if let Some(dir) = &spec.out {
                    write_run(&run, dir, spec.dump_decisions)?;
                }
                runs.push(run);
            }
        }
    }
    let metrics = MetricsTable::from_runs(&runs);
    if let Some(dir) = &spec.out {
        write_file(&dir.join("metrics.csv"), &metrics.to_csv())?;
        write_file(&dir.join("timing.csv"), &crate::timing::timing_report(&runs).to_csv())?;
        crate::plots::emit_plots(&runs, &dir.join("plots"))?;
    }
    Ok(ExperimentOutput { runs, metrics })
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(ExperimentError::io(parent))?;
    }
    fs::write(path, contents).map_err(ExperimentError::io(path))
}

/// Writes `trace.csv`, `regret.csv`, `aggregates.csv`, `run_meta.txt` and,
/// if asked, `decisions.csv` under `<dir>/runs/<id>/`.
pub fn write_run(run: &RunOutput, dir: &Path, dump_decisions: bool) -> Result<PathBuf> {
    let base = dir.join("runs").join(run.id());
    write_file(&base.join("trace.csv"), &run.trace.to_csv())?;
    write_file(&base.join("regret.csv"), &run.regret.to_csv())?;
    write_file(&base.join("aggregates.csv"), &run.trace.aggregates_csv())?;
    let mut meta = run.meta.to_text();
    let _ = writeln!(meta, "final_loss = {}", run.final_loss());
    let _ = writeln!(meta, "regret = {}", run.regret.final_regret());
    if let Some(acc) = run.accuracy {
        let _ = writeln!(meta, "test_accuracy = {acc}");
    }
    write_file(&base.join("run_meta.txt"), &meta)?;
    if dump_decisions {
        write_file(&base.join("decisions.csv"), &run.trace.decisions_csv())?;
    }
    Ok(base)
}
