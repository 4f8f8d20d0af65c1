use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use async_oco::learners::Algorithm;
use async_oco_experiments::{run_experiment, DatasetChoice, ExperimentSpec, Manifest, Preset};
use clap::Parser;

/// Run the delayed-feedback learners on LIBSVM datasets or synthetic
/// sequences and write traces, metrics and figures.
#[derive(Debug, Parser)]
#[command(name = "async-oco", version)]
struct Cli {
    /// Datasets: manifest names, `all`, `synthetic` or `synthetic-hinge`.
    #[arg(long, value_delimiter = ',')]
    dataset: Vec<String>,

    /// Algorithms: ftdl, aftdl, dda.
    #[arg(long, value_delimiter = ',')]
    algo: Vec<Algorithm>,

    /// Number of agents.
    #[arg(long)]
    agents: Option<usize>,

    /// Maximum delay.
    #[arg(long, visible_alias = "d")]
    dmax: Option<usize>,

    /// Training rounds (2000 more examples are held out for testing).
    #[arg(long)]
    rounds: Option<usize>,

    /// Strong convexity / regularization weight.
    #[arg(long)]
    lambda: Option<f64>,

    /// Radius of the decision ball.
    #[arg(long)]
    radius: Option<f64>,

    /// Seeds; each drives sampling and delays.
    #[arg(long, value_delimiter = ',')]
    seed: Vec<u64>,

    /// Agent/delay scenario of the dataset experiments.
    #[arg(long, value_enum)]
    preset: Option<Preset>,

    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,

    /// Also write every decision vector.
    #[arg(long)]
    dump_decisions: bool,

    /// Directory holding the dataset files under their plain names.
    #[arg(long, default_value = "data")]
    data_dir: PathBuf,

    /// TOML manifest overriding dataset locations.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

impl Cli {
    fn spec(&self) -> anyhow::Result<ExperimentSpec> {
        let mut spec = self.preset.map(Preset::spec).unwrap_or_default();
        if !self.dataset.is_empty() {
            spec.datasets.clear();
            for name in &self.dataset {
                if name == "all" {
                    spec.datasets.extend(DatasetChoice::standard());
                } else {
                    spec.datasets.push(name.parse()?);
                }
            }
        }
        if !self.algo.is_empty() {
            spec.algorithms = self.algo.clone();
        }
        if let Some(m) = self.agents {
            spec.agents = m;
        }
        if let Some(d) = self.dmax {
            spec.max_delay = d;
        }
        if self.agents.is_some() || self.dmax.is_some() {
            spec.scenario = None;
        }
        if let Some(t) = self.rounds {
            spec.rounds = t;
        }
        if let Some(l) = self.lambda {
            spec.lambda = l;
        }
        if let Some(r) = self.radius {
            spec.radius = r;
        }
        if !self.seed.is_empty() {
            spec.seeds = self.seed.clone();
        }
        spec.out = Some(self.out.clone());
        spec.dump_decisions = self.dump_decisions;
        spec.validate()?;
        Ok(spec)
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let spec = cli.spec()?;
    let mut manifest = Manifest::defaults(&cli.data_dir);
    if let Some(path) = &cli.manifest {
        manifest = manifest.merge(Manifest::load(path)?);
    }
    let out = run_experiment(&spec, &manifest).context("experiment failed")?;
    print!("{}", out.metrics.render());
    eprintln!("wrote {} runs to {}", out.runs.len(), cli.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
