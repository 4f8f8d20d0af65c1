use std::fmt::Write as _;

use async_oco::learners::Algorithm;
use async_oco::sim::RunTrace;

use crate::run::PreparedData;
use crate::spec::ExperimentSpec;

/// Flat `key = value` record of a run. Together with the dataset file it
/// pins down every input of the simulation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunMeta {
    entries: Vec<(String, String)>,
}

impl RunMeta {
    pub fn describe(
        data: &PreparedData,
        algorithm: Algorithm,
        spec: &ExperimentSpec,
        scenario: &str,
        trace: &RunTrace,
    ) -> Self {
        let mut m = RunMeta::default();
        m.set("crate_version", env!("CARGO_PKG_VERSION"));
        m.set("dataset", data.dataset.name());
        if let Some(path) = &data.source {
            m.set("data_file", path.display());
        }
        m.set("scenario", scenario);
        m.set("algorithm", algorithm);
        m.set("seed", data.seed);
        m.set("agents", spec.agents);
        m.set("max_delay", spec.max_delay);
        m.set("rounds", data.losses.len());
        m.set("test_examples", data.test.len());
        m.set("lambda", spec.lambda);
        m.set("radius", spec.radius);
        m.set("dim", data.dim);
        if let Some(w) = data.w_max {
            m.set("w_max", w);
            m.set("w_max_scope", "sampled train+test");
        }
        m.set("gradient_bound", data.gradient_bound);
        m.set("activation", "round-robin");
        m.set("schedule_sha256", &trace.schedule_digest);
        m.set("delivered_messages", trace.delivered_messages);
        m.set("payload_vectors", trace.payload_vectors);
        m.set("order_violations", trace.order_violations());
        m.set("os", std::env::consts::OS);
        m.set("arch", std::env::consts::ARCH);
        if let Ok(n) = std::thread::available_parallelism() {
            m.set("cpus", n);
        }
        if let Some(model) = cpu_model() {
            m.set("cpu_model", model);
        }
        m
    }

    pub fn set(&mut self, key: &str, value: impl std::fmt::Display) {
        let value = value.to_string().replace('\n', " ");
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .filter_map(|l| l.split_once(" = "))
            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
            .collect();
        RunMeta { entries }
    }
}

fn cpu_model() -> Option<String> {
    let info = std::fs::read_to_string("/proc/cpuinfo").ok()?;
    info.lines()
        .find(|l| l.starts_with("model name"))
        .and_then(|l| l.split_once(':'))
        .map(|(_, v)| v.trim().to_string())
}
