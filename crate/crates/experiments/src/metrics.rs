use std::fmt::Write as _;

use crate::run::RunOutput;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub dataset: String,
    pub algorithm: String,
    pub scenario: String,
    pub seeds: usize,
    pub final_loss: f64,
    pub regret: f64,
    pub accuracy: Option<f64>,
    pub per_round_sec: f64,
}

/// One row per (dataset, algorithm, scenario), averaged over seeds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsTable {
    pub rows: Vec<MetricsRow>,
}

impl MetricsTable {
    pub fn from_runs(runs: &[RunOutput]) -> Self {
        let mut rows: Vec<MetricsRow> = Vec::new();
        let mut acc_counts: Vec<usize> = Vec::new();
        for run in runs {
            let algo = run.algorithm.to_string();
            let pos = rows
                .iter()
                .position(|r| r.dataset == run.dataset.name() && r.algorithm == algo && r.scenario == run.scenario);
            let i = pos.unwrap_or_else(|| {
                rows.push(MetricsRow {
                    dataset: run.dataset.to_string(),
                    algorithm: algo,
                    scenario: run.scenario.clone(),
                    seeds: 0,
                    final_loss: 0.0,
                    regret: 0.0,
                    accuracy: None,
                    per_round_sec: 0.0,
                });
                acc_counts.push(0);
                rows.len() - 1
            });
            let row = &mut rows[i];
            row.seeds += 1;
            row.final_loss += run.final_loss();
            row.regret += run.regret.final_regret();
            row.per_round_sec += run.per_round_seconds();
            if let Some(a) = run.accuracy {
                row.accuracy = Some(row.accuracy.unwrap_or(0.0) + a);
                acc_counts[i] += 1;
            }
        }
        for (row, &n) in rows.iter_mut().zip(&acc_counts) {
            let k = row.seeds as f64;
            row.final_loss /= k;
            row.regret /= k;
            row.per_round_sec /= k;
            row.accuracy = row.accuracy.map(|a| a / n as f64);
        }
        MetricsTable { rows }
    }

    pub fn get(&self, dataset: &str, algorithm: &str, scenario: &str) -> Option<&MetricsRow> {
        self.rows.iter().find(|r| r.dataset == dataset && r.algorithm == algorithm && r.scenario == scenario)
    }

    /// `dataset,algo,scenario,final_loss,regret,acc,per_round_sec`; `acc`
    /// is a fraction and left empty when there is no test set.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dataset,algo,scenario,final_loss,regret,acc,per_round_sec\n");
        for r in &self.rows {
            let acc = r.accuracy.map(|a| a.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.dataset, r.algorithm, r.scenario, r.final_loss, r.regret, acc, r.per_round_sec
            );
        }
        out
    }

    /// Fixed-width table for the terminal.
    pub fn render(&self) -> String {
        let mut out = format!(
            "{:<16} {:<6} {:<16} {:>14} {:>14} {:>8} {:>12}\n",
            "dataset", "algo", "scenario", "final_loss", "regret", "acc%", "sec/round"
        );
        for r in &self.rows {
            let acc = r.accuracy.map(|a| format!("{:.2}", 100.0 * a)).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "{:<16} {:<6} {:<16} {:>14.4} {:>14.4} {:>8} {:>12.3e}",
                r.dataset, r.algorithm, r.scenario, r.final_loss, r.regret, acc, r.per_round_sec
            );
        }
        out
    }
}
