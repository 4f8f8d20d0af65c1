//! LIBSVM ingestion, seeded sampling and gradient budgets.
//!
//! Grammar, one example per line:
//!
//! ```text
//! line    := label (SPACE index ":" value)* [SPACE] ["#" comment]
//! label   := "+1" | "1" | "-1" | "0"        (0 is mapped to -1)
//! index   := positive integer, strictly increasing along the line
//! value   := decimal floating point
//! ```
//!
//! Blank lines are skipped. The dimension is the largest index seen.

use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::losses::{HingeL2Loss, LipschitzBudget, Loss};
use crate::rng::{SplitMix64, Stream};

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    /// `(index, value)` pairs, 1-based indices, strictly increasing.
    pub features: Vec<(usize, f64)>,
    /// `+1.0` or `-1.0`.
    pub label: f64,
}

impl Example {
    pub fn dense(&self, dim: usize) -> Vec<f64> {
        let mut v = vec![0.0; dim];
        for &(i, x) in &self.features {
            if i <= dim {
                v[i - 1] = x;
            }
        }
        v
    }

    pub fn norm(&self) -> f64 {
        self.features.iter().map(|(_, x)| x * x).sum::<f64>().sqrt()
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.features.iter().filter(|(i, _)| *i <= x.len()).map(|&(i, v)| v * x[i - 1]).sum()
    }

    pub fn to_hinge(&self, dim: usize, lambda: f64) -> Loss {
        HingeL2Loss::new(self.dense(dim), self.label, lambda).into()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LibsvmData {
    pub examples: Vec<Example>,
    pub dim: usize,
}

fn parse_label(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok.parse().map_err(|_| Error::Parse { line, message: format!("invalid label {tok:?}") })?;
    if v == 1.0 {
        Ok(1.0)
    } else if v == -1.0 || v == 0.0 {
        Ok(-1.0)
    } else {
        Err(Error::Parse { line, message: format!("label {tok:?} is not binary (expected +1, -1 or 0)") })
    }
}

pub fn parse_line(text: &str, line: usize) -> Result<Option<Example>> {
    let body = text.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(None);
    }
    let mut toks = body.split_whitespace();
    let label = parse_label(toks.next().unwrap_or_default(), line)?;
    let mut features = Vec::new();
    let mut last = 0usize;
    for tok in toks {
        let (idx, val) = tok
            .split_once(':')
            .ok_or_else(|| Error::Parse { line, message: format!("expected index:value, got {tok:?}") })?;
        let idx: usize =
            idx.parse().map_err(|_| Error::Parse { line, message: format!("invalid feature index {idx:?}") })?;
        if idx == 0 {
            return Err(Error::Parse { line, message: "feature indices are 1-based".into() });
        }
        if idx <= last {
            return Err(Error::Parse { line, message: format!("index {idx} does not increase (previous {last})") });
        }
        let val: f64 =
            val.parse().map_err(|_| Error::Parse { line, message: format!("invalid feature value {val:?}") })?;
        if !val.is_finite() {
            return Err(Error::Parse { line, message: format!("non-finite feature value {val}") });
        }
        features.push((idx, val));
        last = idx;
    }
    Ok(Some(Example { features, label }))
}

pub fn parse_libsvm<R: BufRead>(reader: R) -> Result<LibsvmData> {
    let mut examples = Vec::new();
    let mut dim = 0;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some(ex) = parse_line(&line, i + 1)? {
            if let Some(&(last, _)) = ex.features.last() {
                dim = dim.max(last);
            }
            examples.push(ex);
        }
    }
    if examples.is_empty() {
        return Err(Error::Empty("LIBSVM input has no examples"));
    }
    Ok(LibsvmData { examples, dim })
}

/// Re-emit in LIBSVM form. Values use the shortest representation that
/// parses back to the same `f64`.
pub fn to_libsvm(examples: &[Example]) -> String {
    let mut out = String::new();
    for ex in examples {
        out.push_str(if ex.label > 0.0 { "+1" } else { "-1" });
        for &(i, v) in &ex.features {
            let _ = write!(out, " {i}:{v}");
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentDataset {
    /// Round `t` uses `train[t - 1]`.
    pub train: Vec<Example>,
    pub test: Vec<Example>,
    pub dim: usize,
    /// Indices into the source data, in sampled order (train then test).
    pub sampled: Vec<usize>,
}

impl ExperimentDataset {
    pub fn train_losses(&self, lambda: f64) -> Vec<Loss> {
        self.train.iter().map(|e| e.to_hinge(self.dim, lambda)).collect()
    }

    /// Largest feature norm over the sampled train and test examples.
    pub fn w_max(&self) -> f64 {
        self.train.iter().chain(&self.test).map(Example::norm).fold(0.0, f64::max)
    }
}

/// Uniform sample of `total` distinct examples (seeded), split in sampled
/// order into `train` training examples and `total - train` test examples.
pub fn sample_and_split(data: &LibsvmData, total: usize, train: usize, seed: u64) -> Result<ExperimentDataset> {
    if train > total {
        return Err(Error::InvalidConfig(format!("train size {train} exceeds sample size {total}")));
    }
    if data.examples.len() < total {
        return Err(Error::InsufficientExamples { needed: total, available: data.examples.len() });
    }
    let mut rng = SplitMix64::stream(seed, Stream::Sampling);
    let sampled = rng.sample_indices(data.examples.len(), total);
    let pick = |r: &[usize]| r.iter().map(|&i| data.examples[i].clone()).collect();
    Ok(ExperimentDataset { train: pick(&sampled[..train]), test: pick(&sampled[train..]), dim: data.dim, sampled })
}

/// `(w_max, G)` with `G = lambda R + w_max`.
pub fn compute_budget(dataset: &ExperimentDataset, lambda: f64, radius: f64) -> (f64, LipschitzBudget) {
    let w_max = dataset.w_max();
    (w_max, LipschitzBudget { g: lambda * radius + w_max })
}
