//! Static figures. Every SVG is written next to a CSV holding the plotted
//! numbers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use async_oco::learners::Algorithm;
use plotters::prelude::*;

use crate::error::{ExperimentError, Result};
use crate::run::{write_file, RunOutput};

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    /// Value at rounds `1..=len`.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    /// File stem for the `.svg` and `.csv`.
    pub name: String,
    pub title: String,
    pub y_label: String,
    pub curves: Vec<Curve>,
}

impl Figure {
    /// `round,<label>,...`; curves shorter than the longest leave blanks.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("round");
        for c in &self.curves {
            out.push(',');
            out.push_str(&c.label);
        }
        out.push('\n');
        let len = self.curves.iter().map(|c| c.values.len()).max().unwrap_or(0);
        for t in 0..len {
            let _ = write!(out, "{}", t + 1);
            for c in &self.curves {
                out.push(',');
                if let Some(v) = c.values.get(t) {
                    let _ = write!(out, "{v}");
                }
            }
            out.push('\n');
        }
        out
    }

    /// Writes `<dir>/<name>.csv` and `<dir>/<name>.svg`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        if self.curves.is_empty() || self.curves.iter().all(|c| c.values.is_empty()) {
            return Err(ExperimentError::NothingToPlot);
        }
        std::fs::create_dir_all(dir).map_err(ExperimentError::io(dir))?;
        let csv = dir.join(format!("{}.csv", self.name));
        let svg = dir.join(format!("{}.svg", self.name));
        write_file(&csv, &self.to_csv())?;
        self.draw(&svg).map_err(|e| ExperimentError::Plot { path: svg.clone(), message: e.to_string() })?;
        Ok((csv, svg))
    }

    fn draw(&self, path: &Path) -> std::result::Result<(), Box<dyn std::error::Error>> {
        let len = self.curves.iter().map(|c| c.values.len()).max().unwrap_or(1);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in self.curves.iter().flat_map(|c| &c.values).filter(|v| v.is_finite()) {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
        if hi <= lo {
            hi = lo + 1.0;
        }
        let pad = 0.05 * (hi - lo);

        let root = SVGBackend::new(path, (900, 600)).into_drawing_area();
        root.fill(&WHITE)?;
        let mut chart = ChartBuilder::on(&root)
            .caption(&self.title, ("sans-serif", 22))
            .margin(15)
            .x_label_area_size(45)
            .y_label_area_size(80)
            .build_cartesian_2d(1f64..len as f64, (lo - pad)..(hi + pad))?;
        chart.configure_mesh().x_desc("round").y_desc(self.y_label.as_str()).draw()?;
        for (i, c) in self.curves.iter().enumerate() {
            let color = Palette99::pick(i).to_rgba();
            let points = c.values.iter().enumerate().map(|(t, v)| ((t + 1) as f64, *v));
            chart
                .draw_series(LineSeries::new(points, color.stroke_width(2)))?
                .label(c.label.as_str())
                .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2)));
        }
        chart.configure_series_labels().background_style(WHITE.mix(0.8)).border_style(BLACK).draw()?;
        root.present()?;
        Ok(())
    }
}

/// One cumulative-loss figure per (dataset, scenario) overlaying the
/// algorithms (averaged over seeds), and one regret-versus-bound figure per
/// synthetic (scenario, algorithm) for the constrained learners.
pub fn figures(runs: &[RunOutput]) -> Vec<Figure> {
    let mut groups: BTreeMap<(String, String), Vec<&RunOutput>> = BTreeMap::new();
    for run in runs {
        groups.entry((run.dataset.to_string(), run.scenario.clone())).or_default().push(run);
    }
    let mut figs = Vec::new();
    for ((dataset, scenario), group) in &groups {
        let mut by_algo: BTreeMap<String, Vec<&RunOutput>> = BTreeMap::new();
        for run in group {
            by_algo.entry(run.algorithm.to_string()).or_default().push(run);
        }
        let curves = by_algo
            .iter()
            .map(|(algo, rs)| Curve { label: algo.clone(), values: mean_curve(rs, |r| r.trace.cumulative_losses()) });
        figs.push(Figure {
            name: format!("{dataset}_{scenario}_cumulative_loss"),
            title: format!("{dataset} ({scenario}): cumulative loss"),
            y_label: "cumulative loss".into(),
            curves: curves.collect(),
        });

        if group[0].dataset.is_synthetic() {
            for (algo, rs) in &by_algo {
                let bound = match rs[0].algorithm {
                    Algorithm::Ftdl => ("bound_thm1", mean_curve(rs, |r| r.regret.bound_ftdl.clone())),
                    Algorithm::Aftdl => ("bound_thm2", mean_curve(rs, |r| r.regret.bound_aftdl.clone())),
                    Algorithm::Dda => continue,
                };
                figs.push(Figure {
                    name: format!("{dataset}_{scenario}_{algo}_regret"),
                    title: format!("{dataset} ({scenario}): {algo} regret against its bound"),
                    y_label: "regret".into(),
                    curves: vec![
                        Curve { label: "regret".into(), values: mean_curve(rs, |r| r.regret.regret.clone()) },
                        Curve { label: bound.0.into(), values: bound.1 },
                    ],
                });
            }
        }
    }
    figs
}

fn mean_curve(runs: &[&RunOutput], f: impl Fn(&RunOutput) -> Vec<f64>) -> Vec<f64> {
    let mut acc: Vec<f64> = Vec::new();
    for run in runs {
        let v = f(run);
        if acc.is_empty() {
            acc = vec![0.0; v.len()];
        }
        for (a, x) in acc.iter_mut().zip(v) {
            *a += x;
        }
    }
    let k = runs.len().max(1) as f64;
    acc.iter().map(|a| a / k).collect()
}

/// Writes every figure of [`figures`] into `dir` and returns the SVG paths.
pub fn emit_plots(runs: &[RunOutput], dir: &Path) -> Result<Vec<PathBuf>> {
    if runs.is_empty() {
        return Err(ExperimentError::NothingToPlot);
    }
    figures(runs).iter().map(|f| f.write(dir).map(|(_, svg)| svg)).collect()
}
