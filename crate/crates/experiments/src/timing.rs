use std::fmt::Write as _;
use std::time::Duration;

use crate::run::RunOutput;

/// Per-round wall time of one run, summarized by quarter of the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub id: String,
    pub algorithm: String,
    pub mean_sec: f64,
    pub quarter_medians: [f64; 4],
    pub slope: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimingReport {
    pub rows: Vec<TimingRow>,
}

impl TimingReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("run,algo,mean_sec,q1_median,q2_median,q3_median,q4_median,slope_sec_per_round\n");
        for r in &self.rows {
            let q = r.quarter_medians;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.id, r.algorithm, r.mean_sec, q[0], q[1], q[2], q[3], r.slope
            );
        }
        out
    }
}

pub fn timing_report(runs: &[RunOutput]) -> TimingReport {
    let rows = runs
        .iter()
        .map(|run| {
            let times: Vec<Duration> = run.trace.records.iter().map(|r| r.elapsed).collect();
            let trend = Trend::of(&times);
            TimingRow {
                id: run.id(),
                algorithm: run.algorithm.to_string(),
                mean_sec: run.per_round_seconds(),
                quarter_medians: trend.quarter_medians,
                slope: trend.slope,
            }
        })
        .collect();
    TimingReport { rows }
}

/// Robust summary of a per-round time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trend {
    /// Median seconds in each quarter of the rounds.
    pub quarter_medians: [f64; 4],
    /// Least-squares slope of seconds against round index.
    pub slope: f64,
}

impl Trend {
    pub fn of(times: &[Duration]) -> Self {
        let secs: Vec<f64> = times.iter().map(Duration::as_secs_f64).collect();
        let n = secs.len();
        let mut quarter_medians = [0.0; 4];
        for (q, slot) in quarter_medians.iter_mut().enumerate() {
            let part = &secs[q * n / 4..(q + 1) * n / 4];
            *slot = median(part);
        }
        let mean_t = (n as f64 - 1.0) / 2.0;
        let mean_s = secs.iter().sum::<f64>() / n.max(1) as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for (t, s) in secs.iter().enumerate() {
            num += (t as f64 - mean_t) * (s - mean_s);
            den += (t as f64 - mean_t).powi(2);
        }
        Trend { quarter_medians, slope: if den > 0.0 { num / den } else { 0.0 } }
    }

    /// Quarter medians never decrease and the last exceeds the first by
    /// `factor`.
    pub fn is_increasing(&self, factor: f64) -> bool {
        let q = self.quarter_medians;
        q.windows(2).all(|w| w[1] >= w[0]) && q[3] >= factor * q[0]
    }

    /// Ratio of the last to the first quarter median.
    pub fn growth(&self) -> f64 {
        self.quarter_medians[3] / self.quarter_medians[0].max(f64::MIN_POSITIVE)
    }
}

fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trend_of_linear_series() {
        let times: Vec<Duration> = (0..400).map(|t| Duration::from_nanos(1000 + 10 * t)).collect();
        let tr = Trend::of(&times);
        assert!((tr.slope - 1e-8).abs() < 1e-15);
        assert!(tr.is_increasing(2.0));
        let flat = Trend::of(&vec![Duration::from_micros(3); 100]);
        assert_eq!(flat.slope, 0.0);
        assert_eq!(flat.growth(), 1.0);
        assert!(!flat.is_increasing(1.5));
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(&[]), 0.0);
    }
}
