//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any criterion fails.
//!
//! Criteria 6 and 7 need the LIBSVM files `ijcnn1`, `w8a`, `phishing` and
//! `a9a` in `$ASYNC_OCO_DATA_DIR` (default: `data/` at the workspace root),
//! or wherever `$ASYNC_OCO_MANIFEST` points.

// negated comparisons make NaN fail a check
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use async_oco::learners::{Aftdl, Learner};
use async_oco::losses::{surrogate_vector, HingeL2Loss, Loss, QuadraticLoss};
use async_oco::model::{ActivationPolicy, BallDomain, DelaySchedule, FeedbackMessage, Payload, RunConfig};
use async_oco::oracles::{ideal_sequence, offline_optimum, IdealKind};
use async_oco::prelude::*;
use async_oco::rng::SplitMix64;
use async_oco::sim::RunTrace;
use async_oco_experiments::spec::ExperimentSpec;
use async_oco_experiments::timing::Trend;
use async_oco_experiments::{DatasetChoice, Manifest, PreparedData, Preset};

type Outcome = Result<String, String>;

/// Number, name, runtime budget and check.
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---- independent helpers (no library code on these paths) ----

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn proj(v: &[f64], r: f64) -> Vec<f64> {
    let n = norm(v);
    if n <= r {
        v.to_vec()
    } else {
        v.iter().map(|x| x * (r / n)).collect()
    }
}

/// Projected gradient with step `1 / L` on an `L`-smooth objective, run to
/// a fixed point.
fn projected_gradient(grad: impl Fn(&[f64]) -> Vec<f64>, smooth: f64, dim: usize, r: f64) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    for _ in 0..200_000 {
        let g = grad(&x);
        let step: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - b / smooth).collect();
        let next = proj(&step, r);
        let moved = dist(&next, &x);
        x = next;
        if moved <= 1e-16 * (1.0 + norm(&x)) {
            break;
        }
    }
    x
}

fn anchor(l: &Loss) -> &[f64] {
    match l {
        Loss::Quadratic(q) => &q.anchor,
        Loss::HingeL2(_) => panic!("quadratic expected"),
    }
}

fn mean(vs: &[&[f64]]) -> Vec<f64> {
    let mut m = vec![0.0; vs[0].len()];
    for v in vs {
        for (a, b) in m.iter_mut().zip(*v) {
            *a += b;
        }
    }
    m.iter().map(|a| a / vs.len() as f64).collect()
}

/// Hinge losses whose kinks cross the ball: features of norm up to `scale`.
fn kinked_hinges(dim: usize, horizon: usize, lambda: f64, scale: f64, seed: u64) -> Vec<Loss> {
    let mut rng = SplitMix64::new(seed);
    let normal = rng.in_ball(dim, 1.0);
    (0..horizon)
        .map(|_| {
            let w = rng.in_ball(dim, scale);
            let side: f64 = w.iter().zip(&normal).map(|(a, b)| a * b).sum();
            let mut y = if side >= 0.0 { 1.0 } else { -1.0 };
            if rng.next_f64() < 0.1 {
                y = -y;
            }
            HingeL2Loss::new(w, y, lambda).into()
        })
        .collect()
}

fn simulate(
    domain: &BallDomain,
    agents: usize,
    d: usize,
    lambda: f64,
    seed: u64,
    alg: Algorithm,
    losses: &[Loss],
    g: f64,
) -> RunTrace {
    let config = RunConfig::builder(domain.clone())
        .agents(agents)
        .horizon(losses.len())
        .max_delay(d)
        .strong_convexity(lambda)
        .seed(seed)
        .build()
        .expect("valid config");
    Simulation::new(config, alg, losses.to_vec()).expect("simulation").with_gradient_bound(g).run().expect("run")
}

fn total(losses: &[Loss], x: &[f64]) -> f64 {
    losses.iter().map(|l| l.value(x).unwrap()).sum()
}

fn quadratic_g(losses: &[Loss], lambda: f64, r: f64) -> f64 {
    losses.iter().map(|l| lambda * (r + norm(anchor(l)))).fold(0.0, f64::max)
}

// ---- criteria ----

fn criterion_1() -> Outcome {
    let mut rng = SplitMix64::new(0xC1);
    let (mut worst5, mut worst4) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = 1 + rng.below(8) as usize;
        let lambda = 0.01 * 1000f64.powf(rng.next_f64());
        let r = 0.1 + rng.next_f64() * 9.9;
        let k = 1 + rng.below(40) as usize;
        // each z_s comes from a decision x_s and a gradient g_s
        let xs: Vec<Vec<f64>> = (0..k).map(|_| rng.in_ball(n, r)).collect();
        let gs: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                let scale = 1.0 + 10.0 * rng.next_f64();
                rng.in_ball(n, scale)
            })
            .collect();
        let zs: Vec<Vec<f64>> = xs.iter().zip(&gs).map(|(x, g)| surrogate_vector(g, x, lambda).unwrap()).collect();

        let mut learner = Aftdl::new(BallDomain::new(n, r).unwrap(), lambda);
        let mut order: Vec<usize> = (0..k).collect();
        for i in (1..k).rev() {
            order.swap(i, rng.below(i as u64 + 1) as usize);
        }
        for &i in &order {
            learner.receive(FeedbackMessage { origin: i + 1, payload: Payload::Surrogate(zs[i].clone()) }).unwrap();
        }
        let closed = learner.decide().unwrap();

        let kl = k as f64 * lambda;
        // sum_s <z_s, x> + (lambda/2)||x||^2
        let eq5 = projected_gradient(
            |x| (0..n).map(|j| zs.iter().map(|z| z[j]).sum::<f64>() + kl * x[j]).collect(),
            kl,
            n,
            r,
        );
        // sum_s <g_s, x> + (lambda/2)||x - x_s||^2
        let eq4 = projected_gradient(
            |x| (0..n).map(|j| (0..k).map(|s| gs[s][j] + lambda * (x[j] - xs[s][j])).sum()).collect(),
            kl,
            n,
            r,
        );
        worst5 = worst5.max(dist(&closed, &eq5));
        worst4 = worst4.max(dist(&closed, &eq4));
    }
    ensure!(worst5 <= 1e-8, "surrogate-objective argmin differs by {worst5:.3e} > 1e-8");
    ensure!(worst4 <= 1e-6, "linearized-objective argmin differs by {worst4:.3e} > 1e-6");
    Ok(format!("200 instances, max diff {worst5:.2e} (surrogate form), {worst4:.2e} (linearized form)"))
}

fn criterion_2() -> Outcome {
    let mut schedules = 0;
    let mut rounds_checked = 0usize;
    let domain = BallDomain::new(2, 1.0).unwrap();
    let losses = async_oco::synthetic::quadratic_sequence(2, 2000, 1.0, 1.0, 2);
    for (k, (m, d)) in [1usize, 2, 20].iter().flat_map(|&m| [1usize, 10, 100, 1000].map(move |d| (m, d))).enumerate() {
        for seed in [11u64, 12] {
            let activation = if (k + seed as usize).is_multiple_of(2) {
                ActivationPolicy::RoundRobin
            } else {
                ActivationPolicy::UniformRandom
            };
            let config = RunConfig::builder(domain.clone())
                .agents(m)
                .horizon(2000)
                .max_delay(d)
                .seed(seed * 1000 + k as u64)
                .activation(activation)
                .build()
                .unwrap();
            let sim = Simulation::new(config, Algorithm::Aftdl, losses.clone()).unwrap().record_feedback_sets(true);
            let schedule: DelaySchedule = sim.schedule().clone();
            let trace = sim.run().map_err(|e| e.to_string())?;
            for r in &trace.records {
                let t = r.round;
                let set = r.feedback_set.as_ref().expect("recorded");
                // what the delivery rule says agent r.agent holds at round t
                let expected: Vec<usize> =
                    (1..t).filter(|&s| s + schedule.delay(s, r.agent).unwrap() - 1 < t).collect();
                ensure!(*set == expected, "M={m} d={d} round {t}: held set differs from the delivery rule");
                ensure!(set.iter().all(|&s| s < t), "M={m} d={d} round {t}: future feedback held");
                let floor = t.saturating_sub(d);
                ensure!(
                    set.len() >= floor && (floor == 0 || set[floor - 1] == floor),
                    "M={m} d={d} round {t}: missing feedback older than d"
                );
                rounds_checked += 1;
            }
            schedules += 1;
        }
    }
    ensure!(schedules >= 20, "only {schedules} schedules");
    Ok(format!("{schedules} schedules, {rounds_checked} rounds, sandwich exact everywhere"))
}

fn criterion_3() -> Outcome {
    let (n, lambda, r, t_max) = (5, 1.0, 1.0, 2000);
    let mut worst_ratio = 0.0f64;
    for d in [1usize, 10, 50] {
        for seed in [1u64, 2, 3] {
            let losses = async_oco::synthetic::quadratic_sequence(n, t_max, lambda, 1.0, 100 * d as u64 + seed);
            let g = quadratic_g(&losses, lambda, r);
            let domain = BallDomain::new(n, r).unwrap();
            let trace = simulate(&domain, 2, d, lambda, seed, Algorithm::Ftdl, &losses, g);

            let anchors: Vec<&[f64]> = losses.iter().map(anchor).collect();
            let x_star = proj(&mean(&anchors), r);
            let regret: f64 = trace.records.iter().map(|rec| rec.loss).sum::<f64>() - total(&losses, &x_star);
            let bound = 2.0 * d as f64 * g * g * (1.0 + (t_max as f64).ln()) / lambda;
            ensure!(regret <= bound, "d={d} seed={seed}: regret {regret} > bound {bound}");
            worst_ratio = worst_ratio.max(regret / bound);

            let mut prefix = vec![0.0; n];
            for (i, rec) in trace.records.iter().enumerate() {
                let t = i + 1;
                for (p, a) in prefix.iter_mut().zip(anchors[i]) {
                    *p += a;
                }
                let ideal = proj(&prefix.iter().map(|p| p / t as f64).collect::<Vec<_>>(), r);
                let gap = dist(&rec.decision, &ideal);
                let allowed = 2.0 * d as f64 * g / (t as f64 * lambda);
                ensure!(gap <= allowed + 1e-12, "d={d} seed={seed} t={t}: distance {gap} > {allowed}");
            }
        }
    }
    Ok(format!("9 runs under the bound, largest regret/bound = {worst_ratio:.3e}; distances within 2dG/(t lambda)"))
}

fn criterion_4() -> Outcome {
    let (n, r, t_max) = (5, 1.0, 2000);
    let mut runs = 0;
    let mut worst_ratio = 0.0f64;
    let mut cases: Vec<(String, Vec<Loss>, f64)> = Vec::new();
    for d in [1usize, 10, 50] {
        for seed in [1u64, 2, 3] {
            let q = async_oco::synthetic::quadratic_sequence(n, t_max, 1.0, 1.0, 100 * d as u64 + seed);
            cases.push((format!("quadratic d={d} seed={seed}"), q, 1.0));
            for (lambda, scale) in [(1.0, 1.0), (0.1, 3.0)] {
                let h = kinked_hinges(n, t_max, lambda, scale, 7 * d as u64 + seed);
                cases.push((format!("hinge lambda={lambda} d={d} seed={seed}"), h, lambda));
            }
        }
    }
    for (k, (name, losses, lambda)) in cases.iter().enumerate() {
        let d: usize = name.split("d=").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
        let g = losses.iter().map(|l| l.gradient_bound(r)).fold(0.0, f64::max);
        let domain = BallDomain::new(n, r).unwrap();
        let trace = simulate(&domain, 2, d, *lambda, k as u64 + 1, Algorithm::Aftdl, losses, g);

        // surrogates rebuilt from the played decisions
        let zs: Vec<Vec<f64>> = trace
            .records
            .iter()
            .zip(losses)
            .map(|(rec, l)| {
                let grad = l.gradient(&rec.decision).unwrap();
                grad.iter().zip(&rec.decision).map(|(gi, xi)| gi - lambda * xi).collect()
            })
            .collect();
        let sur = |z: &[f64], x: &[f64]| -> f64 {
            z.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + 0.5 * lambda * norm(x).powi(2)
        };
        let mut s_total = vec![0.0; n];
        for z in &zs {
            for (a, b) in s_total.iter_mut().zip(z) {
                *a += b;
            }
        }
        let sur_star = proj(&s_total.iter().map(|s| -s / (t_max as f64 * lambda)).collect::<Vec<_>>(), r);
        let sur_regret: f64 =
            zs.iter().zip(&trace.records).map(|(z, rec)| sur(z, &rec.decision) - sur(z, &sur_star)).sum();
        let bound = 2.0 * d as f64 * (g + 2.0 * lambda * r).powi(2) * ((t_max as f64).ln() + 1.0) / lambda;
        ensure!(sur_regret <= bound, "{name}: surrogate regret {sur_regret} > bound {bound}");

        let true_star = offline_optimum(losses, &domain, 1e-10).map_err(|e| e.to_string())?;
        let true_regret: f64 = trace.records.iter().map(|rec| rec.loss).sum::<f64>() - true_star.value;
        ensure!(true_regret <= bound, "{name}: regret {true_regret} > bound {bound}");
        worst_ratio = worst_ratio.max(sur_regret.max(true_regret) / bound);

        let mut prefix = vec![0.0; n];
        for (i, rec) in trace.records.iter().enumerate() {
            let t = i + 1;
            for (a, b) in prefix.iter_mut().zip(&zs[i]) {
                *a += b;
            }
            let leader = proj(&prefix.iter().map(|s| -s / (t as f64 * lambda)).collect::<Vec<_>>(), r);
            let gap = dist(&rec.decision, &leader);
            let allowed = 2.0 * d as f64 * (g + 2.0 * lambda * r) / (t as f64 * lambda);
            ensure!(gap <= allowed + 1e-12, "{name} t={t}: distance {gap} > {allowed}");
        }
        runs += 1;
    }
    Ok(format!("{runs} runs (quadratic + hinge) under the bound, largest regret/bound = {worst_ratio:.3e}"))
}

fn criterion_5() -> Outcome {
    let (n, r, t_max) = (3, 1.0, 500);
    let domain = BallDomain::new(n, r).unwrap();

    // FTDL against follow-the-leader on quadratics: the leader is the
    // projected mean anchor
    let lambda = 0.7;
    let quads = async_oco::synthetic::quadratic_sequence(n, t_max, lambda, 2.0, 55);
    let g = quadratic_g(&quads, lambda, r);
    let trace = simulate(&domain, 1, 1, lambda, 5, Algorithm::Ftdl, &quads, g);
    let mut worst_ftl = 0.0f64;
    for (i, rec) in trace.records.iter().enumerate() {
        let expected =
            if i == 0 { vec![0.0; n] } else { proj(&mean(&quads[..i].iter().map(anchor).collect::<Vec<_>>()), r) };
        worst_ftl = worst_ftl.max(dist(&rec.decision, &expected));
    }
    ensure!(worst_ftl <= 1e-10, "FTDL deviates from FTL by {worst_ftl:.3e}");

    // A-FTDL against FTAL, a recursion on its own trajectory
    let mut worst_ftal = 0.0f64;
    for (losses, lambda) in [(kinked_hinges(n, t_max, 0.1, 3.0, 9), 0.1), (quads.clone(), lambda)] {
        let g = losses.iter().map(|l| l.gradient_bound(r)).fold(0.0, f64::max);
        let trace = simulate(&domain, 1, 1, lambda, 5, Algorithm::Aftdl, &losses, g);
        let mut acc = vec![0.0; n];
        let mut x = vec![0.0; n];
        for (i, (rec, l)) in trace.records.iter().zip(&losses).enumerate() {
            worst_ftal = worst_ftal.max(dist(&rec.decision, &x));
            let grad = l.gradient(&x).unwrap();
            for j in 0..n {
                acc[j] += x[j] - grad[j] / lambda;
            }
            x = proj(&acc.iter().map(|a| a / (i + 1) as f64).collect::<Vec<_>>(), r);
        }
    }
    ensure!(worst_ftal <= 1e-10, "A-FTDL deviates from FTAL by {worst_ftal:.3e}");
    Ok(format!("T={t_max}: FTDL vs FTL {worst_ftl:.1e}, A-FTDL vs FTAL {worst_ftal:.1e}"))
}

fn data_manifest() -> (Manifest, PathBuf) {
    let dir = std::env::var_os("ASYNC_OCO_DATA_DIR").map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).ancestors().nth(2).expect("workspace root").join("data")
    });
    let mut m = Manifest::defaults(&dir);
    if let Some(path) = std::env::var_os("ASYNC_OCO_MANIFEST") {
        m = m.merge(Manifest::load(&PathBuf::from(path)).expect("readable manifest"));
    }
    (m, dir)
}

struct DatasetRun {
    final_loss: f64,
    accuracy: f64,
}

fn dataset_run(
    manifest: &Manifest,
    name: &str,
    preset: Preset,
    seed: u64,
    alg: Algorithm,
) -> Result<DatasetRun, String> {
    let spec = ExperimentSpec { seeds: vec![seed], ..preset.spec() };
    let data =
        PreparedData::prepare(&DatasetChoice::Named(name.into()), &spec, seed, manifest).map_err(|e| e.to_string())?;
    let domain = BallDomain::new(data.dim, spec.radius).unwrap();
    let trace =
        simulate(&domain, spec.agents, spec.max_delay, spec.lambda, seed, alg, &data.losses, data.gradient_bound);
    let x = trace.final_decision().unwrap();
    Ok(DatasetRun {
        final_loss: trace.total_loss(),
        accuracy: test_accuracy(x, &data.test).map_err(|e| e.to_string())?,
    })
}

fn require_datasets(names: &[&str]) -> Result<Manifest, String> {
    let (manifest, dir) = data_manifest();
    let missing: Vec<&str> = names.iter().copied().filter(|n| !manifest.is_available(n)).collect();
    ensure!(
        missing.is_empty(),
        "datasets missing ({}) under {}; place the LIBSVM files there or set ASYNC_OCO_DATA_DIR",
        missing.join(", "),
        dir.display()
    );
    Ok(manifest)
}

fn criterion_6() -> Outcome {
    let names = ["ijcnn1", "w8a", "phishing", "a9a"];
    let manifest = require_datasets(&names)?;
    let mut summary = Vec::new();
    for preset in [Preset::Paper2Agent, Preset::Paper20Agent] {
        let mut wins = 0;
        for name in names {
            let a = dataset_run(&manifest, name, preset, 1, Algorithm::Aftdl)?;
            let b = dataset_run(&manifest, name, preset, 1, Algorithm::Dda)?;
            if a.final_loss < b.final_loss {
                wins += 1;
            }
            summary.push(format!("{}/{name}: {:.1} vs {:.1}", preset.name(), a.final_loss, b.final_loss));
        }
        ensure!(wins >= 3, "{}: A-FTDL below DDA on only {wins}/4 datasets [{}]", preset.name(), summary.join("; "));
    }
    Ok(summary.join("; "))
}

fn criterion_7() -> Outcome {
    let manifest = require_datasets(&["a9a", "w8a"])?;
    let mut summary = Vec::new();
    for preset in [Preset::Paper2Agent, Preset::Paper20Agent] {
        for name in ["a9a", "w8a"] {
            let (mut acc_a, mut acc_d) = (0.0, 0.0);
            for seed in [1u64, 2, 3] {
                let a = dataset_run(&manifest, name, preset, seed, Algorithm::Aftdl)?;
                let d = dataset_run(&manifest, name, preset, seed, Algorithm::Dda)?;
                if name == "a9a" {
                    let pct = 100.0 * a.accuracy;
                    ensure!(
                        (pct - 83.70).abs() <= 3.0,
                        "{} a9a seed {seed}: A-FTDL accuracy {pct:.2}% outside 83.70 +- 3",
                        preset.name()
                    );
                }
                acc_a += a.accuracy / 3.0;
                acc_d += d.accuracy / 3.0;
            }
            ensure!(
                acc_a >= acc_d,
                "{} {name}: A-FTDL {:.2}% below DDA {:.2}%",
                preset.name(),
                100.0 * acc_a,
                100.0 * acc_d
            );
            summary.push(format!("{}/{name}: {:.2}% vs {:.2}%", preset.name(), 100.0 * acc_a, 100.0 * acc_d));
        }
    }
    Ok(summary.join("; "))
}

fn criterion_8() -> Outcome {
    let (n, t_max) = (4, 2000);
    let mut worst_ratio = 0.0f64;
    let mut runs = 0;
    for d in [1usize, 10] {
        for seed in [1u64, 2] {
            let lambda = 0.5;
            let quads = async_oco::synthetic::quadratic_sequence(n, t_max, lambda, 3.0, 31 * d as u64 + seed);
            let hinges = kinked_hinges(n, t_max, 0.2, 2.0, 17 * d as u64 + seed);
            for (losses, lambda) in [(quads, lambda), (hinges, 0.2)] {
                // Lipschitz constant at the origin
                let g = losses.iter().map(|l| norm(&l.gradient(&vec![0.0; n]).unwrap())).fold(0.0, f64::max);
                let wrapped = unconstrained_wrap(n, g, lambda).map_err(|e| e.to_string())?;
                let trace = simulate(&wrapped, 2, d, lambda, seed, Algorithm::Aftdl, &losses, g);
                let star = match &losses[0] {
                    Loss::Quadratic(_) => mean(&losses.iter().map(anchor).collect::<Vec<_>>()),
                    Loss::HingeL2(_) => offline_optimum(&losses, &wrapped, 1e-10).map_err(|e| e.to_string())?.x,
                };
                ensure!(norm(&star) < wrapped.radius(), "optimum outside the wrapped ball");
                let regret = trace.total_loss() - total(&losses, &star);
                let bound = 50.0 * d as f64 * g * g * ((t_max as f64).ln() + 1.0) / lambda;
                ensure!(regret <= bound, "d={d} seed={seed}: regret {regret} > bound {bound}");
                worst_ratio = worst_ratio.max(regret / bound);
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} unconstrained runs under 50dG^2(ln T+1)/lambda, largest regret/bound = {worst_ratio:.3e}"))
}

fn criterion_9() -> Outcome {
    let mut rng = SplitMix64::new(0xC9);
    let random_loss = |rng: &mut SplitMix64, n: usize| -> Loss {
        let lambda = 0.01 + 5.0 * rng.next_f64();
        if rng.next_f64() < 0.5 {
            let y = if rng.next_f64() < 0.5 { 1.0 } else { -1.0 };
            HingeL2Loss::new(rng.in_ball(n, 3.0), y, lambda).into()
        } else {
            QuadraticLoss { anchor: rng.in_ball(n, 3.0), lambda, offset: rng.next_f64() }.into()
        }
    };

    let (mut worst_fd, mut checked) = (0.0f64, 0);
    while checked < 2000 {
        let n = 1 + rng.below(6) as usize;
        let l = random_loss(&mut rng, n);
        let x = rng.in_ball(n, 2.0);
        if let Loss::HingeL2(h) = &l {
            if h.margin_slack(&x).abs() < 1e-3 {
                continue;
            }
        }
        let g = l.gradient(&x).unwrap();
        let h = 1e-6;
        for j in 0..n {
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[j] += h;
            xm[j] -= h;
            let fd = (l.value(&xp).unwrap() - l.value(&xm).unwrap()) / (2.0 * h);
            let rel = (fd - g[j]).abs() / g[j].abs().max(1.0);
            worst_fd = worst_fd.max(rel);
        }
        checked += 1;
    }
    ensure!(worst_fd <= 1e-5, "finite-difference relative error {worst_fd:.3e}");

    let mut worst_sc = f64::INFINITY;
    for _ in 0..10_000 {
        let n = 1 + rng.below(6) as usize;
        let l = random_loss(&mut rng, n);
        let (x, y) = (rng.in_ball(n, 2.0), rng.in_ball(n, 2.0));
        let g = l.gradient(&x).unwrap();
        let lin: f64 = g.iter().zip(y.iter().zip(&x)).map(|(gi, (yi, xi))| gi * (yi - xi)).sum();
        let slack = l.value(&y).unwrap() - l.value(&x).unwrap() - lin - 0.5 * l.lambda() * dist(&x, &y).powi(2);
        worst_sc = worst_sc.min(slack);
    }
    ensure!(worst_sc >= -1e-9, "strong convexity violated by {worst_sc:.3e}");

    let mut worst_ideal = f64::NEG_INFINITY;
    for _ in 0..50 {
        let n = 1 + rng.below(4) as usize;
        let k = 5 + rng.below(30) as usize;
        let losses: Vec<Loss> = (0..k).map(|_| random_loss(&mut rng, n)).collect();
        let domain = BallDomain::new(n, 0.5 + rng.next_f64() * 2.0).unwrap();
        let ideal = ideal_sequence(&losses, &domain, 1e-11, IdealKind::TrueLoss).map_err(|e| e.to_string())?;
        let opt = offline_optimum(&losses, &domain, 1e-11).map_err(|e| e.to_string())?;
        let played: f64 = losses.iter().zip(&ideal.decisions).map(|(l, x)| l.value(x).unwrap()).sum();
        worst_ideal = worst_ideal.max(played - opt.value);
    }
    ensure!(worst_ideal <= 1e-7, "ideal-leader regret {worst_ideal:.3e} > 1e-7");
    Ok(format!(
        "fd rel err {worst_fd:.1e} over {checked} points; min strong-convexity slack {worst_sc:.1e}; max ideal regret {worst_ideal:.1e}"
    ))
}

fn criterion_10() -> Outcome {
    let (n, lambda, t_max) = (20, 0.1, 2000);
    let losses = kinked_hinges(n, t_max, lambda, 3.0, 10);
    let domain = BallDomain::new(n, 1.0).unwrap();
    let g = losses.iter().map(|l| l.gradient_bound(1.0)).fold(0.0, f64::max);
    let times = |alg| -> Vec<Duration> {
        simulate(&domain, 2, 10, lambda, 3, alg, &losses, g).records.iter().map(|r| r.elapsed).collect()
    };
    // warm caches before measuring
    let _ = times(Algorithm::Aftdl);
    let aftdl = Trend::of(&times(Algorithm::Aftdl));
    let ftdl = Trend::of(&times(Algorithm::Ftdl));
    let fmt = |t: &Trend| t.quarter_medians.map(|q| format!("{:.2e}", q)).join("/");
    ensure!((0.5..=2.0).contains(&aftdl.growth()), "A-FTDL per-round time not flat: quarter medians {} s", fmt(&aftdl));
    ensure!(ftdl.is_increasing(2.0), "FTDL per-round time not increasing: quarter medians {} s", fmt(&ftdl));
    Ok(format!(
        "A-FTDL quarter medians {} s (x{:.2}); FTDL {} s (x{:.1})",
        fmt(&aftdl),
        aftdl.growth(),
        fmt(&ftdl),
        ftdl.growth()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "closed-form A-FTDL decision", Duration::from_secs(10), criterion_1),
        (2, "feedback-set sandwich", Duration::from_secs(30), criterion_2),
        (3, "FTDL logarithmic regret bound", Duration::from_secs(120), criterion_3),
        (4, "A-FTDL logarithmic regret bound", Duration::from_secs(120), criterion_4),
        (5, "specialization to FTL / FTAL", Duration::from_secs(30), criterion_5),
        (6, "cumulative loss A-FTDL below DDA", Duration::from_secs(900), criterion_6),
        (7, "test accuracy", Duration::from_secs(900), criterion_7),
        (8, "unconstrained extension bound", Duration::from_secs(60), criterion_8),
        (9, "numerical hygiene", Duration::from_secs(60), criterion_9),
        (10, "per-round time asymptotics", Duration::from_secs(120), criterion_10),
    ];
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > budget => Err(format!("took {took:.1?}, budget {budget:?} ({detail})")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name} [{took:.2?}]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name} [{took:.2?}]: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
