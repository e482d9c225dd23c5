//! Monte Carlo ensembles of independent runs.

use rand::Rng;
use rayon::prelude::*;

use super::config::SimulationConfig;
use super::network::SpilloverNetwork;
use super::sim::{check_inputs, drive};
use crate::error::{Error, Result};
use crate::seeds;

/// Ensemble size used for final per-country reports.
pub const DEFAULT_RUNS: usize = 1000;

/// Aggregates of a single run; traces are not kept in ensembles.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub seed: u64,
    pub steps: usize,
    pub converged: bool,
    /// Inter-temporal mean allocation per issue over the whole run.
    pub mean_allocation: Vec<f64>,
    /// Mean contribution per issue over its own convergence horizon.
    pub mean_contribution: Vec<f64>,
    /// `(1 / NB) Σ_i Σ_t (P − C)`.
    pub corruption: f64,
    /// `(1/N) Σ_i (1/ℓ_i) Σ_t I_{i,t}`.
    pub performance: f64,
    pub ell: Vec<Option<usize>>,
}

struct Accumulator {
    n: usize,
    alloc_sum: Vec<f64>,
    diversion: f64,
    ind_sum: Vec<f64>,
    contrib_sum: Vec<f64>,
    ell: Vec<Option<usize>>,
    frozen_ind: Vec<Option<f64>>,
    frozen_contrib: Vec<Option<f64>>,
}

impl Accumulator {
    fn new(config: &SimulationConfig) -> Self {
        let n = config.n();
        let mut acc = Self {
            n,
            alloc_sum: vec![0.0; n],
            diversion: 0.0,
            ind_sum: vec![0.0; n],
            contrib_sum: vec![0.0; n],
            ell: vec![None; n],
            frozen_ind: vec![None; n],
            frozen_contrib: vec![None; n],
        };
        for i in 0..n {
            if (config.targets[i] - config.initial_indicators[i]).abs() < config.target_tol {
                acc.ell[i] = Some(0);
                acc.frozen_ind[i] = Some(config.initial_indicators[i]);
            }
        }
        acc
    }

    fn observe(&mut self, config: &SimulationConfig, t: usize, indicators: &[f64], c0: &[f64], p: &[f64], c: &[f64]) {
        for i in 0..self.n {
            self.alloc_sum[i] += p[i];
            self.diversion += p[i] - c[i];
            if t == 1 && self.ell[i] == Some(0) {
                self.frozen_contrib[i] = Some(c0[i]);
            }
            if self.ell[i].is_none() {
                self.ind_sum[i] += indicators[i];
                self.contrib_sum[i] += c[i];
                if (config.targets[i] - indicators[i]).abs() < config.target_tol {
                    self.ell[i] = Some(t);
                    self.frozen_ind[i] = Some(self.ind_sum[i] / t as f64);
                    self.frozen_contrib[i] = Some(self.contrib_sum[i] / t as f64);
                }
            }
        }
    }

    fn finish(self, config: &SimulationConfig, seed: u64, steps: usize, converged: bool) -> RunSummary {
        let n = self.n as f64;
        let horizon = steps.max(1) as f64;
        let performance = (0..self.n)
            .map(|i| self.frozen_ind[i].unwrap_or(self.ind_sum[i] / horizon))
            .sum::<f64>()
            / n;
        let mean_contribution = (0..self.n)
            .map(|i| self.frozen_contrib[i].unwrap_or(self.contrib_sum[i] / horizon))
            .collect();
        RunSummary {
            seed,
            steps,
            converged,
            mean_allocation: self.alloc_sum.iter().map(|s| s / horizon).collect(),
            mean_contribution,
            corruption: self.diversion / (n * config.budget),
            performance,
            ell: self.ell,
        }
    }
}

/// Runs the game once with `rng` and returns only its aggregates.
pub fn summarize_run<R: Rng + ?Sized>(
    config: &SimulationConfig,
    network: &SpilloverNetwork,
    rng: &mut R,
    seed: u64,
) -> Result<RunSummary> {
    check_inputs(config, network)?;
    let mut acc = Accumulator::new(config);
    let (_, steps, converged) = drive(config, network, rng, |t, state, record| {
        acc.observe(
            config,
            t,
            &state.indicators,
            &state.contributions[1],
            &record.allocations,
            &record.contributions,
        );
    });
    Ok(acc.finish(config, seed, steps, converged))
}

/// Ensemble means over the converged runs.
///
/// When no run converged the means fall back to all runs; check
/// `non_converged` before trusting them.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub runs: Vec<RunSummary>,
    pub mean_allocation: Vec<f64>,
    /// Standard error of `mean_allocation` across runs.
    pub allocation_std_err: Vec<f64>,
    pub mean_contribution: Vec<f64>,
    pub mean_corruption: f64,
    pub mean_performance: f64,
    pub non_converged: usize,
}

impl Ensemble {
    pub fn from_runs(runs: Vec<RunSummary>) -> Result<Self> {
        let Some(first) = runs.first() else {
            return Err(Error::Config("an ensemble needs at least one run".into()));
        };
        let n = first.mean_allocation.len();
        let non_converged = runs.iter().filter(|r| !r.converged).count();
        let used: Vec<&RunSummary> = if non_converged == runs.len() {
            runs.iter().collect()
        } else {
            runs.iter().filter(|r| r.converged).collect()
        };
        let m = used.len() as f64;
        let mut mean_allocation = vec![0.0; n];
        let mut mean_contribution = vec![0.0; n];
        let mut mean_corruption = 0.0;
        let mut mean_performance = 0.0;
        for r in &used {
            for i in 0..n {
                mean_allocation[i] += r.mean_allocation[i];
                mean_contribution[i] += r.mean_contribution[i];
            }
            mean_corruption += r.corruption;
            mean_performance += r.performance;
        }
        mean_allocation.iter_mut().for_each(|v| *v /= m);
        mean_contribution.iter_mut().for_each(|v| *v /= m);
        mean_corruption /= m;
        mean_performance /= m;

        let allocation_std_err = (0..n)
            .map(|i| {
                if used.len() < 2 {
                    return 0.0;
                }
                let ss: f64 = used
                    .iter()
                    .map(|r| (r.mean_allocation[i] - mean_allocation[i]).powi(2))
                    .sum();
                (ss / (m - 1.0)).sqrt() / m.sqrt()
            })
            .collect();

        Ok(Self {
            runs,
            mean_allocation,
            allocation_std_err,
            mean_contribution,
            mean_corruption,
            mean_performance,
            non_converged,
        })
    }

    pub fn converged_runs(&self) -> usize {
        self.runs.len() - self.non_converged
    }
}

/// Seed of run `run` of an ensemble whose master seed is `master`.
pub fn run_seed(master: u64, run: usize) -> u64 {
    seeds::derive_seed(master, &[run as u64])
}

/// Runs `runs` independent simulations on `jobs` worker threads (0 picks the
/// rayon default). Run `m` is seeded with `run_seed(config.seed, m)`, so the
/// result does not depend on `jobs`.
pub fn run_monte_carlo(
    config: &SimulationConfig,
    network: &SpilloverNetwork,
    runs: usize,
    jobs: usize,
) -> Result<Ensemble> {
    if runs == 0 {
        return Err(Error::Config("run count must be at least 1".into()));
    }
    check_inputs(config, network)?;
    let seeds: Vec<u64> = (0..runs).map(|m| run_seed(config.seed, m)).collect();
    let summaries = with_pool(jobs, || {
        seeds
            .par_iter()
            .map(|&seed| {
                let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
                summarize_run(config, network, &mut rng, seed)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ensemble::from_runs(summaries)
}

/// Runs `f` inside a dedicated pool of `jobs` threads, or the global pool
/// when `jobs == 0`.
pub fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sim::run_simulation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fixture() -> (SimulationConfig, SpilloverNetwork) {
        let net = SpilloverNetwork::from_rows(&[
            vec![0.0, 0.3, 0.0, 0.1],
            vec![0.0, 0.0, 0.5, 0.0],
            vec![0.2, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.4, 0.0],
        ])
        .unwrap();
        let cfg = SimulationConfig::new(vec![0.8, 0.9, 0.6, 0.7], vec![0.2, 0.4, 0.1, 0.5], 0.5)
            .with_seed(42)
            .with_gamma(2.0);
        (cfg, net)
    }

    #[test]
    fn single_run_ensemble_is_that_run() {
        let (cfg, net) = fixture();
        let ens = run_monte_carlo(&cfg, &net, 1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(run_seed(cfg.seed, 0));
        let run = summarize_run(&cfg, &net, &mut rng, run_seed(cfg.seed, 0)).unwrap();
        assert_eq!(ens.runs[0], run);
        if run.converged {
            assert_eq!(ens.mean_allocation, run.mean_allocation);
            assert_eq!(ens.mean_corruption, run.corruption);
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let (cfg, net) = fixture();
        let a = run_monte_carlo(&cfg, &net, 24, 1).unwrap();
        let b = run_monte_carlo(&cfg, &net, 24, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn summary_matches_trace() {
        let (cfg, net) = fixture();
        let trace = run_simulation(&cfg, &net, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let summary = summarize_run(&cfg, &net, &mut ChaCha8Rng::seed_from_u64(5), 5).unwrap();
        assert_eq!(summary.steps, trace.steps);
        assert_eq!(summary.ell, trace.ell);
        let n = trace.n;
        for i in 0..n {
            let direct: f64 = (0..trace.steps).map(|t| trace.allocation(t, i)).sum::<f64>() / trace.steps as f64;
            assert!((direct - summary.mean_allocation[i]).abs() < 1e-12);
        }
        assert!((summary.mean_allocation.iter().sum::<f64>() - cfg.budget).abs() < 1e-9);
    }

    #[test]
    fn zero_runs_is_an_error() {
        let (cfg, net) = fixture();
        assert!(run_monte_carlo(&cfg, &net, 0, 1).is_err());
    }
}
