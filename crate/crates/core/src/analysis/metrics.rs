//! Aggregates of a single recorded run.

use crate::error::{Error, Result};
use crate::model::SimulationTrace;
use crate::stats::mean;

/// `(1/N) Σ_i (1/ℓ_i) Σ_{t ≤ ℓ_i} I_{i,t}`.
///
/// An issue that started on target contributes its initial value; one that
/// never got there is averaged over the whole run.
pub fn performance_mean(trace: &SimulationTrace) -> f64 {
    let n = trace.n;
    (0..n)
        .map(|i| match trace.issue_horizon(i) {
            0 => trace.initial_indicators[i],
            h => (0..h).map(|t| trace.indicator(t, i)).sum::<f64>() / h as f64,
        })
        .sum::<f64>()
        / n as f64
}

/// `(1 / NB) Σ_i Σ_t (P_{i,t} − C_{i,t})`.
pub fn corruption_level(trace: &SimulationTrace, budget: f64) -> f64 {
    let diverted: f64 = trace.allocations.iter().zip(&trace.contributions).map(|(p, c)| p - c).sum();
    diverted / (trace.n as f64 * budget)
}

/// Inter-temporal mean allocation of every issue.
pub fn mean_allocation(trace: &SimulationTrace) -> Vec<f64> {
    let steps = trace.steps.max(1) as f64;
    (0..trace.n)
        .map(|i| (0..trace.steps).map(|t| trace.allocation(t, i)).sum::<f64>() / steps)
        .collect()
}

/// Mean contribution of every issue over its own horizon.
pub fn mean_contribution(trace: &SimulationTrace) -> Vec<f64> {
    (0..trace.n)
        .map(|i| match trace.issue_horizon(i) {
            0 => trace.initial_contributions.get(i).copied().unwrap_or(0.0),
            h => (0..h).map(|t| trace.contribution(t, i)).sum::<f64>() / h as f64,
        })
        .collect()
}

/// R² of the least-squares line of `y` on `x`: `1 − SS_res / SS_tot`.
pub fn r_squared(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!("lengths {} and {} differ", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: x.len() });
    }
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sst: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 || sst == 0.0 {
        return Err(Error::Undefined("R² of a constant series"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ssr: f64 = x.iter().zip(y).map(|(a, b)| (b - icpt - slope * a).powi(2)).sum();
    Ok(1.0 - ssr / sst)
}
