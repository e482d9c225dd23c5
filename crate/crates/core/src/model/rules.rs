//! Behavioral rules of the game: indicator dynamics, servant benefits and
//! learning, detection of diversion, and the government's allocation heuristic.
//!
//! Every rule is a plain function over slices so it can be checked against
//! hand-computed fixtures independently of the simulation loop.

use rand::Rng;

use crate::error::{Error, Result};

/// Maps an institutional indicator level (rule of law, control of corruption)
/// to a probability: `I / e^(1 − I)`.
pub fn institutional_prob(level: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&level) {
        return Err(Error::Domain {
            name: "indicator level",
            value: level,
            domain: "[0, 1]",
        });
    }
    Ok(level / (1.0 - level).exp())
}

/// One step of indicator dynamics, clamped to the normalized domain.
///
/// The signed gap is kept, so an indicator above its target decays toward it.
#[inline]
pub fn update_indicator(prev: f64, target: f64, gamma: f64, own: f64, spill_in: f64) -> f64 {
    (prev + gamma * (target - prev) * (own + spill_in)).clamp(0.0, 1.0)
}

/// Servant benefit `(I + P − C)(1 − θ f_R)`.
pub fn servant_benefit(
    indicator: f64,
    allocation: f64,
    contribution: f64,
    caught: bool,
    punishment: f64,
) -> Result<f64> {
    if contribution > allocation || contribution < 0.0 {
        return Err(Error::Contract(format!(
            "contribution {contribution} must lie in [0, {allocation}]"
        )));
    }
    let penalty = if caught { punishment } else { 0.0 };
    Ok((indicator + allocation - contribution) * (1.0 - penalty))
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Directional learning of a servant's contribution.
///
/// The servant keeps moving in the direction that last raised its benefit and
/// reverses otherwise; the step size scales with the benefit change and the
/// recent contribution level. `sgn(0) = 0`, so no change in either benefits or
/// contributions freezes the contribution.
pub fn update_contribution(c_prev1: f64, c_prev2: f64, f_prev1: f64, f_prev2: f64, allocation: f64) -> f64 {
    let delta_f = f_prev1 - f_prev2;
    let delta_c = c_prev1 - c_prev2;
    let direction = sgn(delta_f * delta_c);
    let step = direction * delta_f.abs() * (c_prev1 + c_prev2) / 2.0;
    (c_prev1 + step).max(0.0).min(allocation)
}

/// Per-issue detection probabilities `f_C (P_i − C_i) / Σ_j (P_j − C_j)`.
///
/// All zero when nobody diverts anything.
pub fn detection_probabilities(allocations: &[f64], contributions: &[f64], monitoring: f64) -> Vec<f64> {
    let gaps: Vec<f64> = allocations
        .iter()
        .zip(contributions)
        .map(|(p, c)| (p - c).max(0.0))
        .collect();
    let total: f64 = gaps.iter().sum();
    if total <= 0.0 {
        return vec![0.0; gaps.len()];
    }
    gaps.iter().map(|g| monitoring * g / total).collect()
}

/// Draws independent detection flags with the probabilities above.
pub fn draw_detections<R: Rng + ?Sized>(
    allocations: &[f64],
    contributions: &[f64],
    monitoring: f64,
    rng: &mut R,
    caught: &mut [bool],
) {
    let probs = detection_probabilities(allocations, contributions, monitoring);
    for (flag, p) in caught.iter_mut().zip(probs) {
        // one uniform per issue even when p = 0 keeps the stream aligned
        let u: f64 = rng.gen();
        *flag = u < p;
    }
}

/// Government allocation heuristic.
///
/// Propensities are `max(0, T_i − I_i)(K_i + 1)(1 − θ_i f_R)`; the budget is
/// split proportionally, or uniformly when every propensity vanishes.
pub fn allocate(
    targets: &[f64],
    indicators: &[f64],
    out_degrees: &[usize],
    caught: &[bool],
    punishment: f64,
    budget: f64,
    allocations: &mut [f64],
) {
    let n = allocations.len();
    let mut total = 0.0;
    for i in 0..n {
        let gap = (targets[i] - indicators[i]).max(0.0);
        let penalty = if caught[i] { punishment } else { 0.0 };
        let q = gap * (out_degrees[i] as f64 + 1.0) * (1.0 - penalty);
        allocations[i] = q;
        total += q;
    }
    if total > 0.0 {
        allocations.iter_mut().for_each(|a| *a = *a / total * budget);
    } else {
        allocations.iter_mut().for_each(|a| *a = budget / n as f64);
    }
}

/// Random allocation: `U(0,1)` draws rescaled to the budget.
pub fn allocate_randomly<R: Rng + ?Sized>(budget: f64, rng: &mut R, allocations: &mut [f64]) {
    let mut total = 0.0;
    for a in allocations.iter_mut() {
        *a = rng.gen::<f64>();
        total += *a;
    }
    if total > 0.0 {
        allocations.iter_mut().for_each(|a| *a = *a / total * budget);
    } else {
        let n = allocations.len() as f64;
        allocations.iter_mut().for_each(|a| *a = budget / n);
    }
}
