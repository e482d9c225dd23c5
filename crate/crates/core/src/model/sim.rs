use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{Government, Servants, SimulationConfig, Spillovers, Supervision};
use super::network::SpilloverNetwork;
use super::rules;
use crate::error::{Error, Result};

/// Mutable agent state between two steps.
///
/// `allocations` is the budget split the servants will work with in the next
/// step; `contributions`/`benefits` hold the last two periods (index 0 is the
/// most recent) and `caught` the last detection draw.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    pub indicators: Vec<f64>,
    pub allocations: Vec<f64>,
    pub contributions: [Vec<f64>; 2],
    pub benefits: [Vec<f64>; 2],
    pub caught: Vec<bool>,
}

impl AgentState {
    /// Random initial conditions: `P_0 = B/n`, `C_0, C_{-1} ~ U(0, P_0)`,
    /// `F_0, F_{-1} ~ U(0, 1)`, nobody caught.
    pub fn initial<R: Rng + ?Sized>(config: &SimulationConfig, rng: &mut R) -> Self {
        let n = config.n();
        let share = config.budget / n as f64;
        let mut uniform = |scale: f64| -> Vec<f64> { (0..n).map(|_| rng.gen::<f64>() * scale).collect() };
        let c0 = uniform(share);
        let c1 = uniform(share);
        let f0 = uniform(1.0);
        let f1 = uniform(1.0);
        Self {
            indicators: config.initial_indicators.clone(),
            allocations: vec![share; n],
            contributions: [c0, c1],
            benefits: [f0, f1],
            caught: vec![false; n],
        }
    }
}

/// What happened during one step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    /// Allocation the servants worked with.
    pub allocations: Vec<f64>,
    pub contributions: Vec<f64>,
    pub caught: Vec<bool>,
    /// Largest absolute indicator change in this step.
    pub max_change: f64,
}

fn punishment(config: &SimulationConfig, indicators: &[f64]) -> f64 {
    match config.toggles.supervision {
        Supervision::Fixed(f) => f,
        // levels are clamped to [0, 1], so the domain check cannot fail
        Supervision::Endogenous => rules::institutional_prob(indicators[config.rule_of_law_idx]).unwrap_or(0.0),
    }
}

fn monitoring(config: &SimulationConfig, indicators: &[f64]) -> f64 {
    match config.toggles.supervision {
        Supervision::Fixed(f) => f,
        Supervision::Endogenous => {
            rules::institutional_prob(indicators[config.control_of_corruption_idx]).unwrap_or(0.0)
        }
    }
}

/// Advances the game by one period.
///
/// Order: contributions, benefits, indicators, detections, reallocation. The
/// benefits use the indicator level and detection outcome the servant
/// observes at the start of the period; detections drawn in this period feed
/// the allocation prepared at its end.
pub fn step<R: Rng + ?Sized>(
    state: &mut AgentState,
    config: &SimulationConfig,
    network: &SpilloverNetwork,
    rng: &mut R,
) -> StepRecord {
    let n = config.n();
    let allocations = state.allocations.clone();

    let contributions: Vec<f64> = match config.toggles.servants {
        Servants::Learning => (0..n)
            .map(|i| {
                rules::update_contribution(
                    state.contributions[0][i],
                    state.contributions[1][i],
                    state.benefits[0][i],
                    state.benefits[1][i],
                    allocations[i],
                )
            })
            .collect(),
        Servants::Random => allocations.iter().map(|&p| rng.gen::<f64>() * p).collect(),
        Servants::FixedShare(s) => allocations.iter().map(|&p| s * p).collect(),
    };

    let f_r = punishment(config, &state.indicators);
    let benefits: Vec<f64> = (0..n)
        .map(|i| {
            let penalty = if state.caught[i] { f_r } else { 0.0 };
            (state.indicators[i] + allocations[i] - contributions[i]) * (1.0 - penalty)
        })
        .collect();

    let mut spill = vec![0.0; n];
    match config.toggles.spillovers {
        Spillovers::Network => network.spill_into(&contributions, &mut spill),
        Spillovers::IdentityWeighted(w) => {
            spill.iter_mut().zip(&contributions).for_each(|(s, c)| *s = w * c);
        }
    }
    let mut max_change: f64 = 0.0;
    for i in 0..n {
        let prev = state.indicators[i];
        let next = rules::update_indicator(prev, config.targets[i], config.gamma, contributions[i], spill[i]);
        max_change = max_change.max((next - prev).abs());
        state.indicators[i] = next;
    }

    let f_c = monitoring(config, &state.indicators);
    let mut caught = vec![false; n];
    rules::draw_detections(&allocations, &contributions, f_c, rng, &mut caught);

    match config.toggles.government {
        Government::Adaptive => {
            let f_r = punishment(config, &state.indicators);
            rules::allocate(
                &config.targets,
                &state.indicators,
                network.out_degrees(),
                &caught,
                f_r,
                config.budget,
                &mut state.allocations,
            );
        }
        Government::Random => rules::allocate_randomly(config.budget, rng, &mut state.allocations),
    }

    let [c0, _] = std::mem::take(&mut state.contributions);
    state.contributions = [contributions.clone(), c0];
    let [f0, _] = std::mem::take(&mut state.benefits);
    state.benefits = [benefits, f0];
    state.caught.clone_from(&caught);

    StepRecord {
        allocations,
        contributions,
        caught,
        max_change,
    }
}

/// Full time series of one run.
///
/// Row `t` (0-based) of every matrix is period `t + 1`; the initial state is
/// kept separately. `ell[i]` is the first period at which indicator `i` was
/// within `target_tol` of its target (0 means it started there), `None` if it
/// never got there.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub n: usize,
    pub steps: usize,
    pub initial_indicators: Vec<f64>,
    pub initial_contributions: Vec<f64>,
    pub indicators: Vec<f64>,
    pub allocations: Vec<f64>,
    pub contributions: Vec<f64>,
    pub caught: Vec<bool>,
    pub ell: Vec<Option<usize>>,
    pub converged: bool,
}

impl SimulationTrace {
    pub fn indicator(&self, step: usize, issue: usize) -> f64 {
        self.indicators[step * self.n + issue]
    }

    pub fn allocation(&self, step: usize, issue: usize) -> f64 {
        self.allocations[step * self.n + issue]
    }

    pub fn contribution(&self, step: usize, issue: usize) -> f64 {
        self.contributions[step * self.n + issue]
    }

    pub fn was_caught(&self, step: usize, issue: usize) -> bool {
        self.caught[step * self.n + issue]
    }

    pub fn indicator_row(&self, step: usize) -> &[f64] {
        &self.indicators[step * self.n..(step + 1) * self.n]
    }

    pub fn allocation_row(&self, step: usize) -> &[f64] {
        &self.allocations[step * self.n..(step + 1) * self.n]
    }

    pub fn contribution_row(&self, step: usize) -> &[f64] {
        &self.contributions[step * self.n..(step + 1) * self.n]
    }

    pub fn final_indicators(&self) -> &[f64] {
        if self.steps == 0 {
            &self.initial_indicators
        } else {
            self.indicator_row(self.steps - 1)
        }
    }

    /// Steps used for issue `i` in per-issue averages: its convergence step,
    /// or the whole run when it never converged.
    pub fn issue_horizon(&self, i: usize) -> usize {
        self.ell[i].unwrap_or(self.steps)
    }
}

pub(crate) fn check_inputs(config: &SimulationConfig, network: &SpilloverNetwork) -> Result<()> {
    config.validate()?;
    if network.len() != config.n() {
        return Err(Error::Shape(format!(
            "network has {} issues, config has {}",
            network.len(),
            config.n()
        )));
    }
    Ok(())
}

/// Drives the loop until every indicator moves less than `epsilon` in one
/// period or `max_steps` is reached, handing each period to `observe`.
/// Returns `(steps, converged)`.
pub(crate) fn drive<R, F>(
    config: &SimulationConfig,
    network: &SpilloverNetwork,
    rng: &mut R,
    mut observe: F,
) -> (AgentState, usize, bool)
where
    R: Rng + ?Sized,
    F: FnMut(usize, &AgentState, &StepRecord),
{
    let mut state = AgentState::initial(config, rng);
    for t in 1..=config.max_steps {
        let record = step(&mut state, config, network, rng);
        observe(t, &state, &record);
        if record.max_change < config.epsilon {
            return (state, t, true);
        }
    }
    (state, config.max_steps, false)
}

/// Runs one simulation with the caller's RNG and records the full trace.
pub fn run_simulation<R: Rng + ?Sized>(
    config: &SimulationConfig,
    network: &SpilloverNetwork,
    rng: &mut R,
) -> Result<SimulationTrace> {
    check_inputs(config, network)?;
    let n = config.n();
    let mut indicators = Vec::new();
    let mut allocations = Vec::new();
    let mut contributions = Vec::new();
    let mut caught = Vec::new();
    let mut ell: Vec<Option<usize>> = (0..n)
        .map(|i| ((config.targets[i] - config.initial_indicators[i]).abs() < config.target_tol).then_some(0))
        .collect();

    let mut initial_contributions = Vec::new();
    let mut first = true;
    let (_, steps, converged) = drive(config, network, rng, |t, state, record| {
        if first {
            // C_0 is the older of the two contribution slots after step 1
            initial_contributions = state.contributions[1].clone();
            first = false;
        }
        indicators.extend_from_slice(&state.indicators);
        allocations.extend_from_slice(&record.allocations);
        contributions.extend_from_slice(&record.contributions);
        caught.extend_from_slice(&record.caught);
        for (i, hit) in ell.iter_mut().enumerate() {
            if hit.is_none() && (config.targets[i] - state.indicators[i]).abs() < config.target_tol {
                *hit = Some(t);
            }
        }
    });

    Ok(SimulationTrace {
        n,
        steps,
        initial_indicators: config.initial_indicators.clone(),
        initial_contributions,
        indicators,
        allocations,
        contributions,
        caught,
        ell,
        converged,
    })
}

/// Runs one simulation seeded from `config.seed`.
pub fn run_seeded(config: &SimulationConfig, network: &SpilloverNetwork) -> Result<SimulationTrace> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    run_simulation(config, network, &mut rng)
}
