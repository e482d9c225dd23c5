use crate::error::{Error, Result};

pub const DEFAULT_EPSILON: f64 = 1e-3;
pub const DEFAULT_TARGET_TOL: f64 = 1e-2;
pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// How the central authority allocates the budget.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Government {
    #[default]
    Adaptive,
    /// `P ~ U(0,1)^n`, rescaled to the budget every step.
    Random,
}

/// How public servants set their contributions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Servants {
    #[default]
    Learning,
    /// `C_i ~ U(0, P_i)` every step.
    Random,
    /// `C_i = share · P_i` every step; 1 is fully honest, 0 diverts everything.
    FixedShare(f64),
}

/// What feeds the spill-in term of the indicator dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Spillovers {
    #[default]
    Network,
    /// Replace the network by `w · Id`: each issue only receives `w · C_i`.
    IdentityWeighted(f64),
}

/// Source of the punishment (`f_R`) and monitoring (`f_C`) probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Supervision {
    #[default]
    Endogenous,
    /// `f_R = f_C = f` at all times.
    Fixed(f64),
}

/// Mechanism switches used by the sensitivity analysis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MechanismToggles {
    pub government: Government,
    pub servants: Servants,
    pub spillovers: Spillovers,
    pub supervision: Supervision,
}

impl MechanismToggles {
    pub fn full() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        if let Supervision::Fixed(f) = self.supervision {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::Config(format!("fixed supervision {f} is not a probability")));
            }
        }
        if let Servants::FixedShare(s) = self.servants {
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::Config(format!("contribution share {s} is not in [0, 1]")));
            }
        }
        if let Spillovers::IdentityWeighted(w) = self.spillovers {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Config(format!("identity spillover weight {w} must be >= 0")));
            }
        }
        Ok(())
    }
}

/// Everything a single simulation run needs besides the network and the RNG.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub targets: Vec<f64>,
    pub initial_indicators: Vec<f64>,
    pub budget: f64,
    pub gamma: f64,
    /// Halting tolerance on the per-step change of every indicator.
    pub epsilon: f64,
    /// An indicator counts as converged once within this distance of its target.
    pub target_tol: f64,
    pub max_steps: usize,
    pub rule_of_law_idx: usize,
    pub control_of_corruption_idx: usize,
    pub toggles: MechanismToggles,
    pub seed: u64,
}

impl SimulationConfig {
    /// Config with default tolerances, `γ = 1`, institutional indices 0 and 1.
    pub fn new(targets: Vec<f64>, initial_indicators: Vec<f64>, budget: f64) -> Self {
        let n = targets.len();
        Self {
            targets,
            initial_indicators,
            budget,
            gamma: 1.0,
            epsilon: DEFAULT_EPSILON,
            target_tol: DEFAULT_TARGET_TOL,
            max_steps: DEFAULT_MAX_STEPS,
            rule_of_law_idx: 0,
            control_of_corruption_idx: n.min(2).saturating_sub(1),
            toggles: MechanismToggles::default(),
            seed: 0,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_toggles(mut self, toggles: MechanismToggles) -> Self {
        self.toggles = toggles;
        self
    }

    pub fn n(&self) -> usize {
        self.targets.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.targets.len();
        if n == 0 {
            return Err(Error::Config("at least one policy issue is required".into()));
        }
        if self.initial_indicators.len() != n {
            return Err(Error::Shape(format!(
                "{} targets but {} initial indicators",
                n,
                self.initial_indicators.len()
            )));
        }
        let in_unit = |v: &f64| (0.0..=1.0).contains(v);
        if let Some(i) = self.targets.iter().position(|v| !in_unit(v)) {
            return Err(Error::Config(format!("target {i} = {} not in [0, 1]", self.targets[i])));
        }
        if let Some(i) = self.initial_indicators.iter().position(|v| !in_unit(v)) {
            return Err(Error::Config(format!(
                "initial indicator {i} = {} not in [0, 1]",
                self.initial_indicators[i]
            )));
        }
        for (name, v) in [
            ("budget", self.budget),
            ("gamma", self.gamma),
            ("epsilon", self.epsilon),
            ("target_tol", self.target_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be at least 1".into()));
        }
        if self.rule_of_law_idx >= n || self.control_of_corruption_idx >= n {
            return Err(Error::Config(format!(
                "institutional indicator indices ({}, {}) out of range for {n} issues",
                self.rule_of_law_idx, self.control_of_corruption_idx
            )));
        }
        self.toggles.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let ok = SimulationConfig::new(vec![0.5, 0.6], vec![0.1, 0.2], 1.0);
        ok.validate().unwrap();
        assert_eq!(ok.control_of_corruption_idx, 1);

        let mut bad = ok.clone();
        bad.targets[0] = 1.5;
        assert!(bad.validate().is_err());

        let mut bad = ok.clone();
        bad.budget = 0.0;
        assert!(bad.validate().is_err());

        let mut bad = ok.clone();
        bad.max_steps = 0;
        assert!(bad.validate().is_err());

        let mut bad = ok.clone();
        bad.rule_of_law_idx = 2;
        assert!(bad.validate().is_err());

        let mut bad = ok.clone();
        bad.toggles.supervision = Supervision::Fixed(1.2);
        assert!(bad.validate().is_err());

        let mut bad = ok;
        bad.initial_indicators.pop();
        assert!(bad.validate().is_err());
    }
}
