use crate::country::CountryModel;
use crate::error::Result;
use crate::model::{run_monte_carlo, Ensemble, MechanismToggles};

/// Ensemble means without the per-run records.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub mean_allocation: Vec<f64>,
    pub allocation_std_err: Vec<f64>,
    pub mean_contribution: Vec<f64>,
    pub corruption: f64,
    pub performance: f64,
    pub runs: usize,
    pub non_converged: usize,
}

impl From<&Ensemble> for Outcome {
    fn from(e: &Ensemble) -> Self {
        Self {
            mean_allocation: e.mean_allocation.clone(),
            allocation_std_err: e.allocation_std_err.clone(),
            mean_contribution: e.mean_contribution.clone(),
            corruption: e.mean_corruption,
            performance: e.mean_performance,
            runs: e.runs.len(),
            non_converged: e.non_converged,
        }
    }
}

/// Runs the country's ensemble, optionally with other mechanism switches.
pub fn country_outcome(model: &CountryModel, toggles: Option<MechanismToggles>, runs: usize, jobs: usize) -> Result<Outcome> {
    let mut cfg = model.config.clone();
    if let Some(t) = toggles {
        cfg.toggles = t;
    }
    Ok(Outcome::from(&run_monte_carlo(&cfg, &model.network, runs, jobs)?))
}
