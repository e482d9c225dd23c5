//! Calibration of γ across countries against relative empirical corruption.

pub mod grid;
pub mod jump;
pub mod ratios;
pub mod table;

pub use grid::{GammaGrid, DEFAULT_GAMMA_MAX, DEFAULT_GAMMA_MIN, DEFAULT_GAMMA_POINTS};
pub use jump::{inverse_rmse_jumps, jump_method, jump_search, JumpOutcome, SizeBest, DEFAULT_SUBSETS};
pub use ratios::{ratios_method, ratios_on_subset, RatiosResult};
pub use table::{simulated_corruption, CorruptionTable, DEFAULT_CALIBRATION_RUNS};

use crate::error::Result;

/// Calibration outcome: the selected γ set and the per-country assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult {
    pub countries: Vec<String>,
    pub gammas: Vec<f64>,
    pub reference_country: String,
    pub reference_gamma: f64,
    pub mse: f64,
    pub h_star: usize,
    /// Distinct γ values the assignment actually uses.
    pub distinct: usize,
    pub mse_table: Vec<f64>,
    /// `I_r · D̄_e / D̄_r`: each country's corruption on the empirical scale.
    pub predicted: Vec<f64>,
}

/// Ratios search inside the jump-selected subset.
pub fn calibrate(table: &CorruptionTable, empirical: &[f64], subsets: usize, seed: u64, jobs: usize) -> Result<CalibrationResult> {
    let outcome = jump_search(table, empirical, subsets, seed, jobs)?;
    let r = &outcome.selected.result;
    let dr = table.get(r.reference, r.reference_gamma);
    let predicted = (0..table.n_countries())
        .map(|e| empirical[r.reference] * table.get(e, r.assignment[e]) / dr)
        .collect();
    Ok(CalibrationResult {
        countries: table.countries.clone(),
        gammas: r.assignment.iter().map(|&k| table.grid.get(k)).collect(),
        reference_country: table.countries[r.reference].clone(),
        reference_gamma: table.grid.get(r.reference_gamma),
        mse: r.mse,
        h_star: outcome.h_star,
        distinct: r.distinct(),
        mse_table: outcome.mse_table(),
        predicted,
    })
}
