use rayon::prelude::*;

use super::grid::GammaGrid;
use crate::country::CountryModel;
use crate::error::Result;
use crate::model::ensemble::{run_monte_carlo, with_pool};
use crate::seeds::derive_seed;

/// Monte Carlo ensemble size used while calibrating.
pub const DEFAULT_CALIBRATION_RUNS: usize = 100;

/// Simulated corruption `D̄` of `country` at `gamma`, averaged over `runs`.
pub fn simulated_corruption(country: &CountryModel, gamma: f64, runs: usize, jobs: usize) -> Result<f64> {
    let cfg = country.at_gamma(gamma);
    Ok(run_monte_carlo(&cfg, &country.network, runs, jobs)?.mean_corruption)
}

/// `D̄` for every (country, γ) pair, computed once and reused by the searches.
#[derive(Debug, Clone, PartialEq)]
pub struct CorruptionTable {
    pub countries: Vec<String>,
    pub grid: GammaGrid,
    values: Vec<f64>,
    /// Runs over the whole table that hit `max_steps`.
    pub non_converged: usize,
    pub runs: usize,
}

impl CorruptionTable {
    /// Fills the table. Country `c` runs with master seed
    /// `derive_seed(seed, [c])` at every γ, so the γ profile of a country
    /// shares its random numbers.
    pub fn compute(countries: &[CountryModel], grid: &GammaGrid, runs: usize, jobs: usize, seed: u64) -> Result<Self> {
        let g = grid.len();
        let pairs: Vec<(usize, usize)> = (0..countries.len()).flat_map(|c| (0..g).map(move |k| (c, k))).collect();
        let values = with_pool(jobs, || {
            pairs
                .par_iter()
                .map(|&(c, k)| {
                    let mut cfg = countries[c].at_gamma(grid.get(k));
                    cfg.seed = derive_seed(seed, &[c as u64]);
                    run_monte_carlo(&cfg, &countries[c].network, runs, 0).map(|e| (e.mean_corruption, e.non_converged))
                })
                .collect::<Result<Vec<(f64, usize)>>>()
        })?;
        Ok(Self {
            countries: countries.iter().map(|c| c.id.clone()).collect(),
            grid: grid.clone(),
            non_converged: values.iter().map(|v| v.1).sum(),
            runs: runs * values.len(),
            values: values.into_iter().map(|v| v.0).collect(),
        })
    }

    /// Table from precomputed values laid out `[country][gamma]`.
    pub fn from_values(countries: Vec<String>, grid: GammaGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != countries.len() * grid.len() {
            return Err(crate::error::Error::Shape(format!(
                "{} values for {} countries × {} gammas",
                values.len(),
                countries.len(),
                grid.len()
            )));
        }
        Ok(Self {
            countries,
            grid,
            values,
            non_converged: 0,
            runs: 0,
        })
    }

    pub fn n_countries(&self) -> usize {
        self.countries.len()
    }

    pub fn get(&self, country: usize, gamma_idx: usize) -> f64 {
        self.values[country * self.grid.len() + gamma_idx]
    }

    pub fn row(&self, country: usize) -> &[f64] {
        let g = self.grid.len();
        &self.values[country * g..(country + 1) * g]
    }
}
