use super::outcome::Outcome;
use crate::data::IndicatorPanel;
use crate::error::{Error, Result};
use crate::stats::spearman_test;

/// Per-country corruption and performance with their rank correlation.
#[derive(Debug, Clone, PartialEq)]
pub struct CorruptionPerformance {
    pub countries: Vec<String>,
    pub corruption: Vec<f64>,
    pub performance: Vec<f64>,
    pub spearman: f64,
    pub p_value: f64,
}

impl CorruptionPerformance {
    pub fn new(countries: Vec<String>, corruption: Vec<f64>, performance: Vec<f64>) -> Result<Self> {
        if corruption.len() != countries.len() || performance.len() != countries.len() {
            return Err(Error::Shape(format!(
                "{} countries, {} corruption and {} performance values",
                countries.len(),
                corruption.len(),
                performance.len()
            )));
        }
        let (spearman, p_value) = spearman_test(&corruption, &performance)?;
        Ok(Self {
            countries,
            corruption,
            performance,
            spearman,
            p_value,
        })
    }
}

/// Simulated `(D̄, Ī)` per country.
pub fn corruption_performance_table(countries: &[String], outcomes: &[Outcome]) -> Result<CorruptionPerformance> {
    CorruptionPerformance::new(
        countries.to_vec(),
        outcomes.iter().map(|o| o.corruption).collect(),
        outcomes.iter().map(|o| o.performance).collect(),
    )
}

/// Empirical counterpart on a normalized panel (higher is better): corruption
/// is `1 −` the time mean of the corruption indicator, performance the time
/// mean of every other indicator.
pub fn empirical_corruption_performance(panel: &IndicatorPanel, corruption_indicator: &str) -> Result<CorruptionPerformance> {
    let k = panel.indicator_index(corruption_indicator)?;
    let nk = panel.n_indicators();
    if nk < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: nk });
    }
    let mut corruption = Vec::with_capacity(panel.n_countries());
    let mut performance = Vec::with_capacity(panel.n_countries());
    for c in 0..panel.n_countries() {
        let avg = panel.time_average(c);
        corruption.push(1.0 - avg[k]);
        performance.push((avg.iter().sum::<f64>() - avg[k]) / (nk - 1) as f64);
    }
    CorruptionPerformance::new(panel.countries.clone(), corruption, performance)
}
