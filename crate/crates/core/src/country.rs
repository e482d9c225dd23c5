use crate::data::IndicatorPanel;
use crate::error::{Error, Result};
use crate::model::{SimulationConfig, SpilloverNetwork};

/// Everything needed to simulate one country.
#[derive(Debug, Clone, PartialEq)]
pub struct CountryModel {
    pub id: String,
    pub network: SpilloverNetwork,
    pub config: SimulationConfig,
}

impl CountryModel {
    pub fn new(id: impl Into<String>, network: SpilloverNetwork, config: SimulationConfig) -> Result<Self> {
        if network.len() != config.n() {
            return Err(Error::Shape(format!(
                "network has {} issues, config has {}",
                network.len(),
                config.n()
            )));
        }
        config.validate()?;
        Ok(Self {
            id: id.into(),
            network,
            config,
        })
    }

    /// Config with `gamma` replaced.
    pub fn at_gamma(&self, gamma: f64) -> SimulationConfig {
        let mut c = self.config.clone();
        c.gamma = gamma;
        c
    }

    /// Retrospective setup from a panel: first-year initials, last-year targets.
    pub fn retrospective(
        panel: &IndicatorPanel,
        country: &str,
        network: SpilloverNetwork,
        budget: f64,
        rule_of_law_idx: usize,
        control_of_corruption_idx: usize,
    ) -> Result<Self> {
        let c = panel.country_index(country)?;
        let ny = panel.n_years();
        if ny < 2 {
            return Err(Error::TooFewObservations { needed: 2, got: ny });
        }
        let initials = panel.year_slice(c, 0).to_vec();
        let targets = panel.year_slice(c, ny - 1).to_vec();
        let mut config = SimulationConfig::new(targets, initials, budget);
        config.rule_of_law_idx = rule_of_law_idx;
        config.control_of_corruption_idx = control_of_corruption_idx;
        Self::new(country, network, config)
    }
}
