//! Loading a normalized panel and turning it into per-country models.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use ppi_core::country::CountryModel;
use ppi_core::data::{load_panel, IndicatorPanel};
use ppi_core::estimation::{estimate_network, read_adjacency, EstimationParams, DEFAULT_SHRINKAGE, DEFAULT_TIE_TOLERANCE};
use ppi_core::model::ensemble::with_pool;
use ppi_core::model::{SpilloverNetwork, DEFAULT_MAX_STEPS};
use ppi_core::seeds::derive_seed;
use ppi_core::synthetic::{CONTROL_OF_CORRUPTION, DIVERSION, RULE_OF_LAW};
use rayon::prelude::*;

use crate::config::Resolver;
use crate::manifest::Inputs;

/// Network estimation flags shared by `estimate-network` and the model commands.
#[derive(Args, Debug, Clone, Default)]
pub struct EstimationArgs {
    /// Shrinkage of the correlation matrix towards the identity [default: 0.2]
    #[arg(long)]
    pub shrinkage: Option<f64>,
    /// Likelihood-ratio band treated as a tie [default: 0.001]
    #[arg(long)]
    pub tie_tolerance: Option<f64>,
    /// Correlate levels instead of first differences
    #[arg(long)]
    pub no_differencing: bool,
}

impl EstimationArgs {
    pub fn resolve(&self, r: &mut Resolver) -> Result<EstimationParams> {
        Ok(EstimationParams {
            shrinkage: r.get("shrinkage", self.shrinkage, DEFAULT_SHRINKAGE)?,
            tie_tolerance: r.get("tie_tolerance", self.tie_tolerance, DEFAULT_TIE_TOLERANCE)?,
            differencing: r.get("differencing", self.no_differencing.then_some(false), true)?,
        })
    }
}

/// Inputs of every command that simulates countries from a panel.
#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    /// Directory with panel.csv, pillars.csv and flags.csv as written by `normalize`
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Directory of <country>.csv adjacency files; estimated from the panel when absent
    #[arg(long)]
    pub networks: Option<PathBuf>,
    /// Budget of every country [default: 1]
    #[arg(long)]
    pub budget: Option<f64>,
    /// `country,value` CSV of per-country budgets; overrides --budget
    #[arg(long)]
    pub budgets: Option<PathBuf>,
    /// Indicator excluded from the model and used as empirical corruption [default: diversion_of_public_funds]
    #[arg(long)]
    pub corruption_indicator: Option<String>,
    /// Indicator driving the punishment probability [default: rule_of_law]
    #[arg(long)]
    pub rule_of_law: Option<String>,
    /// Indicator driving the monitoring probability [default: control_of_corruption]
    #[arg(long)]
    pub control_of_corruption: Option<String>,
    /// Step limit of every run [default: 10000]
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Comma-separated subset of countries [default: every country in the panel]
    #[arg(long)]
    pub countries: Option<String>,
    #[command(flatten)]
    pub estimation: EstimationArgs,
}

/// γ source for commands that run calibrated models.
#[derive(Args, Debug, Clone, Default)]
pub struct GammaArgs {
    /// γ of every country [default: 1]
    #[arg(long)]
    pub gamma: Option<f64>,
    /// `country,gamma` CSV as written by `calibrate`; overrides --gamma
    #[arg(long)]
    pub gammas: Option<PathBuf>,
}

pub struct DataFiles {
    pub values: PathBuf,
    pub pillars: PathBuf,
    pub flags: Option<PathBuf>,
}

impl DataFiles {
    pub fn in_dir(dir: &Path) -> Self {
        let flags = dir.join("flags.csv");
        Self {
            values: dir.join("panel.csv"),
            pillars: dir.join("pillars.csv"),
            flags: flags.exists().then_some(flags),
        }
    }

    pub fn load(&self, inputs: &mut Inputs) -> Result<IndicatorPanel> {
        inputs.add(&self.values);
        inputs.add(&self.pillars);
        if let Some(f) = &self.flags {
            inputs.add(f);
        }
        Ok(load_panel(&self.values, &self.pillars, self.flags.as_deref())?)
    }
}

/// Panel without the corruption indicator, paired with the full one.
pub struct Panels {
    pub full: IndicatorPanel,
    pub model: IndicatorPanel,
    pub corruption_indicator: String,
    pub has_corruption: bool,
}

impl Panels {
    pub fn split(full: IndicatorPanel, corruption_indicator: &str) -> Self {
        let keep: Vec<usize> = (0..full.n_indicators()).filter(|&k| full.indicators[k] != corruption_indicator).collect();
        let has_corruption = keep.len() < full.n_indicators();
        Self {
            model: full.select_indicators(&keep),
            full,
            corruption_indicator: corruption_indicator.to_string(),
            has_corruption,
        }
    }
}

pub struct Study {
    pub panels: Panels,
    /// Panel indices of the simulated countries.
    pub selected: Vec<usize>,
    pub models: Vec<CountryModel>,
}

impl Study {
    pub fn ids(&self) -> Vec<String> {
        self.models.iter().map(|m| m.id.clone()).collect()
    }

    pub fn issue_pillars(&self) -> &[String] {
        &self.panels.model.pillars
    }
}

fn read_gammas(path: &Path) -> Result<HashMap<String, f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("{}: missing column `{name}`", path.display()))
    };
    let (ci, gi) = (col("country")?, col("gamma")?);
    let mut map = HashMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let c = rec.get(ci).unwrap_or_default().to_string();
        let g: f64 = rec
            .get(gi)
            .unwrap_or_default()
            .parse()
            .map_err(|_| anyhow!("{}: line {line}: cannot parse gamma", path.display()))?;
        map.insert(c, g);
    }
    Ok(map)
}

/// Resolves [`GammaArgs`] into a per-country lookup.
pub fn resolve_gammas(a: &GammaArgs, r: &mut Resolver, inputs: &mut Inputs) -> Result<(f64, HashMap<String, f64>)> {
    let gamma = r.get("gamma", a.gamma, 1.0)?;
    let map = match r.opt("gammas", a.gammas.clone())? {
        Some(p) => {
            inputs.add(&p);
            read_gammas(&p)?
        }
        None => HashMap::new(),
    };
    Ok((gamma, map))
}

fn country_network(
    networks: Option<&Path>,
    panel: &IndicatorPanel,
    country: &str,
    params: &EstimationParams,
) -> Result<(SpilloverNetwork, Option<PathBuf>)> {
    match networks {
        Some(dir) => {
            let p = dir.join(format!("{country}.csv"));
            let (ids, net) = read_adjacency(&p).with_context(|| format!("network of `{country}`"))?;
            if ids != panel.indicators {
                bail!("{}: indicators do not match the panel (corruption indicator excluded)", p.display());
            }
            Ok((net, Some(p)))
        }
        None => Ok((estimate_network(panel, country, params)?.network, None)),
    }
}

/// Builds one model per selected country: first-year initials, last-year
/// targets, the chosen network, budget and γ, and master seed
/// `derive_seed(seed, [position])`.
pub fn build_study(
    a: &ModelArgs,
    gammas: Option<(f64, HashMap<String, f64>)>,
    seed: u64,
    jobs: usize,
    r: &mut Resolver,
    inputs: &mut Inputs,
) -> Result<Study> {
    let data: PathBuf = r.req("data", a.data.clone())?;
    let networks: Option<PathBuf> = r.opt("networks", a.networks.clone())?;
    let budget = r.get("budget", a.budget, 1.0)?;
    let budgets = match r.opt("budgets", a.budgets.clone())? {
        Some(p) => {
            inputs.add(&p);
            ppi_core::data::io::read_country_values(&p)?
        }
        None => HashMap::new(),
    };
    let corruption: String = r.get("corruption_indicator", a.corruption_indicator.clone(), DIVERSION.to_string())?;
    let rol: String = r.get("rule_of_law", a.rule_of_law.clone(), RULE_OF_LAW.to_string())?;
    let coc: String = r.get("control_of_corruption", a.control_of_corruption.clone(), CONTROL_OF_CORRUPTION.to_string())?;
    let max_steps = r.get("max_steps", a.max_steps, DEFAULT_MAX_STEPS)?;
    let subset: Option<String> = r.opt("countries", a.countries.clone())?;
    let params = a.estimation.resolve(r)?;

    let panels = Panels::split(DataFiles::in_dir(&data).load(inputs)?, &corruption);
    let panel = &panels.model;
    let selected: Vec<usize> = match &subset {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|c| panel.country_index(c).map_err(Into::into))
            .collect::<Result<_>>()?,
        None => (0..panel.n_countries()).collect(),
    };
    if selected.is_empty() {
        bail!("no countries selected");
    }
    let rol_idx = panel.indicator_index(&rol)?;
    let coc_idx = panel.indicator_index(&coc)?;

    let built = with_pool(jobs, || {
        selected
            .par_iter()
            .enumerate()
            .map(|(pos, &c)| -> Result<(CountryModel, Option<PathBuf>)> {
                let id = &panel.countries[c];
                let (net, file) = country_network(networks.as_deref(), panel, id, &params)?;
                let b = budgets.get(id).copied().unwrap_or(budget);
                let mut m = CountryModel::retrospective(panel, id, net, b, rol_idx, coc_idx)?;
                if let Some((g, map)) = &gammas {
                    m.config.gamma = map.get(id).copied().unwrap_or(*g);
                }
                m.config.seed = derive_seed(seed, &[pos as u64]);
                m.config.max_steps = max_steps;
                m.config.validate()?;
                Ok((m, file))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut models = Vec::with_capacity(built.len());
    for (m, file) in built {
        if let Some(f) = file {
            inputs.add(&f);
        }
        models.push(m);
    }
    Ok(Study {
        panels,
        selected,
        models,
    })
}
