use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use ppi_core::data::io::{read_country_year, save_panel};
use ppi_core::data::normalize_panel;
use ppi_core::estimation::{estimate_network, write_adjacency};
use ppi_core::model::ensemble::with_pool;
use ppi_core::synthetic::DIVERSION;
use rayon::prelude::*;

use crate::config::Resolver;
use crate::manifest::{Inputs, Output};
use crate::study::{DataFiles, EstimationArgs, Panels};
use crate::{Common, Ctx, Status};

#[derive(Args, Debug)]
pub struct NormalizeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Long-format `country,year,indicator,value` CSV
    #[arg(long)]
    pub values: Option<PathBuf>,
    /// `indicator,pillar` CSV
    #[arg(long)]
    pub pillars: Option<PathBuf>,
    /// `indicator,n2,switch` CSV from an earlier pass; flags accumulate
    #[arg(long)]
    pub flags: Option<PathBuf>,
    /// `country,year,value` GDP per capita used to orient indicators; no orientation when absent
    #[arg(long)]
    pub gdp: Option<PathBuf>,
    /// Plain min-max scaling without the percentile rule for skewed indicators
    #[arg(long)]
    pub no_skew_rule: bool,
}

/// Writes panel.csv, pillars.csv and flags.csv.
pub fn normalize(a: &NormalizeArgs, _ctx: &Ctx, r: &mut Resolver, inputs: &mut Inputs, out: &mut Output) -> Result<Status> {
    let values: PathBuf = r.req("values", a.values.clone())?;
    let pillars: PathBuf = r.req("pillars", a.pillars.clone())?;
    let flags: Option<PathBuf> = r.opt("flags", a.flags.clone())?;
    let gdp_path: Option<PathBuf> = r.opt("gdp", a.gdp.clone())?;
    let skew_rule = r.get("skew_rule", a.no_skew_rule.then_some(false), true)?;

    let files = DataFiles {
        values,
        pillars,
        flags,
    };
    let panel = files.load(inputs)?;
    let gdp = match &gdp_path {
        Some(p) => {
            inputs.add(p);
            let map = read_country_year(p)?;
            let mut rows = Vec::with_capacity(panel.n_countries());
            for c in &panel.countries {
                let mut row = Vec::with_capacity(panel.n_years());
                for y in &panel.years {
                    match map.get(&(c.clone(), *y)) {
                        Some(v) => row.push(*v),
                        None => bail!("{}: no GDP value for ({c}, {y})", p.display()),
                    }
                }
                rows.push(row);
            }
            Some(rows)
        }
        None => None,
    };
    let normalized = normalize_panel(&panel, gdp.as_deref(), skew_rule)?;
    let (v, p, f) = (out.path("panel.csv"), out.path("pillars.csv"), out.path("flags.csv"));
    save_panel(&normalized, &v, &p, &f)?;
    let n2 = normalized.n2.iter().filter(|b| **b).count();
    let sw = normalized.switched.iter().filter(|b| **b).count();
    eprintln!(
        "normalized {} indicators over {} countries and {} years ({n2} percentile-scaled, {sw} switched)",
        normalized.n_indicators(),
        normalized.n_countries(),
        normalized.n_years()
    );
    Ok(Status::default())
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Country to estimate
    pub country: Option<String>,
    /// Estimate every country of the panel
    #[arg(long)]
    pub all: bool,
    /// Directory with panel.csv, pillars.csv and flags.csv as written by `normalize`
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Indicator left out of the networks [default: diversion_of_public_funds]
    #[arg(long)]
    pub corruption_indicator: Option<String>,
    #[command(flatten)]
    pub estimation: EstimationArgs,
}

/// Writes networks/<country>.csv and network_report.csv.
pub fn estimate(a: &EstimateArgs, ctx: &Ctx, r: &mut Resolver, inputs: &mut Inputs, out: &mut Output) -> Result<Status> {
    let data: PathBuf = r.req("data", a.data.clone())?;
    let country: Option<String> = r.opt("country", a.country.clone())?;
    let all = r.get("all", a.all.then_some(true), false)?;
    let corruption: String = r.get("corruption_indicator", a.corruption_indicator.clone(), DIVERSION.to_string())?;
    let params = a.estimation.resolve(r)?;

    let panel = Panels::split(DataFiles::in_dir(&data).load(inputs)?, &corruption).model;
    let targets: Vec<String> = match (all, country) {
        (true, _) => panel.countries.clone(),
        (false, Some(c)) => {
            panel.country_index(&c)?;
            vec![c]
        }
        (false, None) => bail!("name a country or pass --all"),
    };
    for id in &targets {
        if id.contains(['/', '\\']) || id.starts_with('.') {
            bail!("country id `{id}` cannot be used as a file name");
        }
    }
    let estimates = with_pool(ctx.jobs, || {
        targets
            .par_iter()
            .map(|id| estimate_network(&panel, id, &params))
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut rows = Vec::with_capacity(targets.len());
    for (id, est) in targets.iter().zip(&estimates) {
        let path = out.path(&format!("networks/{id}.csv"));
        write_adjacency(&path, &panel.indicators, &est.network)?;
        let k = est.kept.len();
        eprintln!(
            "{id}: undirected stage {} edges on {k} indicators (3k-6 = {}), {} directed edges",
            est.graph.edges.len(),
            3 * k - 6,
            est.network.edge_count()
        );
        rows.push(vec![
            id.clone(),
            panel.n_indicators().to_string(),
            k.to_string(),
            est.dropped_constant.join(";"),
            est.graph.edges.len().to_string(),
            est.network.edge_count().to_string(),
            est.dropped_negative.to_string(),
            est.ties.to_string(),
        ]);
    }
    out.csv(
        "network_report.csv",
        &[
            "country",
            "indicators",
            "kept",
            "dropped_constant",
            "undirected_edges",
            "directed_edges",
            "dropped_negative",
            "ties",
        ],
        &rows,
    )?;
    Ok(Status::default())
}
