use std::fmt::Write as _;

use anyhow::{bail, Result};
use clap::Args;
use ppi_core::analysis::{corruption_level, empirical_corruption_performance, performance_mean, r_squared, render_series, PlotSeries};
use ppi_core::calibration::{
    calibrate as run_calibration, inverse_rmse_jumps, CorruptionTable, GammaGrid, DEFAULT_GAMMA_MAX, DEFAULT_GAMMA_MIN,
    DEFAULT_GAMMA_POINTS, DEFAULT_SUBSETS,
};
use ppi_core::estimation::write_adjacency;
use ppi_core::model::{run_monte_carlo, run_seed, run_seeded, SimulationConfig, SpilloverNetwork};
use ppi_core::seeds::rng_for;
use ppi_core::synthetic::demo_instance;

use crate::config::Resolver;
use crate::manifest::{Inputs, Output};
use crate::study::{build_study, resolve_gammas, GammaArgs, ModelArgs};
use crate::{num, Common, Ctx, Status};

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Simulate a random Erdős–Rényi instance instead of a panel country
    #[arg(long)]
    pub demo: bool,
    /// Issues in the demo network [default: 50]
    #[arg(long)]
    pub issues: Option<usize>,
    /// Directed edges in the demo network [default: 100]
    #[arg(long)]
    pub edges: Option<usize>,
    /// Panel country to simulate (retrospective setup)
    #[arg(long)]
    pub country: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub gamma: GammaArgs,
}

fn wide(ids: &[String], first_step: usize, rows: impl Iterator<Item = Vec<f64>>) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["step".to_string()];
    header.extend(ids.iter().cloned());
    let body = rows
        .enumerate()
        .map(|(t, r)| {
            let mut line = vec![(t + first_step).to_string()];
            line.extend(r.into_iter().map(num));
            line
        })
        .collect();
    (header, body)
}

fn write_wide(out: &mut Output, name: &str, table: (Vec<String>, Vec<Vec<String>>)) -> Result<()> {
    let header: Vec<&str> = table.0.iter().map(String::as_str).collect();
    out.csv(name, &header, &table.1)
}

/// Traces run 0 of the ensemble and, with `--runs > 1`, writes the ensemble means.
pub fn simulate(a: &SimulateArgs, ctx: &Ctx, r: &mut Resolver, inputs: &mut Inputs, out: &mut Output) -> Result<Status> {
    let demo = r.get("demo", a.demo.then_some(true), false)?;
    let (config, network, ids): (SimulationConfig, SpilloverNetwork, Vec<String>) = if demo {
        let issues = r.get("issues", a.issues, 50usize)?;
        let edges = r.get("edges", a.edges, 100usize)?;
        let budget = r.get("budget", a.model.budget, 1.0)?;
        let gamma = r.get("gamma", a.gamma.gamma, 1.0)?;
        if issues < 2 {
            bail!("the demo needs at least 2 issues");
        }
        let mut rng = rng_for(ctx.seed, &[]);
        let (mut cfg, net) = demo_instance(issues, edges, &mut rng);
        cfg.budget = budget;
        cfg.gamma = gamma;
        cfg.seed = ctx.seed;
        cfg.max_steps = r.get("max_steps", a.model.max_steps, cfg.max_steps)?;
        let ids: Vec<String> = (0..issues).map(|i| format!("i{i:02}")).collect();
        write_adjacency(&out.path("network.csv"), &ids, &net)?;
        (cfg, net, ids)
    } else {
        let country: String = r.req("country", a.country.clone())?;
        let mut model = a.model.clone();
        model.countries = Some(country);
        let gammas = resolve_gammas(&a.gamma, r, inputs)?;
        let study = build_study(&model, Some(gammas), ctx.seed, ctx.jobs, r, inputs)?;
        let ids = study.panels.model.indicators.clone();
        let m = study.models.into_iter().next().expect("one country selected");
        (m.config, m.network, ids)
    };
    config.validate()?;
    let n = config.n();
    out.csv(
        "targets.csv",
        &["issue", "target", "initial"],
        &(0..n)
            .map(|i| vec![ids[i].clone(), num(config.targets[i]), num(config.initial_indicators[i])])
            .collect::<Vec<_>>(),
    )?;

    let trace = run_seeded(&config.clone().with_seed(run_seed(config.seed, 0)), &network)?;
    let steps = trace.steps;
    write_wide(
        out,
        "indicators.csv",
        wide(&ids, 0, std::iter::once(trace.initial_indicators.clone()).chain((0..steps).map(|t| trace.indicator_row(t).to_vec()))),
    )?;
    write_wide(out, "allocations.csv", wide(&ids, 1, (0..steps).map(|t| trace.allocation_row(t).to_vec())))?;
    write_wide(out, "contributions.csv", wide(&ids, 1, (0..steps).map(|t| trace.contribution_row(t).to_vec())))?;

    let gaps: Vec<f64> = (0..n).map(|i| (config.targets[i] - trace.final_indicators()[i]).abs()).collect();
    let max_gap = gaps.iter().copied().fold(0.0, f64::max);
    let mut summary = String::new();
    let _ = writeln!(summary, "issues: {n}");
    let _ = writeln!(summary, "steps: {steps}");
    let _ = writeln!(summary, "converged: {}", trace.converged);
    let _ = writeln!(summary, "max_terminal_gap: {}", num(max_gap));
    let _ = writeln!(
        summary,
        "issues_within_target_tol: {}",
        gaps.iter().filter(|g| **g < config.target_tol).count()
    );
    let _ = writeln!(summary, "corruption: {}", num(corruption_level(&trace, config.budget)));
    let _ = writeln!(summary, "performance: {}", num(performance_mean(&trace)));

    let mut status = Status::default();
    status.add(1, usize::from(!trace.converged));
    let xs: Vec<f64> = (0..=steps).map(|t| t as f64).collect();
    let mut series: Vec<PlotSeries> = (0..n)
        .map(|i| {
            let y = std::iter::once(trace.initial_indicators[i]).chain((0..steps).map(|t| trace.indicator(t, i))).collect();
            PlotSeries::new(format!("indicator:{}", ids[i]), xs.clone(), y)
        })
        .collect();
    series.extend((0..n).map(|i| {
        PlotSeries::new(
            format!("allocation:{}", ids[i]),
            xs[1..].to_vec(),
            (0..steps).map(|t| trace.allocation(t, i)).collect(),
        )
    }));

    if ctx.runs > 1 {
        let ens = run_monte_carlo(&config, &network, ctx.runs, ctx.jobs)?;
        // run 0 is the trace above, already counted
        status.add(ens.runs.len() - 1, ens.non_converged.saturating_sub(usize::from(!trace.converged)));
        out.csv(
            "ensemble.csv",
            &["issue", "mean_allocation", "std_err", "mean_contribution"],
            &(0..n)
                .map(|i| {
                    vec![
                        ids[i].clone(),
                        num(ens.mean_allocation[i]),
                        num(ens.allocation_std_err[i]),
                        num(ens.mean_contribution[i]),
                    ]
                })
                .collect::<Vec<_>>(),
        )?;
        let _ = writeln!(summary, "ensemble_runs: {}", ens.runs.len());
        let _ = writeln!(summary, "ensemble_non_converged: {}", ens.non_converged);
        let _ = writeln!(summary, "ensemble_corruption: {}", num(ens.mean_corruption));
        let _ = writeln!(summary, "ensemble_performance: {}", num(ens.mean_performance));
        series.push(
            PlotSeries::new("ensemble_allocation", (0..n).map(|i| i as f64).collect(), ens.mean_allocation.clone())
                .with_err(ens.allocation_std_err.clone()),
        );
    }
    out.text("summary.txt", &summary)?;
    out.text("series.txt", &render_series(&series))?;
    Ok(status)
}

#[derive(Args, Debug)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Smallest candidate γ [default: 1]
    #[arg(long)]
    pub gamma_min: Option<f64>,
    /// Largest candidate γ [default: 30]
    #[arg(long)]
    pub gamma_max: Option<f64>,
    /// Evenly spaced candidate values [default: 117]
    #[arg(long)]
    pub gamma_points: Option<usize>,
    /// Random γ subsets sampled by the jump search [default: 10000]
    #[arg(long)]
    pub subsets: Option<usize>,
    #[command(flatten)]
    pub model: ModelArgs,
}

/// Writes calibration.csv (`country,gamma`) plus the search tables.
pub fn calibrate(a: &CalibrateArgs, ctx: &Ctx, r: &mut Resolver, inputs: &mut Inputs, out: &mut Output) -> Result<Status> {
    let gmin = r.get("gamma_min", a.gamma_min, DEFAULT_GAMMA_MIN)?;
    let gmax = r.get("gamma_max", a.gamma_max, DEFAULT_GAMMA_MAX)?;
    let points = r.get("gamma_points", a.gamma_points, DEFAULT_GAMMA_POINTS)?;
    let subsets = r.get("subsets", a.subsets, DEFAULT_SUBSETS)?;
    let grid = GammaGrid::linspace(gmin, gmax, points)?;
    let study = build_study(&a.model, None, ctx.seed, ctx.jobs, r, inputs)?;
    let panels = &study.panels;
    if !panels.has_corruption {
        bail!("the panel has no `{}` indicator to calibrate against", panels.corruption_indicator);
    }
    let emp_all = empirical_corruption_performance(&panels.full, &panels.corruption_indicator)?;
    let empirical: Vec<f64> = study.selected.iter().map(|&c| emp_all.corruption[c]).collect();

    let table = CorruptionTable::compute(&study.models, &grid, ctx.runs, ctx.jobs, ctx.seed)?;
    let cal = run_calibration(&table, &empirical, subsets, ctx.seed, ctx.jobs)?;
    let ids = study.ids();

    out.csv(
        "calibration.csv",
        &["country", "gamma"],
        &ids.iter().zip(&cal.gammas).map(|(c, g)| vec![c.clone(), num(*g)]).collect::<Vec<_>>(),
    )?;
    let jumps = inverse_rmse_jumps(&cal.mse_table)?;
    out.csv(
        "mse_table.csv",
        &["h", "mse", "jump"],
        &cal.mse_table
            .iter()
            .zip(&jumps)
            .enumerate()
            .map(|(h, (m, j))| vec![(h + 1).to_string(), num(*m), num(*j)])
            .collect::<Vec<_>>(),
    )?;
    let mut rows = Vec::with_capacity(ids.len() * grid.len());
    for (c, id) in ids.iter().enumerate() {
        for k in 0..grid.len() {
            rows.push(vec![id.clone(), num(grid.get(k)), num(table.get(c, k))]);
        }
    }
    out.csv("corruption_table.csv", &["country", "gamma", "corruption"], &rows)?;
    out.csv(
        "predicted.csv",
        &["country", "gamma", "empirical", "predicted"],
        &(0..ids.len())
            .map(|c| vec![ids[c].clone(), num(cal.gammas[c]), num(empirical[c]), num(cal.predicted[c])])
            .collect::<Vec<_>>(),
    )?;

    let mut set: Vec<f64> = cal.gammas.clone();
    set.sort_by(f64::total_cmp);
    set.dedup();
    let mut summary = String::new();
    let _ = writeln!(summary, "countries: {}", ids.len());
    let _ = writeln!(summary, "grid: {} values in [{}, {}]", grid.len(), num(gmin), num(gmax));
    let _ = writeln!(summary, "subsets: {subsets}");
    let _ = writeln!(summary, "runs: {}", ctx.runs);
    let _ = writeln!(summary, "reference_country: {}", cal.reference_country);
    let _ = writeln!(summary, "reference_gamma: {}", num(cal.reference_gamma));
    let _ = writeln!(summary, "h_star: {}", cal.h_star);
    let _ = writeln!(summary, "distinct_gammas: {}", cal.distinct);
    let _ = writeln!(
        summary,
        "gamma_set: {}",
        set.iter().map(|g| num(*g)).collect::<Vec<_>>().join(" ")
    );
    let _ = writeln!(summary, "mse: {}", num(cal.mse));
    match r_squared(&empirical, &cal.predicted) {
        Ok(r2) => {
            let _ = writeln!(summary, "r_squared: {}", num(r2));
        }
        Err(e) => eprintln!("warning: no R² for the calibrated fit: {e}"),
    }
    out.text("calibration_summary.txt", &summary)?;
    let hs: Vec<f64> = (1..=cal.mse_table.len()).map(|h| h as f64).collect();
    out.text(
        "series.txt",
        &render_series(&[
            PlotSeries::new("mse", hs, cal.mse_table.clone()),
            PlotSeries::new("predicted_vs_empirical", empirical.clone(), cal.predicted.clone()),
        ]),
    )?;
    let mut status = Status::default();
    status.add(table.runs, table.non_converged);
    Ok(status)
}
