use std::fmt::Write as _;

use anyhow::{bail, Result};
use clap::Args;
use ppi_core::analysis::{
    candidates_above, corruption_performance_table, country_outcome, empirical_corruption_performance, footprints,
    render_series, sensitivity_suite, strength_contribution, AllocationProfile, Candidate, CorruptionPerformance,
    FootprintReport, Outcome, PlotSeries, Preset, ProfileMode,
};
use ppi_core::data::ward;
use ppi_core::model::ensemble::with_pool;
use rayon::prelude::*;

use crate::config::Resolver;
use crate::manifest::{Inputs, Output};
use crate::study::{build_study, resolve_gammas, GammaArgs, ModelArgs, Study};
use crate::{num, Common, Ctx, Status};

#[derive(Args, Debug)]
pub struct RetrospectiveArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub gamma: GammaArgs,
}

fn load(model: &ModelArgs, gamma: &GammaArgs, ctx: &Ctx, r: &mut Resolver, inputs: &mut Inputs) -> Result<Study> {
    let gammas = resolve_gammas(gamma, r, inputs)?;
    build_study(model, Some(gammas), ctx.seed, ctx.jobs, r, inputs)
}

fn outcomes(study: &Study, runs: usize, jobs: usize) -> Result<Vec<Outcome>> {
    with_pool(jobs, || {
        study
            .models
            .par_iter()
            .map(|m| country_outcome(m, None, runs, 0))
            .collect::<ppi_core::Result<Vec<_>>>()
    })
    .map_err(Into::into)
}

fn index(v: usize) -> Vec<f64> {
    (0..v).map(|i| i as f64).collect()
}

fn profile_rows(p: &AllocationProfile, issues: &[String], issue_pillars: &[String], lead: &[String]) -> Vec<Vec<String>> {
    (0..issues.len())
        .map(|i| {
            let mut row = lead.to_vec();
            row.extend([
                issues[i].clone(),
                issue_pillars[i].clone(),
                num(p.allocation[i]),
                num(p.std_err[i]),
            ]);
            row
        })
        .collect()
}

/// Simulated and, when the panel has the corruption indicator, empirical
/// corruption-performance tables for the simulated countries.
fn corruption_tables(study: &Study, outs: &[Outcome]) -> (Option<CorruptionPerformance>, Option<CorruptionPerformance>) {
    let ids = study.ids();
    let sim = corruption_performance_table(&ids, outs)
        .map_err(|e| eprintln!("warning: no simulated corruption-performance correlation: {e}"))
        .ok();
    let panels = &study.panels;
    let emp = if panels.has_corruption {
        empirical_corruption_performance(&panels.full, &panels.corruption_indicator)
            .and_then(|all| {
                CorruptionPerformance::new(
                    ids.clone(),
                    study.selected.iter().map(|&c| all.corruption[c]).collect(),
                    study.selected.iter().map(|&c| all.performance[c]).collect(),
                )
            })
            .map_err(|e| eprintln!("warning: no empirical corruption-performance correlation: {e}"))
            .ok()
    } else {
        eprintln!("warning: the panel has no `{}` indicator; skipping the empirical table", panels.corruption_indicator);
        None
    };
    (sim, emp)
}

/// Writes profiles.csv, pillars.csv, corruption_performance.csv, a summary and plot series.
pub fn retrospective(a: &RetrospectiveArgs, ctx: &Ctx, r: &mut Resolver, inputs: &mut Inputs, out: &mut Output) -> Result<Status> {
    let study = load(&a.model, &a.gamma, ctx, r, inputs)?;
    let outs = outcomes(&study, ctx.runs, ctx.jobs)?;
    let issues = &study.panels.model.indicators;
    let issue_pillars = study.issue_pillars();
    let ids = study.ids();
    let profiles: Vec<AllocationProfile> = ids
        .iter()
        .zip(&outs)
        .map(|(id, o)| AllocationProfile::from_outcome(id, ProfileMode::Retrospective, o, issue_pillars))
        .collect::<ppi_core::Result<_>>()?;

    let mut rows = Vec::new();
    let mut pillar_rows = Vec::new();
    let mut series = Vec::new();
    let mut status = Status::default();
    for p in &profiles {
        rows.extend(profile_rows(p, issues, issue_pillars, &[p.country.clone()]));
        for (k, name) in p.pillars.iter().enumerate() {
            pillar_rows.push(vec![p.country.clone(), name.clone(), num(p.pillar_totals[k]), num(p.pillar_means[k])]);
        }
        series.push(PlotSeries::new(format!("profile:{}", p.country), index(issues.len()), p.allocation.clone()).with_err(p.std_err.clone()));
        series.push(PlotSeries::new(format!("pillars:{}", p.country), index(p.pillars.len()), p.pillar_totals.clone()));
        status.add(p.runs, p.non_converged);
    }
    out.csv("profiles.csv", &["country", "issue", "pillar", "allocation", "std_err"], &rows)?;
    out.csv("pillars.csv", &["country", "pillar", "total", "mean"], &pillar_rows)?;

    let (sim, emp) = corruption_tables(&study, &outs);
    let cp_rows: Vec<Vec<String>> = (0..ids.len())
        .map(|c| {
            let (ec, ep) = match &emp {
                Some(e) => (num(e.corruption[c]), num(e.performance[c])),
                None => (String::new(), String::new()),
            };
            vec![ids[c].clone(), num(outs[c].corruption), num(outs[c].performance), ec, ep]
        })
        .collect();
    out.csv(
        "corruption_performance.csv",
        &["country", "simulated_corruption", "simulated_performance", "empirical_corruption", "empirical_performance"],
        &cp_rows,
    )?;

    let mut summary = String::new();
    let _ = writeln!(summary, "countries: {}", ids.len());
    let _ = writeln!(summary, "runs_per_country: {}", ctx.runs);
    let _ = writeln!(summary, "non_converged: {}", status.non_converged);
    for (label, t) in [("simulated", &sim), ("empirical", &emp)] {
        if let Some(t) = t {
            let _ = writeln!(summary, "{label}_spearman: {}", num(t.spearman));
            let _ = writeln!(summary, "{label}_p_value: {}", num(t.p_value));
            series.push(PlotSeries::new(format!("corruption_performance:{label}"), t.corruption.clone(), t.performance.clone()));
        }
    }
    for p in &profiles {
        let _ = writeln!(summary, "top_pillar {}: {}", p.country, p.top_pillar());
    }
    out.text("retrospective_summary.txt", &summary)?;
    out.text("series.txt", &render_series(&series))?;
    Ok(status)
}

#[derive(Args, Debug)]
pub struct ProspectiveArgs {
    #[command(flatten)]
    pub common: Common,
    /// Ward clusters over the time-averaged indicators [default: 4]
    #[arg(long)]
    pub clusters: Option<usize>,
    /// Comma-separated followers [default: every country outside the top cluster]
    #[arg(long)]
    pub followers: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub gamma: GammaArgs,
}

/// Writes clusters.csv, footprints.csv (the follower → target edge list),
/// footprint_targets.csv and the footprint profiles.
pub fn prospective(a: &ProspectiveArgs, ctx: &Ctx, r: &mut Resolver, inputs: &mut Inputs, out: &mut Output) -> Result<Status> {
    let k = r.get("clusters", a.clusters, 4usize)?;
    let follower_list: Option<String> = r.opt("followers", a.followers.clone())?;
    let study = load(&a.model, &a.gamma, ctx, r, inputs)?;
    let panel = &study.panels.model;
    let ids = study.ids();
    let last_year = panel.n_years() - 1;
    let features: Vec<Vec<f64>> = study.selected.iter().map(|&c| panel.time_average(c)).collect();
    let clusters = ward(&features, k)?;
    let last: Vec<Vec<f64>> = study.selected.iter().map(|&c| panel.year_slice(c, last_year).to_vec()).collect();

    let followers: Vec<usize> = match &follower_list {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|f| match ids.iter().position(|id| id == f) {
                Some(p) => Ok(p),
                None => bail!("follower `{f}` is not among the simulated countries"),
            })
            .collect::<Result<_>>()?,
        None => (0..ids.len()).filter(|&p| clusters.labels[p] > 1).collect(),
    };
    let issue_pillars = study.issue_pillars();
    let reports: Vec<(AllocationProfile, FootprintReport)> = with_pool(ctx.jobs, || {
        followers
            .par_iter()
            .map(|&f| -> Result<_> {
                let model = &study.models[f];
                let base = country_outcome(model, None, ctx.runs, 0)?;
                let baseline = AllocationProfile::from_outcome(&model.id, ProfileMode::Retrospective, &base, issue_pillars)?;
                let candidates: Vec<Candidate> = candidates_above(&clusters, f)
                    .into_iter()
                    .map(|c| Candidate {
                        id: ids[c].clone(),
                        final_indicators: last[c].clone(),
                    })
                    .collect();
                let rep = footprints(model, &last[f], &baseline, &candidates, issue_pillars, ctx.runs, 0)?;
                Ok((baseline, rep))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    out.csv(
        "clusters.csv",
        &["country", "cluster"],
        &ids.iter().zip(&clusters.labels).map(|(c, l)| vec![c.clone(), l.to_string()]).collect::<Vec<_>>(),
    )?;
    let mut edges = Vec::new();
    let mut targets = Vec::new();
    let mut prof_rows = Vec::new();
    let mut status = Status::default();
    let mut differs = 0;
    let mut series = Vec::new();
    for (&f, (baseline, rep)) in followers.iter().zip(&reports) {
        status.add(baseline.runs, baseline.non_converged);
        prof_rows.extend(profile_rows(baseline, &panel.indicators, issue_pillars, &[ids[f].clone(), String::new()]));
        for e in &rep.edges {
            edges.push(vec![e.follower.clone(), e.target.clone(), num(e.feasibility), e.top_pillar.clone()]);
        }
        for p in &rep.profiles {
            status.add(p.runs, p.non_converged);
            if let ProfileMode::Footprint { target } = &p.mode {
                prof_rows.extend(profile_rows(p, &panel.indicators, issue_pillars, &[ids[f].clone(), target.clone()]));
            }
        }
        let d = rep.most_feasible != rep.trivial_target;
        differs += usize::from(d);
        targets.push(vec![
            ids[f].clone(),
            clusters.labels[f].to_string(),
            rep.most_feasible.clone(),
            rep.trivial_target.clone(),
            d.to_string(),
        ]);
        series.push(PlotSeries::new(
            format!("feasibility:{}", ids[f]),
            index(rep.edges.len()),
            rep.edges.iter().map(|e| e.feasibility).collect(),
        ));
    }
    out.csv("footprints.csv", &["follower", "target", "feasibility", "top_pillar"], &edges)?;
    out.csv(
        "footprint_targets.csv",
        &["follower", "cluster", "most_feasible", "trivial_target", "differs"],
        &targets,
    )?;
    out.csv(
        "footprint_profiles.csv",
        &["follower", "target", "issue", "pillar", "allocation", "std_err"],
        &prof_rows,
    )?;
    let mut summary = String::new();
    let _ = writeln!(summary, "countries: {}", ids.len());
    let _ = writeln!(summary, "clusters: {k}");
    let _ = writeln!(summary, "followers: {}", followers.len());
    let _ = writeln!(summary, "footprint_edges: {}", edges.len());
    let _ = writeln!(summary, "most_feasible_differs_from_trivial: {differs}");
    let _ = writeln!(summary, "runs_per_ensemble: {}", ctx.runs);
    let _ = writeln!(summary, "non_converged: {}", status.non_converged);
    out.text("prospective_summary.txt", &summary)?;
    out.text("series.txt", &render_series(&series))?;
    Ok(status)
}

#[derive(Args, Debug)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated presets: no_government, no_servants, no_network, fixed_supervision[=f], full
    /// [default: no_government,no_servants,no_network,fixed_supervision=0.5]
    #[arg(long)]
    pub presets: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub gamma: GammaArgs,
}

/// Writes deltas, correlations, strength bins and top-10 overlaps per preset.
pub fn sensitivity(a: &SensitivityArgs, ctx: &Ctx, r: &mut Resolver, inputs: &mut Inputs, out: &mut Output) -> Result<Status> {
    let standard = Preset::standard().iter().map(Preset::to_string).collect::<Vec<_>>().join(",");
    let list: String = r.get("presets", a.presets.clone(), standard)?;
    let presets: Vec<Preset> = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(Preset::parse)
        .collect::<ppi_core::Result<_>>()?;
    if presets.is_empty() {
        bail!("no presets given");
    }
    let study = load(&a.model, &a.gamma, ctx, r, inputs)?;
    let report = sensitivity_suite(&study.models, &presets, ctx.runs, ctx.jobs)?;
    let ids = study.ids();

    let mut status = Status::default();
    let mut deltas = Vec::new();
    for (c, b) in report.baseline.iter().enumerate() {
        status.add(b.runs, b.non_converged);
        deltas.push(vec!["full".into(), ids[c].clone(), num(b.corruption), num(b.performance), "0".into(), "0".into()]);
    }
    for (p, preset) in presets.iter().enumerate() {
        let dc = report.corruption_deltas(p);
        let dp = report.performance_deltas(p);
        for (c, o) in report.outcomes[p].iter().enumerate() {
            status.add(o.runs, o.non_converged);
            deltas.push(vec![preset.to_string(), ids[c].clone(), num(o.corruption), num(o.performance), num(dc[c]), num(dp[c])]);
        }
    }
    out.csv(
        "sensitivity_deltas.csv",
        &["preset", "country", "corruption", "performance", "delta_corruption", "delta_performance"],
        &deltas,
    )?;

    let labelled: Vec<(String, &Vec<Outcome>)> = std::iter::once(("full".to_string(), &report.baseline))
        .chain(presets.iter().map(Preset::to_string).zip(&report.outcomes))
        .collect();
    let mut corr_rows = Vec::new();
    let mut bin_rows = Vec::new();
    let mut test_rows = Vec::new();
    let mut series = Vec::new();
    let mut summary = String::new();
    let _ = writeln!(summary, "countries: {}", ids.len());
    let _ = writeln!(summary, "runs_per_ensemble: {}", ctx.runs);
    for (name, outs) in &labelled {
        match corruption_performance_table(&ids, outs) {
            Ok(t) => corr_rows.push(vec![name.clone(), num(t.spearman), num(t.p_value)]),
            Err(e) => {
                eprintln!("warning: {name}: no corruption-performance correlation: {e}");
                corr_rows.push(vec![name.clone(), String::new(), String::new()]);
            }
        }
        match strength_contribution(&study.models, outs) {
            Ok(s) => {
                for (b, bin) in s.bins.iter().enumerate() {
                    bin_rows.push(vec![
                        name.clone(),
                        b.to_string(),
                        num(bin.lo),
                        num(bin.hi),
                        bin.count.to_string(),
                        num(bin.mean_strength),
                        num(bin.mean_value),
                    ]);
                }
                test_rows.push(vec![
                    name.clone(),
                    s.bins.len().to_string(),
                    num(s.spearman),
                    num(s.p_value),
                    num(s.point_spearman),
                    num(s.point_p_value),
                ]);
                series.push(PlotSeries::new(
                    format!("strength_contribution:{name}"),
                    s.bins.iter().map(|b| b.mean_strength).collect(),
                    s.bins.iter().map(|b| b.mean_value).collect(),
                ));
            }
            Err(e) => eprintln!("warning: {name}: no strength-contribution test: {e}"),
        }
    }
    out.csv("sensitivity_correlations.csv", &["preset", "spearman", "p_value"], &corr_rows)?;
    out.csv(
        "strength_bins.csv",
        &["preset", "bin", "lo", "hi", "count", "mean_strength", "mean_contribution"],
        &bin_rows,
    )?;
    out.csv(
        "strength_tests.csv",
        &["preset", "bins", "binned_spearman", "binned_p_value", "point_spearman", "point_p_value"],
        &test_rows,
    )?;

    let mut top_rows = Vec::new();
    for (p, preset) in presets.iter().enumerate() {
        match report.top10(p) {
            Ok(j) => {
                let mean = j.iter().sum::<f64>() / j.len() as f64;
                let _ = writeln!(summary, "mean_top10_jaccard {preset}: {}", num(mean));
                for (c, v) in j.iter().enumerate() {
                    top_rows.push(vec![preset.to_string(), ids[c].clone(), num(*v)]);
                }
                series.push(PlotSeries::new(format!("top10:{preset}"), index(j.len()), j));
            }
            Err(e) => eprintln!("warning: {preset}: no top-10 Jaccard: {e}"),
        }
    }
    out.csv("top10.csv", &["preset", "country", "jaccard"], &top_rows)?;
    for row in &corr_rows {
        let _ = writeln!(summary, "corruption_performance_spearman {}: {}", row[0], row[1]);
    }
    for row in &test_rows {
        let _ = writeln!(summary, "strength_contribution {}: spearman {} p {}", row[0], row[2], row[3]);
    }
    let _ = writeln!(summary, "non_converged: {}", status.non_converged);
    out.text("sensitivity_summary.txt", &summary)?;
    out.text("series.txt", &render_series(&series))?;
    Ok(status)
}
