//! Retrospective allocation profiles and development footprints.

use rayon::prelude::*;

use super::outcome::{country_outcome, Outcome};
use super::similarity::weighted_jaccard;
use crate::country::CountryModel;
use crate::data::ClusterAssignment;
use crate::error::{Error, Result};
use crate::model::ensemble::with_pool;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileMode {
    Retrospective,
    /// Chasing the final indicators of `target`.
    Footprint { target: String },
}

/// Mean budget split of one country, also summed and averaged by pillar.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationProfile {
    pub country: String,
    pub mode: ProfileMode,
    pub allocation: Vec<f64>,
    pub std_err: Vec<f64>,
    /// Pillar names in order of first appearance among the issues.
    pub pillars: Vec<String>,
    /// Sum of the issue allocations in each pillar; these add up to `B`.
    pub pillar_totals: Vec<f64>,
    /// Mean issue allocation in each pillar.
    pub pillar_means: Vec<f64>,
    pub runs: usize,
    pub non_converged: usize,
}

impl AllocationProfile {
    pub fn from_outcome(country: &str, mode: ProfileMode, outcome: &Outcome, issue_pillars: &[String]) -> Result<Self> {
        let n = outcome.mean_allocation.len();
        if issue_pillars.len() != n {
            return Err(Error::Shape(format!("{n} issues but {} pillar labels", issue_pillars.len())));
        }
        let mut pillars: Vec<String> = Vec::new();
        let mut totals: Vec<f64> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for (p, &a) in issue_pillars.iter().zip(&outcome.mean_allocation) {
            let k = match pillars.iter().position(|q| q == p) {
                Some(k) => k,
                None => {
                    pillars.push(p.clone());
                    totals.push(0.0);
                    counts.push(0);
                    pillars.len() - 1
                }
            };
            totals[k] += a;
            counts[k] += 1;
        }
        let pillar_means = totals.iter().zip(&counts).map(|(t, &c)| t / c as f64).collect();
        Ok(Self {
            country: country.to_string(),
            mode,
            allocation: outcome.mean_allocation.clone(),
            std_err: outcome.allocation_std_err.clone(),
            pillars,
            pillar_totals: totals,
            pillar_means,
            runs: outcome.runs,
            non_converged: outcome.non_converged,
        })
    }

    /// Pillar with the highest mean issue allocation (first on ties).
    pub fn top_pillar(&self) -> &str {
        let mut best = 0;
        for (k, m) in self.pillar_means.iter().enumerate() {
            if *m > self.pillar_means[best] {
                best = k;
            }
        }
        &self.pillars[best]
    }
}

/// Profile of a retrospective country model (first-year initials, last-year targets).
pub fn retrospective(model: &CountryModel, issue_pillars: &[String], runs: usize, jobs: usize) -> Result<AllocationProfile> {
    let outcome = country_outcome(model, None, runs, jobs)?;
    AllocationProfile::from_outcome(&model.id, ProfileMode::Retrospective, &outcome, issue_pillars)
}

/// A country whose final indicators may serve as targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub id: String,
    pub final_indicators: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FootprintEdge {
    pub follower: String,
    pub target: String,
    /// Weighted Jaccard between the retrospective and the footprint profile.
    pub feasibility: f64,
    /// Top pillar of the follower's footprint profile.
    pub top_pillar: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FootprintReport {
    pub edges: Vec<FootprintEdge>,
    pub profiles: Vec<AllocationProfile>,
    pub most_feasible: String,
    /// Candidate whose final indicators are closest (weighted Jaccard) to the follower's.
    pub trivial_target: String,
}

/// Countries of the cluster ranked just above `follower`'s (labels are 1 for
/// the most developed cluster).
pub fn candidates_above(clusters: &ClusterAssignment, follower: usize) -> Vec<usize> {
    match clusters.labels[follower] {
        1 => Vec::new(),
        l => clusters.members(l - 1),
    }
}

/// Runs the follower's model once per candidate, from its last observed
/// indicators towards the candidate's final ones, keeping its own network
/// and budget.
pub fn footprints(
    follower: &CountryModel,
    last_indicators: &[f64],
    baseline: &AllocationProfile,
    candidates: &[Candidate],
    issue_pillars: &[String],
    runs: usize,
    jobs: usize,
) -> Result<FootprintReport> {
    if candidates.is_empty() {
        return Err(Error::Config(format!("no footprint candidates for `{}`", follower.id)));
    }
    let n = follower.config.n();
    if last_indicators.len() != n {
        return Err(Error::Shape(format!("{n} issues but {} last indicators", last_indicators.len())));
    }
    if let Some(c) = candidates.iter().find(|c| c.final_indicators.len() != n) {
        return Err(Error::Shape(format!("candidate `{}` has {} indicators, expected {n}", c.id, c.final_indicators.len())));
    }
    let outcomes = with_pool(jobs, || {
        candidates
            .par_iter()
            .map(|cand| {
                let mut model = follower.clone();
                model.config.initial_indicators = last_indicators.to_vec();
                model.config.targets = cand.final_indicators.clone();
                let outcome = country_outcome(&model, None, runs, 0)?;
                AllocationProfile::from_outcome(
                    &follower.id,
                    ProfileMode::Footprint { target: cand.id.clone() },
                    &outcome,
                    issue_pillars,
                )
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut edges = Vec::with_capacity(candidates.len());
    let mut best = (f64::NEG_INFINITY, 0);
    let mut trivial = (f64::NEG_INFINITY, 0);
    for (k, (cand, prof)) in candidates.iter().zip(&outcomes).enumerate() {
        let feasibility = weighted_jaccard(&baseline.allocation, &prof.allocation)?;
        if feasibility > best.0 {
            best = (feasibility, k);
        }
        let sim = weighted_jaccard(last_indicators, &cand.final_indicators)?;
        if sim > trivial.0 {
            trivial = (sim, k);
        }
        edges.push(FootprintEdge {
            follower: follower.id.clone(),
            target: cand.id.clone(),
            feasibility,
            top_pillar: prof.top_pillar().to_string(),
        });
    }
    Ok(FootprintReport {
        edges,
        profiles: outcomes,
        most_feasible: candidates[best.1].id.clone(),
        trivial_target: candidates[trivial.1].id.clone(),
    })
}
