//! Re-running ensembles with one mechanism switched off.

use std::fmt;

use rayon::prelude::*;

use super::outcome::{country_outcome, Outcome};
use super::similarity::top10_jaccard;
use super::validation::{corruption_performance_table, CorruptionPerformance};
use crate::country::CountryModel;
use crate::error::{Error, Result};
use crate::model::ensemble::with_pool;
use crate::model::{Government, MechanismToggles, Servants, Spillovers, Supervision};
use crate::stats::spearman_test;

/// Named model specifications compared against the full model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    Full,
    /// Random budget split instead of the adaptive authority.
    NoGovernment,
    /// `C ~ U(0, P)` instead of learning servants.
    NoServants,
    /// Network replaced by the identity scaled by the mean positive weight.
    NoNetwork,
    FixedSupervision(f64),
}

impl Preset {
    pub const DEFAULT_FIXED_SUPERVISION: f64 = 0.5;

    /// The four switches compared against the full model.
    pub fn standard() -> Vec<Preset> {
        vec![
            Preset::NoGovernment,
            Preset::NoServants,
            Preset::NoNetwork,
            Preset::FixedSupervision(Self::DEFAULT_FIXED_SUPERVISION),
        ]
    }

    /// Accepts `full`, `no_government`, `no_servants`, `no_network`,
    /// `fixed_supervision` and `fixed_supervision=<f>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "full" => Preset::Full,
            "no_government" => Preset::NoGovernment,
            "no_servants" => Preset::NoServants,
            "no_network" => Preset::NoNetwork,
            "fixed_supervision" => Preset::FixedSupervision(Self::DEFAULT_FIXED_SUPERVISION),
            _ => match s.strip_prefix("fixed_supervision=") {
                Some(v) => {
                    let f: f64 = v.parse().map_err(|_| Error::Config(format!("bad supervision level `{v}`")))?;
                    if !(0.0..=1.0).contains(&f) {
                        return Err(Error::Config(format!("supervision level {f} is not a probability")));
                    }
                    Preset::FixedSupervision(f)
                }
                None => return Err(Error::Config(format!("unknown sensitivity preset `{s}`"))),
            },
        })
    }

    pub fn toggles(&self, model: &CountryModel) -> MechanismToggles {
        let mut t = MechanismToggles::full();
        match *self {
            Preset::Full => {}
            Preset::NoGovernment => t.government = Government::Random,
            Preset::NoServants => t.servants = Servants::Random,
            Preset::NoNetwork => t.spillovers = Spillovers::IdentityWeighted(model.network.mean_positive_weight()),
            Preset::FixedSupervision(f) => t.supervision = Supervision::Fixed(f),
        }
        t
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Full => write!(f, "full"),
            Preset::NoGovernment => write!(f, "no_government"),
            Preset::NoServants => write!(f, "no_servants"),
            Preset::NoNetwork => write!(f, "no_network"),
            Preset::FixedSupervision(v) => write!(f, "fixed_supervision={v}"),
        }
    }
}

/// Full-model outcomes and one row of outcomes per preset.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub countries: Vec<String>,
    pub presets: Vec<Preset>,
    pub baseline: Vec<Outcome>,
    /// `outcomes[p][c]`.
    pub outcomes: Vec<Vec<Outcome>>,
}

impl SensitivityReport {
    /// Preset minus full model, per country.
    pub fn corruption_deltas(&self, p: usize) -> Vec<f64> {
        self.outcomes[p].iter().zip(&self.baseline).map(|(o, b)| o.corruption - b.corruption).collect()
    }

    pub fn performance_deltas(&self, p: usize) -> Vec<f64> {
        self.outcomes[p].iter().zip(&self.baseline).map(|(o, b)| o.performance - b.performance).collect()
    }

    /// Top-10 Jaccard between the full and the preset profile of each country.
    pub fn top10(&self, p: usize) -> Result<Vec<f64>> {
        self.outcomes[p]
            .iter()
            .zip(&self.baseline)
            .map(|(o, b)| top10_jaccard(&b.mean_allocation, &o.mean_allocation))
            .collect()
    }

    pub fn corruption_performance(&self, p: usize) -> Result<CorruptionPerformance> {
        corruption_performance_table(&self.countries, &self.outcomes[p])
    }
}

/// Runs the full model and every preset for every country. Each preset of a
/// country reuses the country's seed, so `Preset::Full` reproduces the
/// baseline exactly.
pub fn sensitivity_suite(countries: &[CountryModel], presets: &[Preset], runs: usize, jobs: usize) -> Result<SensitivityReport> {
    let all: Vec<Preset> = std::iter::once(Preset::Full).chain(presets.iter().copied()).collect();
    let nc = countries.len();
    let jobs_list: Vec<(usize, usize)> = (0..all.len()).flat_map(|p| (0..nc).map(move |c| (p, c))).collect();
    let flat = with_pool(jobs, || {
        jobs_list
            .par_iter()
            .map(|&(p, c)| country_outcome(&countries[c], Some(all[p].toggles(&countries[c])), runs, 0))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut rows: Vec<Vec<Outcome>> = flat.chunks(nc.max(1)).map(|c| c.to_vec()).collect();
    if nc == 0 {
        rows = vec![Vec::new(); all.len()];
    }
    let baseline = rows.remove(0);
    Ok(SensitivityReport {
        countries: countries.iter().map(|c| c.id.clone()).collect(),
        presets: presets.to_vec(),
        baseline,
        outcomes: rows,
    })
}

/// Observations pooled into one bin of incoming strength.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub mean_strength: f64,
    pub mean_value: f64,
}

/// Equal-width bins of `strength` over its observed range. A bin with fewer
/// than `min_count` observations is merged into the next one; a short last
/// bin is merged into its left neighbour.
pub fn strength_bins(strength: &[f64], values: &[f64], bins: usize, min_count: usize) -> Result<Vec<StrengthBin>> {
    if strength.len() != values.len() {
        return Err(Error::Shape(format!("{} strengths but {} values", strength.len(), values.len())));
    }
    if strength.is_empty() || bins == 0 {
        return Err(Error::TooFewObservations { needed: 1, got: strength.len() });
    }
    let lo = strength.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = strength.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); bins];
    for (i, &s) in strength.iter().enumerate() {
        let b = if width > 0.0 { (((s - lo) / width) as usize).min(bins - 1) } else { 0 };
        members[b].push(i);
    }
    let edge = |b: usize| if b == bins { hi } else { lo + width * b as f64 };

    let mut groups: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    let mut start = 0;
    let mut acc: Vec<usize> = Vec::new();
    for (b, m) in members.iter().enumerate() {
        acc.extend(m);
        if acc.len() >= min_count {
            groups.push((start, b + 1, std::mem::take(&mut acc)));
            start = b + 1;
        }
    }
    if !acc.is_empty() || groups.is_empty() {
        match groups.last_mut() {
            Some(last) => {
                last.1 = bins;
                last.2.extend(acc);
            }
            None => groups.push((0, bins, acc)),
        }
    } else if let Some(last) = groups.last_mut() {
        last.1 = bins;
    }

    Ok(groups
        .into_iter()
        .map(|(b0, b1, idx)| {
            let n = idx.len() as f64;
            StrengthBin {
                lo: edge(b0),
                hi: edge(b1),
                count: idx.len(),
                mean_strength: idx.iter().map(|&i| strength[i]).sum::<f64>() / n,
                mean_value: idx.iter().map(|&i| values[i]).sum::<f64>() / n,
            }
        })
        .collect())
}

pub const STRENGTH_BINS: usize = 20;
pub const MIN_BIN_COUNT: usize = 3;

/// Country-issue points of `γ Σ_j A_ji` against the mean contribution, their
/// bins, and Spearman tests on the bin means and on the raw points.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthContribution {
    pub strength: Vec<f64>,
    pub contribution: Vec<f64>,
    pub bins: Vec<StrengthBin>,
    /// On the bin means.
    pub spearman: f64,
    pub p_value: f64,
    /// On the country-issue points.
    pub point_spearman: f64,
    pub point_p_value: f64,
}

/// Strength is always taken from the estimated network, also for runs where
/// spillovers were switched off.
pub fn strength_contribution(countries: &[CountryModel], outcomes: &[Outcome]) -> Result<StrengthContribution> {
    if countries.len() != outcomes.len() {
        return Err(Error::Shape(format!("{} countries but {} outcomes", countries.len(), outcomes.len())));
    }
    let mut strength = Vec::new();
    let mut contribution = Vec::new();
    for (m, o) in countries.iter().zip(outcomes) {
        strength.extend(m.network.in_strengths().iter().map(|s| m.config.gamma * s));
        contribution.extend_from_slice(&o.mean_contribution);
    }
    let bins = strength_bins(&strength, &contribution, STRENGTH_BINS, MIN_BIN_COUNT)?;
    let xs: Vec<f64> = bins.iter().map(|b| b.mean_strength).collect();
    let ys: Vec<f64> = bins.iter().map(|b| b.mean_value).collect();
    let (spearman, p_value) = spearman_test(&xs, &ys)?;
    let (point_spearman, point_p_value) = spearman_test(&strength, &contribution)?;
    Ok(StrengthContribution {
        strength,
        contribution,
        bins,
        spearman,
        p_value,
        point_spearman,
        point_p_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_names_round_trip() {
        for p in [Preset::Full, Preset::NoGovernment, Preset::NoServants, Preset::NoNetwork, Preset::FixedSupervision(0.25)] {
            assert_eq!(Preset::parse(&p.to_string()).unwrap(), p);
        }
        assert_eq!(Preset::parse("fixed_supervision").unwrap(), Preset::FixedSupervision(0.5));
        assert!(Preset::parse("fixed_supervision=2").is_err());
        assert!(Preset::parse("nope").is_err());
    }

    #[test]
    fn bins_merge_rightward_and_last_leftward() {
        // 4 equal-width bins on [0, 4]: counts 1, 3, 0, 1
        let s = [0.5, 1.1, 1.5, 1.9, 4.0];
        let v = [1.0, 2.0, 2.0, 2.0, 9.0];
        let b = strength_bins(&s, &v, 4, 3).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].count, 5);
        let s = [0.0, 0.2, 0.3, 1.1, 1.2, 3.9, 4.0];
        let b = strength_bins(&s, &[0.0; 7], 4, 3).unwrap();
        assert_eq!(b.iter().map(|x| x.count).collect::<Vec<_>>(), vec![3, 4]);
        assert_eq!((b[1].lo, b[1].hi), (1.0, 4.0));
        assert!((b[0].mean_strength - 0.5 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_value_strengths() {
        let b = strength_bins(&[2.0; 4], &[1.0, 2.0, 3.0, 4.0], 20, 3).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].mean_value, 2.5);
    }
}
