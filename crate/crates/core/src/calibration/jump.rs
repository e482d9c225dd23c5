//! Choosing how many distinct γ values to use.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use super::ratios::{ratios_on_subset, RatiosResult};
use super::table::CorruptionTable;
use crate::error::{Error, Result};
use crate::model::ensemble::with_pool;
use crate::seeds::rng_for;

pub const DEFAULT_SUBSETS: usize = 10_000;

/// Jumps `MSE_h^{-1/2} − MSE_{h−1}^{-1/2}` with `MSE_0^{-1/2} = 0`.
///
/// A zero MSE has infinite inverse RMSE; the first such entry gets an
/// infinite jump and later ones a jump of zero.
pub fn inverse_rmse_jumps(mse: &[f64]) -> Result<Vec<f64>> {
    if mse.is_empty() {
        return Err(Error::Config("the MSE table is empty".into()));
    }
    if let Some(bad) = mse.iter().find(|m| m.is_nan() || **m < 0.0) {
        return Err(Error::Domain {
            name: "mse",
            value: *bad,
            domain: "[0, ∞)",
        });
    }
    let inv: Vec<f64> = mse.iter().map(|&m| if m == 0.0 { f64::INFINITY } else { m.powf(-0.5) }).collect();
    let mut prev = 0.0;
    Ok(inv
        .iter()
        .map(|&v| {
            let j = if v.is_infinite() && prev == f64::INFINITY { 0.0 } else { v - prev };
            prev = v;
            j
        })
        .collect())
}

/// `h*`, the 1-based size with the largest jump (first on ties).
pub fn jump_method(mse: &[f64]) -> Result<usize> {
    let jumps = inverse_rmse_jumps(mse)?;
    let mut best = 0;
    for (h, j) in jumps.iter().enumerate() {
        if *j > jumps[best] {
            best = h;
        }
    }
    Ok(best + 1)
}

/// Best classification found using at most `size` distinct γ values.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeBest {
    pub size: usize,
    pub mse: f64,
    /// Grid indices of the proposed subset that produced `result`.
    pub subset: Vec<usize>,
    pub result: RatiosResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpOutcome {
    /// Entry `h − 1` holds the best sampled classification with `≤ h` distinct γ.
    pub table: Vec<SizeBest>,
    pub h_star: usize,
    pub selected: SizeBest,
}

impl JumpOutcome {
    pub fn mse_table(&self) -> Vec<f64> {
        self.table.iter().map(|s| s.mse).collect()
    }
}

/// Draws `subsets` random subsets of the grid (sizes log-uniform on
/// `1..=|Γ|`), plus every singleton and the full grid, and runs the ratios
/// search on each. A result is filed under the number of distinct γ it
/// actually assigns, which is at most `min(|Γ|, countries)`; the jump rule is
/// applied to the best-per-size table.
pub fn jump_search(table: &CorruptionTable, empirical: &[f64], subsets: usize, seed: u64, jobs: usize) -> Result<JumpOutcome> {
    let g = table.grid.len();
    let mut rng = rng_for(seed, &[]);
    let mut samples: Vec<Vec<usize>> = (0..g).map(|k| vec![k]).collect();
    samples.push((0..g).collect());
    let log_max = ((g + 1) as f64).ln();
    for _ in 0..subsets {
        let h = ((rng.gen::<f64>() * log_max).exp().floor() as usize).clamp(1, g);
        let mut s = sample(&mut rng, g, h).into_vec();
        s.sort_unstable();
        samples.push(s);
    }
    let results = with_pool(jobs, || {
        samples
            .par_iter()
            .map(|s| ratios_on_subset(table, empirical, s))
            .collect::<Result<Vec<_>>>()
    })?;

    let cap = g.min(table.n_countries());
    let mut per_size: Vec<Option<SizeBest>> = vec![None; cap];
    for (s, r) in samples.into_iter().zip(results) {
        let h = r.distinct();
        let slot = &mut per_size[h - 1];
        if slot.as_ref().map_or(true, |b| r.mse < b.mse) {
            *slot = Some(SizeBest {
                size: h,
                mse: r.mse,
                subset: s,
                result: r,
            });
        }
    }
    let mut monotone: Vec<SizeBest> = Vec::with_capacity(cap);
    for h in 0..cap {
        let carried = monotone.last().cloned();
        let entry = match (per_size[h].take(), carried) {
            (Some(own), Some(prev)) if prev.mse <= own.mse => SizeBest { size: h + 1, ..prev },
            (Some(own), _) => own,
            (None, Some(prev)) => SizeBest { size: h + 1, ..prev },
            (None, None) => unreachable!("singletons are always sampled"),
        };
        monotone.push(entry);
    }
    let mse: Vec<f64> = monotone.iter().map(|s| s.mse).collect();
    let h_star = jump_method(&mse)?;
    let selected = monotone[h_star - 1].clone();
    Ok(JumpOutcome {
        table: monotone,
        h_star,
        selected,
    })
}
