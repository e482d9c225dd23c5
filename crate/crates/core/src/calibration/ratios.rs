use super::table::CorruptionTable;
use crate::error::{Error, Result};

/// Best classification found by the ratios search.
#[derive(Debug, Clone, PartialEq)]
pub struct RatiosResult {
    pub reference: usize,
    /// Grid index of the reference country's γ.
    pub reference_gamma: usize,
    /// Grid index of the γ assigned to each country.
    pub assignment: Vec<usize>,
    /// `(1/S) Σ_e (I_e/I_r − D̄_e/D̄_r)²` over all S countries, the reference included.
    pub mse: f64,
}

impl RatiosResult {
    pub fn distinct(&self) -> usize {
        let mut v = self.assignment.clone();
        v.sort_unstable();
        v.dedup();
        v.len()
    }
}

/// Ratios search restricted to the grid indices in `subset`.
///
/// For each reference `r` with `I_r ≠ 0` and each reference γ, every other
/// country independently takes the γ of `subset` that minimizes
/// `|I_e/I_r − D̄_e(γ)/D̄_r(γ_r)|`. The pass with the lowest MSE wins; ties
/// keep the first one found (lowest reference, then lowest γ; within a
/// country, lowest γ).
pub fn ratios_on_subset(table: &CorruptionTable, empirical: &[f64], subset: &[usize]) -> Result<RatiosResult> {
    let s = table.n_countries();
    if empirical.len() != s {
        return Err(Error::Shape(format!("{s} countries but {} empirical values", empirical.len())));
    }
    if subset.is_empty() {
        return Err(Error::Config("the gamma subset is empty".into()));
    }
    if let Some(&bad) = subset.iter().find(|&&k| k >= table.grid.len()) {
        return Err(Error::Config(format!("gamma index {bad} is outside the grid")));
    }
    let mut best: Option<RatiosResult> = None;
    let mut assignment = vec![0usize; s];
    for r in 0..s {
        if empirical[r] == 0.0 {
            continue;
        }
        for &gr in subset {
            let dr = table.get(r, gr);
            if dr == 0.0 || !dr.is_finite() {
                continue;
            }
            let mut sse = 0.0;
            for e in 0..s {
                if e == r {
                    assignment[e] = gr;
                    continue;
                }
                let target = empirical[e] / empirical[r];
                let mut pick = (f64::INFINITY, subset[0]);
                for &ge in subset {
                    let err = (target - table.get(e, ge) / dr).abs();
                    if err < pick.0 {
                        pick = (err, ge);
                    }
                }
                assignment[e] = pick.1;
                sse += pick.0 * pick.0;
            }
            let mse = sse / s as f64;
            if best.as_ref().map_or(true, |b| mse < b.mse) {
                best = Some(RatiosResult {
                    reference: r,
                    reference_gamma: gr,
                    assignment: assignment.clone(),
                    mse,
                });
            }
        }
    }
    best.ok_or(Error::Undefined("no usable reference: every empirical or simulated reference value is zero"))
}

/// Ratios search over the whole grid.
pub fn ratios_method(table: &CorruptionTable, empirical: &[f64]) -> Result<RatiosResult> {
    let all: Vec<usize> = (0..table.grid.len()).collect();
    ratios_on_subset(table, empirical, &all)
}
