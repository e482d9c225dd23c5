//! Min–max scaling with the percentile rule for skewed indicators, and
//! orientation against GDP per capita.

use super::panel::IndicatorPanel;
use crate::error::{Error, Result};
use crate::stats::pearson;

/// Outcome of scaling one indicator.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub values: Vec<f64>,
    /// The percentile rule replaced the maximum or the minimum.
    pub skew_corrected: bool,
}

/// Nearest-rank percentile `sorted[⌈p·n⌉ − 1]` of an ascending slice.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

/// Scales `raw` to `[0, 1]` using its pooled min and max. When the scaled
/// mean falls below 0.2 the 96th percentile replaces the max; above 0.8 the
/// 4th percentile replaces the min. Results are clipped to `[0, 1]`.
pub fn normalize_indicator(name: &str, raw: &[f64], skew_rule: bool) -> Result<Normalized> {
    let mut sorted = raw.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (Some(&lo), Some(&hi)) = (sorted.first(), sorted.last()) else {
        return Err(Error::ConstantIndicator(name.to_string()));
    };
    if hi <= lo {
        return Err(Error::ConstantIndicator(name.to_string()));
    }
    let scale = |lo: f64, hi: f64| -> Vec<f64> { raw.iter().map(|v| ((v - lo) / (hi - lo)).clamp(0.0, 1.0)).collect() };
    let values = scale(lo, hi);
    if !skew_rule {
        return Ok(Normalized {
            values,
            skew_corrected: false,
        });
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let (lo2, hi2) = if mean < 0.2 {
        (lo, percentile(&sorted, 0.96))
    } else if mean > 0.8 {
        (percentile(&sorted, 0.04), hi)
    } else {
        return Ok(Normalized {
            values,
            skew_corrected: false,
        });
    };
    if hi2 <= lo2 {
        // the percentile collapsed onto the other end; plain scaling is all we can do
        return Ok(Normalized {
            values,
            skew_corrected: false,
        });
    }
    Ok(Normalized {
        values: scale(lo2, hi2),
        skew_corrected: true,
    })
}

/// Inverts `values` (`v ↦ 1 − v`) when their correlation with `gdp` is
/// strictly negative. Returns whether the inversion happened.
pub fn orient_indicator(values: &mut [f64], gdp: &[f64]) -> Result<bool> {
    if values.len() != gdp.len() {
        return Err(Error::Shape(format!("{} values but {} GDP observations", values.len(), gdp.len())));
    }
    let r = pearson(values, gdp).unwrap_or(0.0);
    if r < 0.0 {
        values.iter_mut().for_each(|v| *v = 1.0 - *v);
        Ok(true)
    } else {
        Ok(false)
    }
}

/// Normalizes every indicator of `panel` over the pooled country-year sample and,
/// when `gdp` is given (`[country][year]`), orients it so that higher is better.
pub fn normalize_panel(panel: &IndicatorPanel, gdp: Option<&[Vec<f64>]>, skew_rule: bool) -> Result<IndicatorPanel> {
    let mut out = panel.clone();
    let pooled_gdp: Option<Vec<f64>> = match gdp {
        Some(g) => {
            if g.len() != panel.n_countries() || g.iter().any(|row| row.len() != panel.n_years()) {
                return Err(Error::Shape("GDP series must cover every country-year of the panel".into()));
            }
            Some(g.iter().flatten().copied().collect())
        }
        None => None,
    };
    for k in 0..panel.n_indicators() {
        let raw = panel.pooled(k);
        let mut norm = normalize_indicator(&panel.indicators[k], &raw, skew_rule)?;
        let switched = match &pooled_gdp {
            Some(g) => orient_indicator(&mut norm.values, g)?,
            None => false,
        };
        let mut it = norm.values.into_iter();
        for c in 0..panel.n_countries() {
            for y in 0..panel.n_years() {
                out.set_value(c, y, k, it.next().expect("pooled length"));
            }
        }
        // flags accumulate so a second pass over normalized data keeps them
        out.n2[k] = panel.n2[k] || norm.skew_corrected;
        out.switched[k] = panel.switched[k] ^ switched;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_min_max() {
        let n = normalize_indicator("x", &[2.0, 4.0, 10.0], true).unwrap();
        assert_eq!(n.values, vec![0.0, 0.25, 1.0]);
        assert!(!n.skew_corrected);
    }

    #[test]
    fn constant_is_rejected() {
        match normalize_indicator("flat", &[3.0; 5], true) {
            Err(Error::ConstantIndicator(name)) => assert_eq!(name, "flat"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn uniform_spread_keeps_plain_scaling() {
        let raw: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let n = normalize_indicator("u", &raw, true).unwrap();
        assert!(!n.skew_corrected);
        let mean = n.values.iter().sum::<f64>() / n.values.len() as f64;
        assert!((mean - 0.5).abs() < 1e-12);
        assert_eq!(n.values, raw);
    }

    #[test]
    fn right_skew_uses_96th_percentile() {
        // 95 small values and 5 huge outliers
        let mut raw: Vec<f64> = (0..95).map(|i| i as f64).collect();
        raw.extend([1000.0, 2000.0, 3000.0, 4000.0, 5000.0]);
        let n = normalize_indicator("s", &raw, true).unwrap();
        assert!(n.skew_corrected);
        // by hand: ⌈0.96 · 100⌉ = 96th smallest is 1000
        let hi = 1000.0;
        for (v, r) in n.values.iter().zip(&raw) {
            let expect = ((r - 0.0) / (hi - 0.0)).min(1.0);
            assert!((v - expect).abs() < 1e-15);
        }
        assert_eq!(n.values.iter().filter(|&&v| v == 1.0).count(), 5);
    }

    #[test]
    fn left_skew_uses_4th_percentile() {
        let mut raw: Vec<f64> = (0..95).map(|i| 1000.0 + i as f64).collect();
        raw.extend([-5000.0, -4000.0, -3000.0, -2000.0, -1000.0]);
        let n = normalize_indicator("s", &raw, true).unwrap();
        assert!(n.skew_corrected);
        // 4th smallest is -2000
        let lo = -2000.0;
        let hi = 1094.0;
        for (v, r) in n.values.iter().zip(&raw) {
            assert!((v - ((r - lo) / (hi - lo)).max(0.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn orientation_rules() {
        let gdp = [1.0, 2.0, 3.0, 4.0];
        let mut same = [0.1, 0.2, 0.3, 0.4];
        assert!(!orient_indicator(&mut same, &gdp).unwrap());
        assert_eq!(same, [0.1, 0.2, 0.3, 0.4]);
        let mut rev = [0.4, 0.3, 0.2, 0.1];
        assert!(orient_indicator(&mut rev, &gdp).unwrap());
        assert!((rev[0] - 0.6).abs() < 1e-15);
        // zero correlation stays
        let mut flat = [0.5, 0.2, 0.2, 0.5];
        let g = [1.0, 2.0, 3.0, 4.0];
        assert!(!orient_indicator(&mut flat, &g).unwrap());
    }
}
