//! Small descriptive statistics shared across modules.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Population variance.
pub fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64
}

/// Pearson correlation; errors when either input has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!("lengths {} and {} differ", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: x.len() });
    }
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::Undefined("correlation of a constant series"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks, ties get the average of the positions they span.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut r = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!("lengths {} and {} differ", x.len(), y.len())));
    }
    pearson(&ranks(x), &ranks(y))
}

/// Spearman correlation with a two-sided p-value from the t approximation
/// `t = ρ √((n − 2) / (1 − ρ²))` on `n − 2` degrees of freedom.
pub fn spearman_test(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let rho = spearman(x, y)?;
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewObservations { needed: 3, got: n });
    }
    let df = (n - 2) as f64;
    let denom = 1.0 - rho * rho;
    if denom <= 0.0 {
        return Ok((rho, 0.0));
    }
    let t = rho * (df / denom).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|_| Error::Undefined("t distribution"))?;
    let p = 2.0 * (1.0 - dist.cdf(t.abs()));
    Ok((rho, p.clamp(0.0, 1.0)))
}

/// Sample skewness `m3 / m2^{3/2}` with population moments.
pub fn skewness(x: &[f64]) -> f64 {
    let m = mean(x);
    let m2 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64;
    let m3 = x.iter().map(|v| (v - m).powi(3)).sum::<f64>() / x.len() as f64;
    if m2 <= 0.0 {
        0.0
    } else {
        m3 / m2.powf(1.5)
    }
}

/// Excess kurtosis `m4 / m2² − 3`.
pub fn excess_kurtosis(x: &[f64]) -> f64 {
    let m = mean(x);
    let m2 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64;
    let m4 = x.iter().map(|v| (v - m).powi(4)).sum::<f64>() / x.len() as f64;
    if m2 <= 0.0 {
        0.0
    } else {
        m4 / (m2 * m2) - 3.0
    }
}

/// Zero mean, unit (population) variance copy; `None` for constant input.
pub fn standardize(x: &[f64]) -> Option<Vec<f64>> {
    let m = mean(x);
    let sd = variance(x).sqrt();
    (sd > 0.0).then(|| x.iter().map(|v| (v - m) / sd).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spearman_fixtures() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((spearman(&x, &[1.0, 3.0, 2.0, 4.0]).unwrap() - 0.8).abs() < 1e-12);
        assert!((spearman(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!((spearman(&x, &[4.0, 3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-12);
        assert!(spearman(&x, &[2.0; 4]).is_err());
    }

    #[test]
    fn average_ranks() {
        assert_eq!(ranks(&[10.0, 20.0, 10.0, 5.0]), vec![2.5, 4.0, 2.5, 1.0]);
    }

    #[test]
    fn p_value_of_adjacent_swaps() {
        // ten values with neighbours swapped: Σd² = 10, ρ = 1 − 60/990, t ≈ 7.75 on 8 df
        let x: Vec<f64> = (1..=10).map(f64::from).collect();
        let y = [2.0, 1.0, 4.0, 3.0, 6.0, 5.0, 8.0, 7.0, 10.0, 9.0];
        let (rho, p) = spearman_test(&x, &y).unwrap();
        assert!((rho - (1.0 - 60.0 / 990.0)).abs() < 1e-12);
        assert!(p > 1e-5 && p < 1e-4, "p = {p}");
        let (rho, p) = spearman_test(&x, &x.iter().rev().copied().collect::<Vec<_>>()).unwrap();
        assert_eq!((rho, p), (-1.0, 0.0));
    }

    #[test]
    fn moments() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(skewness(&x), 0.0);
        // population kurtosis of 1..5 is 1.7, excess -1.3
        assert!((excess_kurtosis(&x) + 1.3).abs() < 1e-12);
        let z = standardize(&x).unwrap();
        assert!(mean(&z).abs() < 1e-15 && (variance(&z) - 1.0).abs() < 1e-12);
    }
}
