use crate::error::{Error, Result};
use crate::stats::pearson;

pub const DEFAULT_SHRINKAGE: f64 = 0.2;

/// Correlation matrix over the non-constant rows of the input.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    /// Row-major `k × k`, shrunk toward the identity.
    pub matrix: Vec<f64>,
    /// Plain Pearson correlations before shrinkage.
    pub raw: Vec<f64>,
    /// Input rows kept, in order; `matrix` is indexed by position in this list.
    pub kept: Vec<usize>,
    /// Input rows dropped as constant.
    pub dropped: Vec<usize>,
    /// The series the correlations were computed on (differenced if requested).
    pub series: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    pub fn len(&self) -> usize {
        self.kept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kept.is_empty()
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.matrix[a * self.kept.len() + b]
    }

    pub fn raw(&self, a: usize, b: usize) -> f64 {
        self.raw[a * self.kept.len() + b]
    }
}

pub fn first_difference(x: &[f64]) -> Vec<f64> {
    x.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Pearson correlations of (optionally first-differenced) series, then
/// `(1 − λ) R + λ I`. Constant rows are excluded and reported.
pub fn correlation_matrix(series: &[Vec<f64>], differencing: bool, shrinkage: f64) -> Result<CorrelationMatrix> {
    if !(0.0..=1.0).contains(&shrinkage) {
        return Err(Error::Domain {
            name: "shrinkage",
            value: shrinkage,
            domain: "[0, 1]",
        });
    }
    let len = series.first().map_or(0, Vec::len);
    if let Some(bad) = series.iter().position(|s| s.len() != len) {
        return Err(Error::Shape(format!("series {bad} has a different length")));
    }
    if let Some(bad) = series.iter().position(|s| s.iter().any(|v| !v.is_finite())) {
        return Err(Error::Contract(format!("series {bad} has missing or non-finite values")));
    }
    let work: Vec<Vec<f64>> = if differencing {
        series.iter().map(|s| first_difference(s)).collect()
    } else {
        series.to_vec()
    };
    let obs = work.first().map_or(0, Vec::len);
    if obs < 3 {
        return Err(Error::TooFewObservations { needed: 3, got: obs });
    }
    let (kept, dropped): (Vec<usize>, Vec<usize>) = (0..work.len()).partition(|&i| {
        let s = &work[i];
        s.iter().any(|v| *v != s[0])
    });
    let k = kept.len();
    let mut raw = vec![0.0; k * k];
    for a in 0..k {
        raw[a * k + a] = 1.0;
        for b in a + 1..k {
            let r = pearson(&work[kept[a]], &work[kept[b]])?;
            raw[a * k + b] = r;
            raw[b * k + a] = r;
        }
    }
    let matrix = raw
        .iter()
        .enumerate()
        .map(|(idx, r)| if idx / k == idx % k { 1.0 } else { (1.0 - shrinkage) * r })
        .collect();
    let series = kept.iter().map(|&i| work[i].clone()).collect();
    Ok(CorrelationMatrix {
        matrix,
        raw,
        kept,
        dropped,
        series,
    })
}
