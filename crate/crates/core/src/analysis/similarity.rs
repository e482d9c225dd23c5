use crate::error::{Error, Result};

/// `Σ min(a, b) / Σ max(a, b)` over paired nonnegative entries. Matrices are
/// passed flattened.
pub fn weighted_jaccard(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!("lengths {} and {} differ", a.len(), b.len())));
    }
    let mut lo = 0.0;
    let mut hi = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        if !(x >= 0.0 && y >= 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Contract(format!("weighted Jaccard needs finite nonnegative entries, got {x} and {y}")));
        }
        lo += x.min(y);
        hi += x.max(y);
    }
    if hi == 0.0 {
        return Err(Error::Undefined("weighted Jaccard of two all-zero inputs"));
    }
    Ok(lo / hi)
}

/// Indices of the `k` largest entries, lower index first on ties.
pub fn top_k(profile: &[f64], k: usize) -> Result<Vec<usize>> {
    if profile.len() < k {
        return Err(Error::TooFewObservations { needed: k, got: profile.len() });
    }
    let mut idx: Vec<usize> = (0..profile.len()).collect();
    idx.sort_by(|&i, &j| profile[j].total_cmp(&profile[i]).then(i.cmp(&j)));
    idx.truncate(k);
    idx.sort_unstable();
    Ok(idx)
}

/// Jaccard index of the top-`k` issue sets of two profiles.
pub fn top_k_jaccard(a: &[f64], b: &[f64], k: usize) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!("lengths {} and {} differ", a.len(), b.len())));
    }
    if k == 0 {
        return Err(Error::Config("top-k needs k >= 1".into()));
    }
    let (sa, sb) = (top_k(a, k)?, top_k(b, k)?);
    let inter = sa.iter().filter(|i| sb.binary_search(i).is_ok()).count();
    Ok(inter as f64 / (2 * k - inter) as f64)
}

pub fn top10_jaccard(a: &[f64], b: &[f64]) -> Result<f64> {
    top_k_jaccard(a, b, 10)
}
