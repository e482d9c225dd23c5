//! Agglomerative clustering with Ward linkage on Euclidean distances.

use super::panel::IndicatorPanel;
use crate::error::{Error, Result};

/// Cluster label per country, `1..=k`, where 1 has the highest mean level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    pub labels: Vec<usize>,
    pub k: usize,
}

impl ClusterAssignment {
    pub fn members(&self, label: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i] == label).collect()
    }
}

/// Total within-cluster sum of squared distances to the centroids.
pub fn within_ss(points: &[Vec<f64>], labels: &[usize]) -> f64 {
    let mut total = 0.0;
    let mut groups: Vec<usize> = labels.to_vec();
    groups.sort_unstable();
    groups.dedup();
    for g in groups {
        let members: Vec<&Vec<f64>> = points.iter().zip(labels).filter(|(_, &l)| l == g).map(|(p, _)| p).collect();
        let d = members[0].len();
        let m = members.len() as f64;
        let centroid: Vec<f64> = (0..d).map(|j| members.iter().map(|p| p[j]).sum::<f64>() / m).collect();
        total += members
            .iter()
            .map(|p| p.iter().zip(&centroid).map(|(a, b)| (a - b).powi(2)).sum::<f64>())
            .sum::<f64>();
    }
    total
}

/// Ward clustering of `points` into `k` groups.
///
/// Each merge joins the pair of active clusters with the smallest Ward
/// distance; exact ties go to the pair with the lowest indices, and the merged
/// cluster keeps the lower index.
pub fn ward(points: &[Vec<f64>], k: usize) -> Result<ClusterAssignment> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::TooManyClusters { requested: k, available: n });
    }
    if let Some(bad) = points.iter().position(|p| p.len() != points[0].len()) {
        return Err(Error::Shape(format!("point {bad} has a different dimension")));
    }
    // squared Euclidean distances, updated with the Lance–Williams recurrence
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let s: f64 = points[i].iter().zip(&points[j]).map(|(a, b)| (a - b).powi(2)).sum();
            d[i * n + j] = s;
            d[j * n + i] = s;
        }
    }
    let mut size = vec![1usize; n];
    let mut active = vec![true; n];
    let mut owner: Vec<usize> = (0..n).collect();
    let mut clusters = n;
    while clusters > k {
        let mut best = (f64::INFINITY, 0, 0);
        for i in 0..n {
            if !active[i] {
                continue;
            }
            for j in i + 1..n {
                if active[j] && d[i * n + j] < best.0 {
                    best = (d[i * n + j], i, j);
                }
            }
        }
        let (dij, i, j) = best;
        let (ni, nj) = (size[i] as f64, size[j] as f64);
        for m in 0..n {
            if !active[m] || m == i || m == j {
                continue;
            }
            let nm = size[m] as f64;
            let v = ((ni + nm) * d[m * n + i] + (nj + nm) * d[m * n + j] - nm * dij) / (ni + nj + nm);
            d[m * n + i] = v;
            d[i * n + m] = v;
        }
        active[j] = false;
        size[i] += size[j];
        owner.iter_mut().filter(|o| **o == j).for_each(|o| *o = i);
        clusters -= 1;
    }

    // order clusters by descending mean level, ties by lowest representative
    let mut reps: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
    let level = |r: usize| -> f64 {
        let members: Vec<usize> = (0..n).filter(|&p| owner[p] == r).collect();
        let sum: f64 = members.iter().map(|&p| points[p].iter().sum::<f64>()).sum();
        sum / (members.len() * points[0].len().max(1)) as f64
    };
    let levels: Vec<f64> = reps.iter().map(|&r| level(r)).collect();
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by(|&a, &b| levels[b].total_cmp(&levels[a]).then(reps[a].cmp(&reps[b])));
    reps = order.iter().map(|&o| reps[o]).collect();
    let labels = owner
        .iter()
        .map(|o| reps.iter().position(|r| r == o).expect("owner is active") + 1)
        .collect();
    Ok(ClusterAssignment { labels, k })
}

/// Clusters the countries of `panel` on their time-averaged indicator vectors.
pub fn ward_cluster(panel: &IndicatorPanel, k: usize) -> Result<ClusterAssignment> {
    let features: Vec<Vec<f64>> = (0..panel.n_countries()).map(|c| panel.time_average(c)).collect();
    ward(&features, k)
}
