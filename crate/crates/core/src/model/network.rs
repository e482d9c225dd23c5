use crate::error::{Error, Result};

/// Directed weighted adjacency over `n` policy issues.
///
/// `weight(i, j)` is the spillover from issue `i` into issue `j` (rows are
/// sources, columns are destinations). The diagonal is always zero and every
/// weight is nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct SpilloverNetwork {
    n: usize,
    weights: Vec<f64>,
    out_degrees: Vec<usize>,
}

impl SpilloverNetwork {
    /// Builds a network from a row-major `n × n` weight buffer.
    pub fn from_row_major(n: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} weights for {n} issues, got {}",
                n * n,
                weights.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let w = weights[i * n + j];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::Contract(format!(
                        "weight ({i}, {j}) = {w} must be finite and nonnegative"
                    )));
                }
                if i == j && w != 0.0 {
                    return Err(Error::Contract(format!(
                        "self-spillover on issue {i} must be zero, got {w}"
                    )));
                }
            }
        }
        let out_degrees = (0..n)
            .map(|i| weights[i * n..(i + 1) * n].iter().filter(|&&w| w > 0.0).count())
            .collect();
        Ok(Self {
            n,
            weights,
            out_degrees,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Shape(format!("row {bad} is not of length {n}")));
        }
        Self::from_row_major(n, rows.concat())
    }

    /// Network without any spillover.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            weights: vec![0.0; n * n],
            out_degrees: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn weight(&self, from: usize, to: usize) -> f64 {
        self.weights[from * self.n + to]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn row(&self, from: usize) -> &[f64] {
        &self.weights[from * self.n..(from + 1) * self.n]
    }

    /// Number of strictly positive outgoing edges of each issue.
    pub fn out_degrees(&self) -> &[usize] {
        &self.out_degrees
    }

    pub fn edge_count(&self) -> usize {
        self.out_degrees.iter().sum()
    }

    /// Incoming strength `Σ_j A[j][i]` of every issue.
    pub fn in_strengths(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.n];
        for from in 0..self.n {
            for (to, w) in self.row(from).iter().enumerate() {
                s[to] += w;
            }
        }
        s
    }

    /// Mean of the strictly positive off-diagonal weights, 0 when there are none.
    pub fn mean_positive_weight(&self) -> f64 {
        let (sum, count) = self
            .weights
            .iter()
            .filter(|&&w| w > 0.0)
            .fold((0.0, 0usize), |(s, c), &w| (s + w, c + 1));
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    }

    /// Writes `spill[i] = Σ_j contributions[j] · A[j][i]`.
    pub fn spill_into(&self, contributions: &[f64], spill: &mut [f64]) {
        spill.iter_mut().for_each(|s| *s = 0.0);
        for (from, &c) in contributions.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for (to, &w) in self.row(from).iter().enumerate() {
                if w > 0.0 {
                    spill[to] += c * w;
                }
            }
        }
    }
}
