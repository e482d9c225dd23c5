use crate::error::{Error, Result};

pub const DEFAULT_GAMMA_MIN: f64 = 1.0;
pub const DEFAULT_GAMMA_MAX: f64 = 30.0;
pub const DEFAULT_GAMMA_POINTS: usize = 117;

/// Strictly increasing positive candidate values of γ.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaGrid {
    values: Vec<f64>,
}

impl GammaGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("a gamma grid needs at least one value".into()));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Config("gamma values must be positive".into()));
        }
        if !values.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("gamma values must be strictly increasing".into()));
        }
        Ok(Self { values })
    }

    /// `points` evenly spaced values from `min` to `max` inclusive.
    pub fn linspace(min: f64, max: f64, points: usize) -> Result<Self> {
        match points {
            0 => Err(Error::Config("gamma grid needs at least one point".into())),
            1 => Self::new(vec![min]),
            _ => {
                let step = (max - min) / (points - 1) as f64;
                Self::new((0..points).map(|k| if k + 1 == points { max } else { min + step * k as f64 }).collect())
            }
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    /// Index of the grid value closest to `gamma` (lower index on ties).
    pub fn nearest(&self, gamma: f64) -> usize {
        let mut best = 0;
        for (k, v) in self.values.iter().enumerate() {
            if (v - gamma).abs() < (self.values[best] - gamma).abs() {
                best = k;
            }
        }
        best
    }
}

impl Default for GammaGrid {
    fn default() -> Self {
        Self::linspace(DEFAULT_GAMMA_MIN, DEFAULT_GAMMA_MAX, DEFAULT_GAMMA_POINTS).expect("default grid is valid")
    }
}
