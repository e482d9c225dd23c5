use crate::error::{Error, Result};

/// Country × year × indicator values with a pillar per indicator.
///
/// Values are raw until normalized; `n2` marks indicators whose scaling used
/// the percentile rule and `switched` those that were inverted.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorPanel {
    pub countries: Vec<String>,
    pub years: Vec<i32>,
    pub indicators: Vec<String>,
    pub pillars: Vec<String>,
    pub n2: Vec<bool>,
    pub switched: Vec<bool>,
    values: Vec<f64>,
}

impl IndicatorPanel {
    /// `values` is laid out `[country][year][indicator]`.
    pub fn new(
        countries: Vec<String>,
        years: Vec<i32>,
        indicators: Vec<String>,
        pillars: Vec<String>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let k = indicators.len();
        if pillars.len() != k {
            return Err(Error::Shape(format!("{k} indicators but {} pillar labels", pillars.len())));
        }
        let expected = countries.len() * years.len() * k;
        if values.len() != expected {
            return Err(Error::Shape(format!("expected {expected} values, got {}", values.len())));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            let (c, y, i) = (pos / (years.len() * k), (pos / k) % years.len(), pos % k);
            return Err(Error::Contract(format!(
                "value for ({}, {}, {}) is not finite",
                countries[c], years[y], indicators[i]
            )));
        }
        if !years.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Contract("years must be strictly increasing".into()));
        }
        for (name, list) in [("country", &countries), ("indicator", &indicators)] {
            let mut seen = std::collections::HashSet::new();
            if let Some(dup) = list.iter().find(|s| !seen.insert(s.as_str())) {
                return Err(Error::Contract(format!("duplicate {name} `{dup}`")));
            }
        }
        Ok(Self {
            countries,
            years,
            indicators,
            pillars,
            n2: vec![false; k],
            switched: vec![false; k],
            values,
        })
    }

    pub fn n_countries(&self) -> usize {
        self.countries.len()
    }

    pub fn n_years(&self) -> usize {
        self.years.len()
    }

    pub fn n_indicators(&self) -> usize {
        self.indicators.len()
    }

    #[inline]
    fn offset(&self, c: usize, y: usize, k: usize) -> usize {
        (c * self.years.len() + y) * self.indicators.len() + k
    }

    pub fn value(&self, c: usize, y: usize, k: usize) -> f64 {
        self.values[self.offset(c, y, k)]
    }

    pub fn set_value(&mut self, c: usize, y: usize, k: usize, v: f64) {
        let o = self.offset(c, y, k);
        self.values[o] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn country_index(&self, id: &str) -> Result<usize> {
        self.countries
            .iter()
            .position(|c| c == id)
            .ok_or_else(|| Error::UnknownCountry(id.to_string()))
    }

    pub fn indicator_index(&self, id: &str) -> Result<usize> {
        self.indicators
            .iter()
            .position(|c| c == id)
            .ok_or_else(|| Error::UnknownIndicator(id.to_string()))
    }

    /// Indicator vector of country `c` in year index `y`.
    pub fn year_slice(&self, c: usize, y: usize) -> &[f64] {
        let o = self.offset(c, y, 0);
        &self.values[o..o + self.indicators.len()]
    }

    /// Time series of indicator `k` for country `c`.
    pub fn series(&self, c: usize, k: usize) -> Vec<f64> {
        (0..self.years.len()).map(|y| self.value(c, y, k)).collect()
    }

    /// All series of country `c`, one row per indicator.
    pub fn country_series(&self, c: usize) -> Vec<Vec<f64>> {
        (0..self.indicators.len()).map(|k| self.series(c, k)).collect()
    }

    /// Every observation of indicator `k`, countries outer, years inner.
    pub fn pooled(&self, k: usize) -> Vec<f64> {
        (0..self.countries.len())
            .flat_map(|c| (0..self.years.len()).map(move |y| (c, y)))
            .map(|(c, y)| self.value(c, y, k))
            .collect()
    }

    /// Per-indicator mean over years for country `c`.
    pub fn time_average(&self, c: usize) -> Vec<f64> {
        let ny = self.years.len() as f64;
        (0..self.indicators.len())
            .map(|k| (0..self.years.len()).map(|y| self.value(c, y, k)).sum::<f64>() / ny)
            .collect()
    }

    /// Distinct pillar labels in order of first appearance.
    pub fn pillar_names(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.pillars {
            if !out.contains(p) {
                out.push(p.clone());
            }
        }
        out
    }

    /// Panel restricted to the given indicator indices, flags carried over.
    pub fn select_indicators(&self, keep: &[usize]) -> Self {
        let mut values = Vec::with_capacity(self.countries.len() * self.years.len() * keep.len());
        for c in 0..self.countries.len() {
            for y in 0..self.years.len() {
                values.extend(keep.iter().map(|&k| self.value(c, y, k)));
            }
        }
        Self {
            countries: self.countries.clone(),
            years: self.years.clone(),
            indicators: keep.iter().map(|&k| self.indicators[k].clone()).collect(),
            pillars: keep.iter().map(|&k| self.pillars[k].clone()).collect(),
            n2: keep.iter().map(|&k| self.n2[k]).collect(),
            switched: keep.iter().map(|&k| self.switched[k]).collect(),
            values,
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.values.iter().all(|v| (0.0..=1.0).contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> IndicatorPanel {
        let values = (0..2 * 3 * 2).map(|v| v as f64).collect();
        IndicatorPanel::new(
            vec!["A".into(), "B".into()],
            vec![2000, 2001, 2002],
            vec!["x".into(), "y".into()],
            vec!["p".into(), "q".into()],
            values,
        )
        .unwrap()
    }

    #[test]
    fn layout() {
        let p = tiny();
        assert_eq!(p.value(1, 2, 1), 11.0);
        assert_eq!(p.series(0, 1), vec![1.0, 3.0, 5.0]);
        assert_eq!(p.year_slice(1, 0), &[6.0, 7.0]);
        assert_eq!(p.pooled(0), vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(p.time_average(1), vec![8.0, 9.0]);
        let s = p.select_indicators(&[1]);
        assert_eq!(s.series(1, 0), vec![7.0, 9.0, 11.0]);
    }

    #[test]
    fn rejects_bad_shapes() {
        let p = tiny();
        assert!(IndicatorPanel::new(p.countries.clone(), p.years.clone(), p.indicators.clone(), vec![], vec![]).is_err());
        assert!(IndicatorPanel::new(
            p.countries.clone(),
            vec![2001, 2000, 2002],
            p.indicators.clone(),
            p.pillars.clone(),
            p.values().to_vec()
        )
        .is_err());
        assert!(matches!(p.country_index("Z"), Err(Error::UnknownCountry(_))));
    }
}
