use std::fmt::Write;

/// One plot series with optional error bars.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub name: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub err: Vec<f64>,
}

impl PlotSeries {
    pub fn new(name: impl Into<String>, x: Vec<f64>, y: Vec<f64>) -> Self {
        let err = vec![0.0; y.len()];
        Self { name: name.into(), x, y, err }
    }

    pub fn with_err(mut self, err: Vec<f64>) -> Self {
        self.err = err;
        self
    }
}

fn list(out: &mut String, v: &[f64]) {
    out.push('[');
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{x:?}");
    }
    out.push(']');
}

/// One `{"series": …, "x": […], "y": […], "err": […]}` object per line.
pub fn render_series(series: &[PlotSeries]) -> String {
    let mut out = String::new();
    for s in series {
        let _ = write!(out, "{{\"series\": {:?}, \"x\": ", s.name);
        list(&mut out, &s.x);
        out.push_str(", \"y\": ");
        list(&mut out, &s.y);
        out.push_str(", \"err\": ");
        list(&mut out, &s.err);
        out.push_str("}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_one_line_per_series() {
        let s = PlotSeries::new("D", vec![1.0, 2.0], vec![0.5, 0.25]).with_err(vec![0.1, 0.0]);
        assert_eq!(
            render_series(&[s]),
            "{\"series\": \"D\", \"x\": [1.0, 2.0], \"y\": [0.5, 0.25], \"err\": [0.1, 0.0]}\n"
        );
    }
}
