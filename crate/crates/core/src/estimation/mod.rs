//! Country networks from short indicator panels: correlations, TMFG
//! filtering, then pairwise orientation.

pub mod correlation;
pub mod orient;
pub mod tmfg;

use std::path::Path;

pub use correlation::{correlation_matrix, CorrelationMatrix, DEFAULT_SHRINKAGE};
pub use orient::{likelihood_ratio, orient_edges, orient_pair, Direction, OrientedNetwork, DEFAULT_TIE_TOLERANCE};
pub use tmfg::{tmfg, FilteredGraph};

use crate::data::IndicatorPanel;
use crate::error::{Error, Result};
use crate::model::SpilloverNetwork;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationParams {
    pub differencing: bool,
    pub shrinkage: f64,
    pub tie_tolerance: f64,
}

impl Default for EstimationParams {
    fn default() -> Self {
        Self {
            differencing: true,
            shrinkage: DEFAULT_SHRINKAGE,
            tie_tolerance: DEFAULT_TIE_TOLERANCE,
        }
    }
}

/// Network over every indicator of the panel plus what happened on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkEstimate {
    pub network: SpilloverNetwork,
    /// Undirected TMFG stage, indexed by position in `kept`.
    pub graph: FilteredGraph,
    /// Panel indicator indices that entered the filter.
    pub kept: Vec<usize>,
    /// Indicators left out because their (differenced) series was constant.
    pub dropped_constant: Vec<String>,
    pub dropped_negative: usize,
    pub ties: usize,
}

/// Estimates the spillover network of `country` from its own time series.
/// Indicators that are constant over the window get no edges.
pub fn estimate_network(panel: &IndicatorPanel, country: &str, params: &EstimationParams) -> Result<NetworkEstimate> {
    let c = panel.country_index(country)?;
    let series = panel.country_series(c);
    estimate_from_series(&series, &panel.indicators, params)
}

/// As [`estimate_network`], over explicit series (one row per indicator).
pub fn estimate_from_series(series: &[Vec<f64>], ids: &[String], params: &EstimationParams) -> Result<NetworkEstimate> {
    let n = series.len();
    if ids.len() != n {
        return Err(Error::Shape(format!("{n} series but {} ids", ids.len())));
    }
    let corr = correlation_matrix(series, params.differencing, params.shrinkage)?;
    let k = corr.len();
    if k < 4 {
        return Err(Error::TooFewVertices { needed: 4, got: k });
    }
    let weights: Vec<f64> = corr
        .matrix
        .iter()
        .enumerate()
        .map(|(idx, r)| if idx / k == idx % k { 0.0 } else { r.abs() })
        .collect();
    let graph = tmfg(&weights, k)?;
    let oriented = orient_edges(&graph, &corr.series, params.tie_tolerance)?;
    let mut w = vec![0.0; n * n];
    for a in 0..k {
        for b in 0..k {
            w[corr.kept[a] * n + corr.kept[b]] = oriented.network.weight(a, b);
        }
    }
    Ok(NetworkEstimate {
        network: SpilloverNetwork::from_row_major(n, w)?,
        graph,
        kept: corr.kept,
        dropped_constant: corr.dropped.iter().map(|&i| ids[i].clone()).collect(),
        dropped_negative: oriented.dropped_negative,
        ties: oriented.ties,
    })
}

/// Decimal text of `v` rounded to 9 significant digits.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{v:.8e}").parse().expect("formatted float parses");
    rounded.to_string()
}

/// Writes an adjacency matrix with a header row and column of ids.
pub fn write_adjacency(path: &Path, ids: &[String], network: &SpilloverNetwork) -> Result<()> {
    let n = network.len();
    if ids.len() != n {
        return Err(Error::Shape(format!("{n} issues but {} ids", ids.len())));
    }
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = Vec::with_capacity(n + 1);
        r.push(ids[i].clone());
        r.extend((0..n).map(|j| format_sig9(network.weight(i, j))));
        rows.push(r);
    }
    let mut header: Vec<&str> = vec![""];
    header.extend(ids.iter().map(String::as_str));
    crate::data::io::write_rows(path, &header, &rows)
}

/// Reads a matrix written by [`write_adjacency`]; returns the ids and network.
pub fn read_adjacency(path: &Path) -> Result<(Vec<String>, SpilloverNetwork)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let ids: Vec<String> = rdr.headers()?.iter().skip(1).map(str::to_string).collect();
    let n = ids.len();
    let mut w = Vec::with_capacity(n * n);
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        if rec.len() != n + 1 {
            return Err(parse_err(format!("expected {} fields, got {}", n + 1, rec.len())));
        }
        if rec.get(0) != Some(ids.get(i).map(String::as_str).unwrap_or("")) {
            return Err(parse_err("row label does not match the header".into()));
        }
        for f in rec.iter().skip(1) {
            w.push(f.parse::<f64>().map_err(|_| parse_err(format!("cannot parse weight `{f}`")))?);
        }
    }
    Ok((ids, SpilloverNetwork::from_row_major(n, w)?))
}
