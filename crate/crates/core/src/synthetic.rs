//! Synthetic networks, countries and panels standing in for the empirical data.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::data::IndicatorPanel;
use crate::model::{SimulationConfig, SpilloverNetwork};

/// Directed Erdős–Rényi graph with exactly `m` distinct edges drawn uniformly
/// among the `n(n − 1)` ordered pairs, weights `U(0, 1)`.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> SpilloverNetwork {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let m = m.min(pairs.len());
    let (chosen, _) = pairs.partial_shuffle(rng, m);
    let mut w = vec![0.0; n * n];
    for &(i, j) in chosen.iter() {
        // keep weights strictly positive so every drawn edge counts
        w[i * n + j] = rng.gen_range(1e-3..1.0);
    }
    SpilloverNetwork::from_row_major(n, w).expect("generated weights are valid")
}

/// Directed graph with `m` edges whose sources are uniform and whose targets
/// are picked preferentially (attractiveness `1 / rank`), so a few issues
/// collect most of the incoming strength independently of their out-degree.
pub fn hub_heavy<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> SpilloverNetwork {
    let mut ranks: Vec<usize> = (1..=n).collect();
    ranks.shuffle(rng);
    let attract: Vec<f64> = ranks.iter().map(|&r| 1.0 / r as f64).collect();
    let total: f64 = attract.iter().sum();
    let m = m.min(n * (n - 1));
    let mut w = vec![0.0; n * n];
    let mut placed = 0;
    while placed < m {
        let i = rng.gen_range(0..n);
        let mut u = rng.gen::<f64>() * total;
        let mut j = n - 1;
        for (k, a) in attract.iter().enumerate() {
            if u < *a {
                j = k;
                break;
            }
            u -= a;
        }
        if i == j || w[i * n + j] > 0.0 {
            continue;
        }
        w[i * n + j] = rng.gen_range(1e-3..1.0);
        placed += 1;
    }
    SpilloverNetwork::from_row_major(n, w).expect("generated weights are valid")
}

/// Random targets `T ~ U(0,1)` and initials `I_0 ~ U(0, T)`.
pub fn random_targets<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let targets: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let initials = targets.iter().map(|&t| rng.gen::<f64>() * t).collect();
    (targets, initials)
}

/// The illustrative instance: ER(n, m) network, `T ~ U(0,1)`,
/// `I_0 ~ U(0, T)`, unit budget.
pub fn demo_instance<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> (SimulationConfig, SpilloverNetwork) {
    let network = erdos_renyi(n, m, rng);
    let (targets, initials) = random_targets(n, rng);
    (SimulationConfig::new(targets, initials, 1.0), network)
}

/// Raw country-year-indicator data with a GDP series.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticPanel {
    pub panel: IndicatorPanel,
    /// `gdp[c][y]`.
    pub gdp: Vec<Vec<f64>>,
}

pub const RULE_OF_LAW: &str = "rule_of_law";
pub const CONTROL_OF_CORRUPTION: &str = "control_of_corruption";
pub const DIVERSION: &str = "diversion_of_public_funds";

fn laplace<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> f64 {
    let u: f64 = rng.gen_range(-0.5..0.5);
    -scale * u.signum() * (1.0 - 2.0 * u.abs()).max(f64::MIN_POSITIVE).ln()
}

/// Panel driven by a latent development level per country that drifts up
/// over the years. Indicators load on it with pillar-specific shocks and
/// Laplace noise; every 7th indicator is measured in the opposite direction
/// and every 5th on an exponential scale. Indicators 0 and 1 are rule of law
/// and control of corruption; the last one is diversion of public funds,
/// also oriented so that higher means less diversion.
pub fn synthetic_panel<R: Rng + ?Sized>(
    countries: usize,
    years: usize,
    indicators: usize,
    pillars: usize,
    rng: &mut R,
) -> SyntheticPanel {
    let indicators = indicators.max(3);
    let pillars = pillars.clamp(1, indicators);
    let names: Vec<String> = (0..indicators)
        .map(|k| match k {
            0 => RULE_OF_LAW.to_string(),
            1 => CONTROL_OF_CORRUPTION.to_string(),
            _ if k + 1 == indicators => DIVERSION.to_string(),
            _ => format!("ind{k:02}"),
        })
        .collect();
    let pillar_of: Vec<String> = (0..indicators).map(|k| format!("pillar{:02}", k % pillars + 1)).collect();
    let loading: Vec<f64> = (0..indicators).map(|_| rng.gen_range(0.5..1.5)).collect();
    let offset: Vec<f64> = (0..indicators).map(|_| rng.gen_range(-0.2..0.2)).collect();

    let mut values = Vec::with_capacity(countries * years * indicators);
    let mut gdp = Vec::with_capacity(countries);
    for _ in 0..countries {
        let level: f64 = rng.gen_range(0.1..0.9);
        let growth: f64 = rng.gen_range(0.0..0.03);
        let shock: Vec<f64> = (0..pillars).map(|_| rng.gen_range(-0.1..0.1)).collect();
        let mut row = Vec::with_capacity(years);
        for y in 0..years {
            let latent = level + growth * y as f64;
            row.push(1000.0 * (4.0 * latent + laplace(rng, 0.05)).exp());
            for k in 0..indicators {
                let mut v = offset[k] + loading[k] * latent + shock[k % pillars] + laplace(rng, 0.03);
                if k >= 2 && k % 5 == 0 {
                    v = (3.0 * v).exp();
                }
                if k >= 2 && k % 7 == 0 && k + 1 != indicators {
                    v = -v;
                }
                values.push(v);
            }
        }
        gdp.push(row);
    }
    let panel = IndicatorPanel::new(
        (0..countries).map(|c| format!("C{c:03}")).collect(),
        (0..years).map(|y| 2006 + y as i32).collect(),
        names,
        pillar_of,
        values,
    )
    .expect("generated panel is well formed");
    SyntheticPanel { panel, gdp }
}
