use ppi_core::analysis::*;
use ppi_core::calibration::*;
use ppi_core::country::CountryModel;
use ppi_core::data::{normalize_panel, ward_cluster, IndicatorPanel};
use ppi_core::model::rules::allocate;
use ppi_core::model::*;
use ppi_core::seeds::rng_for;
use ppi_core::synthetic::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn weighted_jaccard_is_a_similarity(a in prop::collection::vec(0.0f64..1.0, 1..30), seed in any::<u64>()) {
        let mut rng = rng_for(seed, &[]);
        let b: Vec<f64> = a.iter().map(|_| rand::Rng::gen::<f64>(&mut rng)).collect();
        let j = weighted_jaccard(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&j));
        prop_assert_eq!(j, weighted_jaccard(&b, &a).unwrap());
        prop_assert_eq!(j == 1.0, a == b);
        if a.iter().any(|&v| v > 0.0) {
            prop_assert_eq!(weighted_jaccard(&a, &a).unwrap(), 1.0);
        }
    }

    #[test]
    fn top10_is_symmetric(a in prop::collection::vec(0.0f64..1.0, 10..40), seed in any::<u64>()) {
        let mut rng = rng_for(seed, &[]);
        let b: Vec<f64> = a.iter().map(|_| rand::Rng::gen::<f64>(&mut rng)).collect();
        let j = top10_jaccard(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&j));
        prop_assert_eq!(j, top10_jaccard(&b, &a).unwrap());
        prop_assert_eq!(top10_jaccard(&a, &a).unwrap(), 1.0);
    }
}

fn hub_country(master: u64, c: u64) -> CountryModel {
    let mut rng = rng_for(master, &[c]);
    let net = hub_heavy(50, 300, &mut rng);
    // equal gaps, so that only the network tells issues apart
    let cfg = SimulationConfig::new(vec![0.8; 50], vec![0.2; 50], 1.0).with_seed(derive(master, c));
    CountryModel::new(format!("H{c}"), net, cfg).unwrap()
}

fn derive(master: u64, c: u64) -> u64 {
    ppi_core::seeds::derive_seed(master, &[c, 1])
}

#[test]
fn incoming_spillovers_reduce_contributions_when_pooled() {
    let countries: Vec<CountryModel> = (0..10).map(|c| hub_country(100, c)).collect();
    let rep = sensitivity_suite(&countries, &[Preset::NoNetwork], 200, 0).unwrap();
    let on = strength_contribution(&countries, &rep.baseline).unwrap();
    let off = strength_contribution(&countries, &rep.outcomes[0]).unwrap();
    assert!(on.spearman < 0.0 && on.p_value < 0.05, "on: ρ = {}, p = {}", on.spearman, on.p_value);
    assert!(off.p_value > 0.05, "off: ρ = {}, p = {}", off.spearman, off.p_value);
    let j = rep.top10(0).unwrap();
    assert!(j.iter().all(|&v| v < 1.0), "{j:?}");
}

#[test]
fn full_preset_has_zero_deltas() {
    let mut rng = rng_for(5, &[]);
    let (cfg, net) = demo_instance(15, 30, &mut rng);
    let c = CountryModel::new("x", net, cfg).unwrap();
    let rep = sensitivity_suite(std::slice::from_ref(&c), &[Preset::Full], 20, 0).unwrap();
    assert_eq!(rep.corruption_deltas(0), vec![0.0]);
    assert_eq!(rep.performance_deltas(0), vec![0.0]);
    assert_eq!(rep.top10(0).unwrap(), vec![1.0]);
}

#[test]
fn out_degree_beats_gap_in_the_allocation() {
    // issue 0 has the smaller gap but spills into both others
    let net = SpilloverNetwork::from_rows(&[vec![0.0, 0.5, 0.5], vec![0.0; 3], vec![0.0; 3]]).unwrap();
    let targets = [0.5, 0.6, 0.6];
    let initials = [0.3, 0.3, 0.3];
    let mut p = vec![0.0; 3];
    allocate(&targets, &initials, net.out_degrees(), &[false; 3], 0.0, 1.0, &mut p);
    // q = (0.2·3, 0.3·1, 0.3·1) = (0.6, 0.3, 0.3)
    assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.25).abs() < 1e-12);
    let cfg = SimulationConfig::new(targets.to_vec(), initials.to_vec(), 1.0).with_seed(3);
    let model = CountryModel::new("x", net, cfg).unwrap();
    let prof = retrospective(&model, &["a".into(), "b".into(), "b".into()], 200, 0).unwrap();
    assert!(prof.allocation[0] > prof.allocation[1] && prof.allocation[0] > prof.allocation[2], "{:?}", prof.allocation);
}

#[test]
fn constant_panel_gives_uniform_profile() {
    let panel = IndicatorPanel::new(
        vec!["A".into()],
        vec![2000, 2001],
        (0..4).map(|k| format!("i{k}")).collect(),
        vec!["p".into(), "p".into(), "q".into(), "r".into()],
        vec![0.4, 0.5, 0.6, 0.7, 0.4, 0.5, 0.6, 0.7],
    )
    .unwrap();
    let mut rng = rng_for(1, &[]);
    let net = erdos_renyi(4, 6, &mut rng);
    let model = CountryModel::retrospective(&panel, "A", net, 2.0, 0, 1).unwrap();
    let prof = retrospective(&model, &panel.pillars, 30, 0).unwrap();
    assert!(prof.allocation.iter().all(|&a| (a - 0.5).abs() < 1e-12));
    assert!((prof.pillar_totals.iter().sum::<f64>() - 2.0).abs() < 1e-9);
    assert_eq!(prof.pillar_totals, vec![1.0, 0.5, 0.5]);
}

#[test]
fn footprints_on_synthetic_clusters() {
    let mut rng = rng_for(21, &[]);
    let sp = synthetic_panel(12, 11, 12, 3, &mut rng);
    let panel = normalize_panel(&sp.panel, Some(&sp.gdp), true).unwrap();
    let clusters = ward_cluster(&panel, 3).unwrap();
    let last = panel.n_years() - 1;
    let mut differs = 0;
    let mut followers = 0;
    for c in 0..panel.n_countries() {
        let above = candidates_above(&clusters, c);
        if above.is_empty() {
            continue;
        }
        followers += 1;
        let mut nrng = rng_for(21, &[c as u64]);
        let net = erdos_renyi(12, 30, &mut nrng);
        let model = CountryModel::retrospective(&panel, &panel.countries[c], net, 1.0, 0, 1).unwrap();
        let base = retrospective(&model, &panel.pillars, 40, 0).unwrap();
        let cands: Vec<Candidate> = above
            .iter()
            .map(|&y| Candidate { id: panel.countries[y].clone(), final_indicators: panel.year_slice(y, last).to_vec() })
            .collect();
        let rep = footprints(&model, panel.year_slice(c, last), &base, &cands, &panel.pillars, 40, 0).unwrap();
        assert_eq!(rep.edges.len(), cands.len());
        assert!(rep.edges.iter().all(|e| (0.0..=1.0).contains(&e.feasibility)));
        differs += (rep.most_feasible != rep.trivial_target) as usize;
        assert!(footprints(&model, panel.year_slice(c, last), &base, &[], &panel.pillars, 5, 0).is_err());
        assert_eq!(weighted_jaccard(&base.allocation, &base.allocation).unwrap(), 1.0);
    }
    assert!(followers > 0);
    assert!(differs > 0, "most feasible equals trivial target for all {followers} followers");
}

#[test]
fn simulated_corruption_explains_its_own_data() {
    let countries: Vec<CountryModel> = (0..12u64)
        .map(|c| {
            let mut rng = rng_for(31, &[c]);
            let (cfg, net) = demo_instance(20, 40, &mut rng);
            CountryModel::new(format!("c{c}"), net, cfg.with_gamma(1.0 + c as f64)).unwrap()
        })
        .collect();
    let d = |seed: u64| -> Vec<f64> {
        countries
            .iter()
            .enumerate()
            .map(|(c, m)| run_monte_carlo(&m.config.clone().with_seed(seed + c as u64), &m.network, 200, 0).unwrap().mean_corruption)
            .collect()
    };
    let (empirical, simulated) = (d(1_000), d(2_000));
    let r2 = r_squared(&simulated, &empirical).unwrap();
    assert!(r2 >= 0.9, "R² = {r2}");
}

#[test]
fn calibration_table_properties() {
    let countries: Vec<CountryModel> = (0..5u64)
        .map(|c| {
            let mut rng = rng_for(41, &[c]);
            let (cfg, net) = demo_instance(10, 20, &mut rng);
            CountryModel::new(format!("c{c}"), net, cfg).unwrap()
        })
        .collect();
    let grid = GammaGrid::linspace(1.0, 10.0, 10).unwrap();
    let table = CorruptionTable::compute(&countries, &grid, 20, 1, 3).unwrap();
    assert_eq!(table, CorruptionTable::compute(&countries, &grid, 20, 4, 3).unwrap());
    let empirical = [0.3, 0.5, 0.2, 0.4, 0.6];
    let out = jump_search(&table, &empirical, 200, 9, 0).unwrap();
    let mse = out.mse_table();
    assert!(mse.windows(2).all(|w| w[1] <= w[0]), "{mse:?}");
    let homogeneous = (0..grid.len()).map(|k| ratios_on_subset(&table, &empirical, &[k]).unwrap().mse).fold(f64::INFINITY, f64::min);
    assert!(ratios_method(&table, &empirical).unwrap().mse <= homogeneous);
    assert_eq!(out, jump_search(&table, &empirical, 200, 9, 3).unwrap());
    let cal = calibrate(&table, &empirical, 200, 9, 0).unwrap();
    assert_eq!(cal.h_star, out.h_star);
    assert!(cal.distinct <= cal.h_star);
}
