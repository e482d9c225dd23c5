#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ppi_core::data::io::{write_country_year, write_rows};
use ppi_core::seeds::rng_for;
use ppi_core::synthetic::synthetic_panel;

pub fn ppi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppi"))
        .args(args)
        .env_remove("PPI_OUT_DIR")
        .output()
        .expect("ppi runs")
}

pub fn ok(args: &[&str]) -> Output {
    let o = ppi(args);
    assert!(
        o.status.success(),
        "ppi {args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    o
}

pub fn s(p: &Path) -> String {
    p.display().to_string()
}

/// Raw synthetic panel files: values.csv, pillars.csv, gdp.csv.
pub fn raw_fixture(dir: &Path, countries: usize, years: usize, indicators: usize, pillars: usize, seed: u64) -> (PathBuf, PathBuf, PathBuf) {
    let mut rng = rng_for(seed, &[]);
    let sp = synthetic_panel(countries, years, indicators, pillars, &mut rng);
    let p = &sp.panel;
    let mut rows = Vec::new();
    for (c, country) in p.countries.iter().enumerate() {
        for (y, year) in p.years.iter().enumerate() {
            for (k, ind) in p.indicators.iter().enumerate() {
                rows.push(vec![country.clone(), year.to_string(), ind.clone(), p.value(c, y, k).to_string()]);
            }
        }
    }
    let values = dir.join("values.csv");
    write_rows(&values, &["country", "year", "indicator", "value"], &rows).unwrap();
    let pil = dir.join("pillars.csv");
    let prow: Vec<Vec<String>> = p.indicators.iter().zip(&p.pillars).map(|(i, q)| vec![i.clone(), q.clone()]).collect();
    write_rows(&pil, &["indicator", "pillar"], &prow).unwrap();
    let gdp = dir.join("gdp.csv");
    let mut grows = Vec::new();
    for (c, id) in p.countries.iter().enumerate() {
        for (y, yr) in p.years.iter().enumerate() {
            grows.push((id.clone(), *yr, sp.gdp[c][y]));
        }
    }
    write_country_year(&gdp, &grows).unwrap();
    (values, pil, gdp)
}

/// Normalized fixture directory produced through the CLI.
pub fn normalized_fixture(dir: &Path, countries: usize, years: usize, indicators: usize, seed: u64) -> PathBuf {
    let (v, p, g) = raw_fixture(dir, countries, years, indicators, 4, seed);
    let data = dir.join("data");
    ok(&["normalize", "--values", &s(&v), "--pillars", &s(&p), "--gdp", &s(&g), "--out", &s(&data)]);
    data
}

/// Every file under `dir` except the manifest, relative path → bytes.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.file_name().unwrap() != "manifest.txt" {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

/// `[outputs]` table of a manifest.
pub fn manifest_outputs(dir: &Path) -> toml::Table {
    let text = std::fs::read_to_string(dir.join("manifest.txt")).unwrap();
    let doc: toml::Table = text.parse().unwrap();
    doc["outputs"].as_table().unwrap().clone()
}
