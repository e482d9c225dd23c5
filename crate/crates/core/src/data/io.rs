//! CSV formats for panels and auxiliary per-country series.
//!
//! * panel, long format: `country,year,indicator,value`
//! * pillar map: `indicator,pillar`
//! * flags: `indicator,n2,switch` (0/1)
//! * country-year series such as GDP per capita: `country,year,value`
//! * per-country scalars such as budgets: `country,value`

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use csv::StringRecord;

use super::panel::IndicatorPanel;
use crate::error::{Error, Result};

struct Table {
    path: std::path::PathBuf,
    columns: Vec<usize>,
    rows: Vec<(u64, StringRecord)>,
}

impl Table {
    fn read(path: &Path, wanted: &[&str]) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
        let headers = rdr.headers()?.clone();
        let mut columns = Vec::with_capacity(wanted.len());
        for w in wanted {
            match headers.iter().position(|h| h == *w) {
                Some(i) => columns.push(i),
                None => {
                    return Err(Error::MissingColumn {
                        path: path.to_path_buf(),
                        column: (*w).to_string(),
                    })
                }
            }
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line());
            rows.push((line, rec));
        }
        Ok(Self {
            path: path.to_path_buf(),
            columns,
            rows,
        })
    }

    fn field<'a>(&self, rec: &'a StringRecord, line: u64, col: usize) -> Result<&'a str> {
        rec.get(self.columns[col]).ok_or_else(|| self.err(line, "row is too short"))
    }

    fn err(&self, line: u64, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }

    fn parse<T: std::str::FromStr>(&self, rec: &StringRecord, line: u64, col: usize, what: &str) -> Result<T> {
        let raw = self.field(rec, line, col)?;
        raw.parse()
            .map_err(|_| self.err(line, format!("cannot parse {what} `{raw}`")))
    }
}

fn parse_flag(t: &Table, rec: &StringRecord, line: u64, col: usize) -> Result<bool> {
    match t.field(rec, line, col)? {
        "1" | "true" => Ok(true),
        "0" | "false" => Ok(false),
        other => Err(t.err(line, format!("flag must be 0 or 1, got `{other}`"))),
    }
}

/// Reads an `indicator,pillar` map.
pub fn read_pillar_map(path: &Path) -> Result<HashMap<String, String>> {
    let t = Table::read(path, &["indicator", "pillar"])?;
    let mut map = HashMap::new();
    for (line, rec) in &t.rows {
        let ind = t.field(rec, *line, 0)?.to_string();
        let pillar = t.field(rec, *line, 1)?.to_string();
        if map.insert(ind.clone(), pillar).is_some() {
            return Err(t.err(*line, format!("indicator `{ind}` listed twice")));
        }
    }
    Ok(map)
}

/// Reads an `indicator,n2,switch` flag table.
pub fn read_flags(path: &Path) -> Result<HashMap<String, (bool, bool)>> {
    let t = Table::read(path, &["indicator", "n2", "switch"])?;
    let mut map = HashMap::new();
    for (line, rec) in &t.rows {
        let ind = t.field(rec, *line, 0)?.to_string();
        let n2 = parse_flag(&t, rec, *line, 1)?;
        let sw = parse_flag(&t, rec, *line, 2)?;
        map.insert(ind, (n2, sw));
    }
    Ok(map)
}

/// Loads a long-format panel. Countries and indicators keep their order of
/// first appearance, years are sorted. Every (country, year, indicator) cell
/// must be present exactly once.
pub fn load_panel(values: &Path, pillars: &Path, flags: Option<&Path>) -> Result<IndicatorPanel> {
    let pillar_map = read_pillar_map(pillars)?;
    let t = Table::read(values, &["country", "year", "indicator", "value"])?;

    let mut countries: Vec<String> = Vec::new();
    let mut country_idx: HashMap<String, usize> = HashMap::new();
    let mut indicators: Vec<String> = Vec::new();
    let mut indicator_idx: HashMap<String, usize> = HashMap::new();
    let mut years: Vec<i32> = Vec::new();
    let mut cells: Vec<(usize, i32, usize, f64, u64)> = Vec::with_capacity(t.rows.len());

    for (line, rec) in &t.rows {
        let c = t.field(rec, *line, 0)?;
        let year: i32 = t.parse(rec, *line, 1, "year")?;
        let k = t.field(rec, *line, 2)?;
        let v: f64 = t.parse(rec, *line, 3, "value")?;
        if !v.is_finite() {
            return Err(t.err(*line, "value is not finite"));
        }
        let ci = *country_idx.entry(c.to_string()).or_insert_with(|| {
            countries.push(c.to_string());
            countries.len() - 1
        });
        let ki = *indicator_idx.entry(k.to_string()).or_insert_with(|| {
            indicators.push(k.to_string());
            indicators.len() - 1
        });
        if !years.contains(&year) {
            years.push(year);
        }
        cells.push((ci, year, ki, v, *line));
    }
    years.sort_unstable();

    let (nc, ny, nk) = (countries.len(), years.len(), indicators.len());
    let mut grid: Vec<Option<f64>> = vec![None; nc * ny * nk];
    for (ci, year, ki, v, line) in cells {
        let yi = years.binary_search(&year).expect("year was collected");
        let slot = &mut grid[(ci * ny + yi) * nk + ki];
        if slot.is_some() {
            return Err(t.err(
                line,
                format!("duplicate cell ({}, {year}, {})", countries[ci], indicators[ki]),
            ));
        }
        *slot = Some(v);
    }

    let mut missing = Vec::new();
    for ci in 0..nc {
        for (yi, &year) in years.iter().enumerate() {
            for ki in 0..nk {
                if grid[(ci * ny + yi) * nk + ki].is_none() {
                    missing.push((countries[ci].clone(), year, indicators[ki].clone()));
                }
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingCells(missing));
    }

    let mut pillar_list = Vec::with_capacity(nk);
    for k in &indicators {
        match pillar_map.get(k) {
            Some(p) => pillar_list.push(p.clone()),
            None => {
                return Err(Error::Contract(format!(
                    "indicator `{k}` has no entry in {}",
                    pillars.display()
                )))
            }
        }
    }

    let values = grid.into_iter().map(|v| v.expect("checked above")).collect();
    let mut panel = IndicatorPanel::new(countries, years, indicators, pillar_list, values)?;
    if let Some(path) = flags {
        let f = read_flags(path)?;
        for (k, id) in panel.indicators.clone().iter().enumerate() {
            if let Some(&(n2, sw)) = f.get(id) {
                panel.n2[k] = n2;
                panel.switched[k] = sw;
            }
        }
    }
    Ok(panel)
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(csv::Writer::from_path(path)?)
}

/// Writes the panel in long format plus its pillar map and flags.
pub fn save_panel(panel: &IndicatorPanel, values: &Path, pillars: &Path, flags: &Path) -> Result<()> {
    let mut w = writer(values)?;
    w.write_record(["country", "year", "indicator", "value"])?;
    for (c, country) in panel.countries.iter().enumerate() {
        for (y, year) in panel.years.iter().enumerate() {
            for (k, ind) in panel.indicators.iter().enumerate() {
                w.write_record([
                    country.as_str(),
                    &year.to_string(),
                    ind.as_str(),
                    &panel.value(c, y, k).to_string(),
                ])?;
            }
        }
    }
    w.flush()?;

    let mut w = writer(pillars)?;
    w.write_record(["indicator", "pillar"])?;
    for (ind, p) in panel.indicators.iter().zip(&panel.pillars) {
        w.write_record([ind, p])?;
    }
    w.flush()?;

    let mut w = writer(flags)?;
    w.write_record(["indicator", "n2", "switch"])?;
    let bit = |b: bool| if b { "1" } else { "0" };
    for k in 0..panel.n_indicators() {
        w.write_record([panel.indicators[k].as_str(), bit(panel.n2[k]), bit(panel.switched[k])])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `country,year,value` rows.
pub fn read_country_year(path: &Path) -> Result<HashMap<(String, i32), f64>> {
    let t = Table::read(path, &["country", "year", "value"])?;
    let mut map = HashMap::new();
    for (line, rec) in &t.rows {
        let c = t.field(rec, *line, 0)?.to_string();
        let y: i32 = t.parse(rec, *line, 1, "year")?;
        let v: f64 = t.parse(rec, *line, 2, "value")?;
        if map.insert((c.clone(), y), v).is_some() {
            return Err(t.err(*line, format!("duplicate entry ({c}, {y})")));
        }
    }
    Ok(map)
}

/// Reads `country,value` rows.
pub fn read_country_values(path: &Path) -> Result<HashMap<String, f64>> {
    let t = Table::read(path, &["country", "value"])?;
    let mut map = HashMap::new();
    for (line, rec) in &t.rows {
        let c = t.field(rec, *line, 0)?.to_string();
        let v: f64 = t.parse(rec, *line, 1, "value")?;
        if map.insert(c.clone(), v).is_some() {
            return Err(t.err(*line, format!("duplicate country `{c}`")));
        }
    }
    Ok(map)
}

/// Writes `country,year,value` rows in panel order.
pub fn write_country_year(path: &Path, rows: &[(String, i32, f64)]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["country", "year", "value"])?;
    for (c, y, v) in rows {
        w.write_record([c.as_str(), &y.to_string(), &v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a headed CSV from string rows.
pub fn write_rows(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes plain text, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}
