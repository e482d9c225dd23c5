//! Settings resolved from flags, a TOML config file and defaults, in that
//! order of precedence.
//!
//! A config file holds a `[common]` table and one table per subcommand
//! (`[simulate]`, `[calibrate]`, ...). Keys are the long flag names with
//! dashes replaced by underscores. Every resolved setting is recorded so the
//! manifest can replay the command.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use toml::{Table, Value};

pub trait Setting: FromStr + Clone {
    fn to_value(&self) -> Value;
}

impl Setting for u64 {
    fn to_value(&self) -> Value {
        match i64::try_from(*self) {
            Ok(v) => Value::Integer(v),
            Err(_) => Value::String(self.to_string()),
        }
    }
}

impl Setting for usize {
    fn to_value(&self) -> Value {
        (*self as u64).to_value()
    }
}

impl Setting for f64 {
    fn to_value(&self) -> Value {
        Value::Float(*self)
    }
}

impl Setting for bool {
    fn to_value(&self) -> Value {
        Value::Boolean(*self)
    }
}

impl Setting for String {
    fn to_value(&self) -> Value {
        Value::String(self.clone())
    }
}

impl Setting for PathBuf {
    fn to_value(&self) -> Value {
        Value::String(self.display().to_string())
    }
}

fn value_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Integer(i) => Some(i.to_string()),
        Value::Float(f) => Some(f.to_string()),
        Value::Boolean(b) => Some(b.to_string()),
        _ => None,
    }
}

pub struct Resolver {
    file: Table,
    section: String,
    pub config_path: Option<PathBuf>,
    used: Table,
    asked: BTreeSet<String>,
}

impl Resolver {
    pub fn load(path: Option<&Path>, section: &str) -> Result<Self> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("cannot read config {}", p.display()))?;
                text.parse::<Table>().with_context(|| format!("{}: invalid TOML", p.display()))?
            }
            None => Table::new(),
        };
        Ok(Self {
            file,
            section: section.to_string(),
            config_path: path.map(Path::to_path_buf),
            used: Table::new(),
            asked: BTreeSet::new(),
        })
    }

    fn lookup(&self, key: &str) -> Option<&Value> {
        let in_table = |name: &str| self.file.get(name).and_then(Value::as_table).and_then(|t| t.get(key));
        in_table(&self.section).or_else(|| in_table("common"))
    }

    fn from_file<T: Setting>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        self.asked.insert(key.to_string());
        let Some(v) = self.lookup(key) else { return Ok(None) };
        let text = value_text(v).ok_or_else(|| anyhow!("config key `{key}` must be a string, number or boolean"))?;
        text.parse::<T>()
            .map(Some)
            .map_err(|e| anyhow!("config key `{key}`: cannot parse `{text}`: {e}"))
    }

    /// Flag, else config, else `default`; recorded.
    pub fn get<T: Setting>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        self.asked.insert(key.to_string());
        let v = match flag {
            Some(v) => v,
            None => self.from_file(key)?.unwrap_or(default),
        };
        self.used.insert(key.to_string(), v.to_value());
        Ok(v)
    }

    /// Flag, else config; recorded when present.
    pub fn opt<T: Setting>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        self.asked.insert(key.to_string());
        let v = match flag {
            Some(v) => Some(v),
            None => self.from_file(key)?,
        };
        if let Some(v) = &v {
            self.used.insert(key.to_string(), v.to_value());
        }
        Ok(v)
    }

    pub fn req<T: Setting>(&mut self, key: &str, flag: Option<T>) -> Result<T>
    where
        T::Err: Display,
    {
        self.opt(key, flag)?
            .ok_or_else(|| anyhow!("missing required setting --{}", key.replace('_', "-")))
    }

    /// Resolved like [`Resolver::get`] but left out of the manifest because
    /// it cannot change any output.
    pub fn transient<T: Setting>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        self.asked.insert(key.to_string());
        Ok(match flag {
            Some(v) => v,
            None => self.from_file(key)?.unwrap_or(default),
        })
    }

    pub fn used(&self) -> &Table {
        &self.used
    }

    /// Rejects keys in the command's own table that no setting asked for.
    pub fn check_unknown(&self) -> Result<()> {
        if let Some(t) = self.file.get(&self.section).and_then(Value::as_table) {
            if let Some(k) = t.keys().find(|k| !self.asked.contains(*k)) {
                bail!("unknown key `{k}` in config section [{}]", self.section);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolver(text: &str, section: &str) -> Resolver {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, text).unwrap();
        Resolver::load(Some(&p), section).unwrap()
    }

    #[test]
    fn flags_beat_section_beats_common() {
        let mut r = resolver("[common]\nseed = 3\nruns = 9\n[simulate]\nruns = 5\n", "simulate");
        assert_eq!(r.get("seed", None, 0u64).unwrap(), 3);
        assert_eq!(r.get("runs", None, 1usize).unwrap(), 5);
        assert_eq!(r.get("runs", Some(2usize), 1).unwrap(), 2);
        assert_eq!(r.get("budget", None, 1.0f64).unwrap(), 1.0);
        assert_eq!(r.used().get("runs"), Some(&Value::Integer(2)));
    }

    #[test]
    fn floats_and_unknown_keys() {
        let mut r = resolver("[calibrate]\ngamma_max = 30\ntypo = 1\n", "calibrate");
        assert_eq!(r.get("gamma_max", None, 1.0f64).unwrap(), 30.0);
        assert!(r.check_unknown().is_err());
        assert!(r.req::<PathBuf>("data", None).unwrap_err().to_string().contains("--data"));
    }
}
