//! Output bookkeeping and the `manifest.txt` written next to every result.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::config::Resolver;

pub const MANIFEST: &str = "manifest.txt";

/// Output directory plus the files written into it, in write order.
pub struct Output {
    pub dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    /// Registers `rel` and returns its full path.
    pub fn path(&mut self, rel: &str) -> PathBuf {
        if !self.files.iter().any(|f| f == rel) {
            self.files.push(rel.to_string());
        }
        self.dir.join(rel)
    }

    pub fn csv(&mut self, rel: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let p = self.path(rel);
        ppi_core::data::io::write_rows(&p, header, rows).with_context(|| format!("cannot write {}", p.display()))
    }

    pub fn text(&mut self, rel: &str, text: &str) -> Result<()> {
        let p = self.path(rel);
        ppi_core::data::io::write_text(&p, text).with_context(|| format!("cannot write {}", p.display()))
    }
}

/// Input files, kept sorted and unique.
#[derive(Default)]
pub struct Inputs(Vec<PathBuf>);

impl Inputs {
    pub fn add(&mut self, p: &Path) {
        let p = p.to_path_buf();
        if let Err(at) = self.0.binary_search(&p) {
            self.0.insert(at, p);
        }
    }
}

pub fn sha256_file(p: &Path) -> Result<String> {
    let bytes = std::fs::read(p).with_context(|| format!("cannot read {}", p.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Writes the manifest. Its `[<command>]` table holds every resolved setting,
/// so `ppi <command> --config <out>/manifest.txt` replays the run.
pub fn write_manifest(out: &mut Output, command: &str, resolver: &Resolver, inputs: &Inputs) -> Result<()> {
    let mut head = Table::new();
    head.insert("tool".into(), Value::String("ppi".into()));
    head.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
    head.insert("command".into(), Value::String(command.into()));
    head.insert("out".into(), Value::String(out.dir.display().to_string()));
    if let Some(c) = &resolver.config_path {
        head.insert("config".into(), Value::String(c.display().to_string()));
    }
    head.insert(
        "replay".into(),
        Value::String(format!("ppi {command} --config {}", out.dir.join(MANIFEST).display())),
    );

    let mut ins = Table::new();
    for p in &inputs.0 {
        ins.insert(p.display().to_string(), Value::String(sha256_file(p)?));
    }
    let mut outs = Table::new();
    let mut files = out.files.clone();
    files.sort();
    for f in &files {
        outs.insert(f.clone(), Value::String(sha256_file(&out.dir.join(f))?));
    }

    let mut doc = Table::new();
    doc.insert("manifest".into(), Value::Table(head));
    doc.insert(command.into(), Value::Table(resolver.used().clone()));
    doc.insert("inputs".into(), Value::Table(ins));
    doc.insert("outputs".into(), Value::Table(outs));
    let text = toml::to_string(&doc).context("cannot serialize the manifest")?;
    let p = out.dir.join(MANIFEST);
    std::fs::write(&p, text).with_context(|| format!("cannot write {}", p.display()))
}
