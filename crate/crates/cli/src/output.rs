//! In-memory run results and the writer that puts them on disk together
//! with the manifest.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use handshake_core::io::Table;

use crate::params::{to_toml, Params};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Grid,
    Png,
}

impl Format {
    pub const ALL: [&'static str; 3] = ["csv", "grid", "png"];

    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "grid" | "binary-grid" => Ok(Format::Grid),
            "png" => Ok(Format::Png),
            other => Err(CliError::Usage(format!(
                "unknown format `{other}`, expected one of {}",
                Format::ALL.join(", ")
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Grid => "grid",
            Format::Png => "png",
        }
    }
}

/// Everything one command produced, not yet written.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub files: Vec<(String, Vec<u8>)>,
    /// Headline numbers, echoed to the terminal and the manifest.
    pub summary: Vec<(String, String)>,
}

impl RunOutput {
    pub fn table(&mut self, name: &str, t: &Table) -> Result<(), CliError> {
        self.files.push((name.to_string(), t.to_bytes()?));
        Ok(())
    }

    pub fn note(&mut self, key: &str, v: impl ToString) {
        self.summary.push((key.to_string(), v.to_string()));
    }
}

/// Key-value table used for summary reports.
pub fn report(rows: &[(String, String)]) -> Table {
    let mut t = Table::new(["quantity", "value"]);
    for (k, v) in rows {
        t.push_raw(vec![k.clone(), v.clone()]);
    }
    t
}

pub struct RunInfo<'a> {
    pub command: &'a str,
    pub reproduces: &'a str,
    pub formats: &'a [Format],
    pub params: &'a Params,
    pub replayed_from: Option<&'a Path>,
}

pub fn manifest_text(info: &RunInfo, out: &RunOutput) -> Result<String, CliError> {
    let mut run = toml::Table::new();
    run.insert("command".into(), info.command.into());
    run.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    run.insert(
        "created".into(),
        Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true).into(),
    );
    run.insert("reproduces".into(), info.reproduces.into());
    run.insert(
        "formats".into(),
        toml::Value::Array(info.formats.iter().map(|f| f.name().into()).collect()),
    );
    run.insert(
        "files".into(),
        toml::Value::Array(out.files.iter().map(|(n, _)| n.as_str().into()).collect()),
    );
    if let Some(p) = info.replayed_from {
        run.insert("replayed_from".into(), p.display().to_string().into());
    }
    let mut params = toml::Table::new();
    for (k, v) in info.params.iter() {
        params.insert(k.to_string(), to_toml(v));
    }
    let mut summary = toml::Table::new();
    for (k, v) in &out.summary {
        summary.insert(k.clone(), v.as_str().into());
    }
    let mut doc = toml::Table::new();
    doc.insert("run".into(), toml::Value::Table(run));
    doc.insert(info.command.into(), toml::Value::Table(params));
    doc.insert("summary".into(), toml::Value::Table(summary));
    toml::to_string(&doc).map_err(|e| CliError::Io(format!("manifest: {e}")))
}

/// Writes every file and the manifest. Returns the written paths.
pub fn write_all(dir: &Path, info: &RunInfo, out: &RunOutput) -> Result<Vec<PathBuf>, CliError> {
    let manifest = manifest_text(info, out)?;
    let io_err = |p: &Path, e: std::io::Error| CliError::Io(format!("{}: {e}", p.display()));
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut written = Vec::with_capacity(out.files.len() + 1);
    for (name, bytes) in &out.files {
        let p = dir.join(name);
        fs::write(&p, bytes).map_err(|e| io_err(&p, e))?;
        written.push(p);
    }
    let p = dir.join("manifest.toml");
    fs::write(&p, manifest).map_err(|e| io_err(&p, e))?;
    written.push(p);
    Ok(written)
}
