//! Report bundles: a JSON-lines results log, CSV tables and a MANIFEST.

use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const RESULTS_FILE: &str = "results.jsonl";
pub const MANIFEST_FILE: &str = "MANIFEST";

/// A CSV table. Tables flagged as series are also exported as plot data.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub series: bool,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            series: false,
        }
    }

    pub fn series(mut self) -> Self {
        self.series = true;
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let to_err = |e: csv::Error| CliError::Config(format!("csv: {e}"));
        w.write_record(&self.header).map_err(to_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(to_err)?;
        }
        w.into_inner().map_err(|e| CliError::Config(format!("csv: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub experiment: String,
    pub config_sha256: String,
    pub version: String,
    pub workers: usize,
    pub wall_time_s: f64,
    /// `(file name, sha256)` of every data file.
    pub files: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportBundle {
    pub dir: PathBuf,
    pub records: Vec<Value>,
    pub tables: Vec<Table>,
    /// One line per query, for standard output.
    pub summary: Vec<String>,
    pub manifest: Option<Manifest>,
}

impl ReportBundle {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: dir.into(),
            records: Vec::new(),
            tables: Vec::new(),
            summary: Vec::new(),
            manifest: None,
        }
    }

    pub fn record(&mut self, value: impl Serialize) {
        self.records.push(serde_json::to_value(value).expect("records serialize"));
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Writes the results log and tables; returns `(file name, sha256)` pairs.
    pub(crate) fn write_data(&self) -> CliResult<Vec<(String, String)>> {
        std::fs::create_dir_all(&self.dir).map_err(CliError::io(&self.dir))?;
        let mut log = Vec::new();
        for r in &self.records {
            serde_json::to_writer(&mut log, r).expect("records serialize");
            log.push(b'\n');
        }
        let mut files = vec![(RESULTS_FILE.to_string(), log)];
        for t in &self.tables {
            files.push((t.file_name(), t.to_csv()?));
        }
        files
            .into_iter()
            .map(|(name, bytes)| {
                let path = self.dir.join(&name);
                std::fs::write(&path, &bytes).map_err(CliError::io(&path))?;
                Ok((name, hex::encode(Sha256::digest(&bytes))))
            })
            .collect()
    }

    pub(crate) fn write_manifest(&self) -> CliResult<()> {
        let Some(m) = &self.manifest else { return Ok(()) };
        let path = self.dir.join(MANIFEST_FILE);
        let mut text = format!(
            "experiment = {}\nconfig_sha256 = {}\nversion = {}\nworkers = {}\nwall_time_s = {:.3}\n",
            m.experiment, m.config_sha256, m.version, m.workers, m.wall_time_s
        );
        for (name, sha) in &m.files {
            text += &format!("file = {name} {sha}\n");
        }
        std::fs::write(&path, text).map_err(CliError::io(&path))
    }
}

/// Writes one whitespace-delimited `.dat` file per series table under
/// `<bundle>/plot/`, plus `columns.gp` listing the columns of each file.
/// Returns the written paths; a bundle without series writes nothing and warns.
pub fn emit_plot_data(bundle: &ReportBundle) -> CliResult<Vec<PathBuf>> {
    let series: Vec<&Table> = bundle.tables.iter().filter(|t| t.series).collect();
    if series.is_empty() {
        log::warn!("bundle {} has no series; no plot data written", bundle.dir.display());
        return Ok(Vec::new());
    }
    let dir = bundle.dir.join("plot");
    std::fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;
    let mut written = Vec::new();
    let mut script = String::from("# column listing for the .dat files in this directory\n");
    for t in series {
        if t.rows.is_empty() {
            log::warn!("series {} is empty; skipped", t.name);
            continue;
        }
        let path = dir.join(format!("{}.dat", t.name));
        let mut f = std::fs::File::create(&path).map_err(CliError::io(&path))?;
        let mut body = format!("# {}\n", t.header.join(" "));
        for r in &t.rows {
            body += &r.join(" ");
            body.push('\n');
        }
        f.write_all(body.as_bytes()).map_err(CliError::io(&path))?;
        script += &format!("\n# {}.dat\n", t.name);
        for (i, c) in t.header.iter().enumerate() {
            script += &format!("#   column {}: {c}\n", i + 1);
        }
        script += &format!("# plot '{}.dat' using 1:2\n", t.name);
        written.push(path);
    }
    let path = dir.join("columns.gp");
    std::fs::write(&path, script).map_err(CliError::io(&path))?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_bundle_writes_no_plot_files() {
        let dir = tempfile::tempdir().unwrap();
        let b = ReportBundle::new(dir.path());
        assert!(emit_plot_data(&b).unwrap().is_empty());
        assert!(!dir.path().join("plot").exists());
    }

    #[test]
    fn series_become_columns() {
        let dir = tempfile::tempdir().unwrap();
        let mut b = ReportBundle::new(dir.path());
        let mut t = Table::new("avg", &["N", "value"]).series();
        for (n, v) in [(1, "0.5"), (2, "0.25"), (4, "0.125")] {
            t.push(vec![n.to_string(), v.to_string()]);
        }
        b.tables.push(t);
        b.tables.push(Table::new("other", &["a"]));
        let files = emit_plot_data(&b).unwrap();
        assert_eq!(files.len(), 2);
        let text = std::fs::read_to_string(&files[0]).unwrap();
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows, vec!["1 0.5", "2 0.25", "4 0.125"]);
    }
}
