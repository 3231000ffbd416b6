//! CSV tables and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Round-trip exact: 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// In-memory CSV with a fixed header.
#[derive(Debug, Clone)]
pub struct Csv {
    columns: usize,
    text: String,
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let text = header.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(",") + "\n";
        Self { columns: header.len(), text }
    }

    pub fn row(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.columns, "CSV row width");
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            let _ = write!(self.text, "{}", num(*v));
        }
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Output directory that remembers what it has written.
#[derive(Debug)]
pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(CliError::io(root))?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<PathBuf> {
        let path = self.path(name);
        fs::write(&path, contents).map_err(CliError::io(&path))?;
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.to_string());
        }
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<PathBuf> {
        let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
        self.write(name, &text)
    }

    /// Writes `manifest.json` listing itself and every earlier file.
    pub fn finish(mut self, config: Value, summary: Value) -> CliResult<PathBuf> {
        self.written.push(MANIFEST.to_string());
        let manifest = Manifest {
            config,
            tool_version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            outputs: self.written.clone(),
            summary,
        };
        self.write_json(MANIFEST, &manifest)
    }
}

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Serialize)]
struct Manifest {
    config: Value,
    tool_version: &'static str,
    timestamp: String,
    outputs: Vec<String>,
    summary: Value,
}
