//! Output plumbing: delimited tables that name their manifest, and the JSON
//! manifest describing the run that produced them.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, as given.
    pub invocation: Vec<String>,
    pub config: RunConfig,
    pub seed: u64,
    pub tool_version: String,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        let json = serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
        fs::write(&path, json + "\n")?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

/// A table whose rows are rendered eagerly; written as comma-separated text
/// after a `#` line naming the manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        for r in &self.rows {
            writeln!(w, "{}", r.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.render(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("table cells are UTF-8")
    }
}

/// Writes `body` to `dir/name` behind a comment line referencing the manifest.
pub fn write_output(dir: &Path, name: &str, command: &str, body: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut f = fs::File::create(&path)?;
    writeln!(
        f,
        "# produced by cellsearch {TOOL_VERSION} `{command}`, see {MANIFEST_FILE}"
    )?;
    f.write_all(body.as_bytes())?;
    Ok(path)
}

/// Shortest round-tripping representation of a float, empty for `None`.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.map_or(String::new(), fmt_f64)
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:e}")
    }
}
