//! CSV tables with a commented config header, plus sibling metadata.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use crate::config::RunConfig;

pub const TOOL: &str = "dicke-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Header block: a tool line, then the effective config as TOML with every
/// line prefixed by `# `.
pub fn header(cfg: &RunConfig) -> String {
    let mut out = format!("# {TOOL} {VERSION}\n");
    for line in cfg.to_toml().lines() {
        if line.is_empty() {
            out.push_str("#\n");
        } else {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

/// Recovers the config echoed by [`header`] from a table's text.
pub fn config_from_header(text: &str) -> anyhow::Result<RunConfig> {
    let mut toml_text = String::new();
    for line in text.lines().skip(1) {
        let Some(rest) = line.strip_prefix('#') else { break };
        toml_text.push_str(rest.strip_prefix(' ').unwrap_or(rest));
        toml_text.push('\n');
    }
    RunConfig::from_toml_str(&toml_text)
}

#[derive(Serialize)]
struct Meta<'a> {
    tool: &'a str,
    version: &'a str,
    pipeline: &'a str,
    config: &'a RunConfig,
    columns: &'a [&'a str],
    rows: usize,
    failures: &'a [String],
}

/// One output table being assembled in memory.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push<I, T>(&mut self, row: I)
    where
        I: IntoIterator<Item = T>,
        T: Display,
    {
        let row: Vec<String> = row.into_iter().map(|v| v.to_string()).collect();
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// Writes `<dir>/<name>` and `<dir>/<name>.meta.json`.
    pub fn write(&self, cfg: &RunConfig, name: &str, failures: &[String]) -> anyhow::Result<PathBuf> {
        fs::create_dir_all(&cfg.output_dir)
            .with_context(|| format!("creating {}", cfg.output_dir.display()))?;
        let path = cfg.output_dir.join(name);
        let mut text = header(cfg);
        text.push_str(&self.columns.join(","));
        text.push('\n');
        for r in &self.rows {
            text.push_str(&r.join(","));
            text.push('\n');
        }
        write_atomic(&path, text.as_bytes())?;
        let meta = Meta {
            tool: TOOL,
            version: VERSION,
            pipeline: cfg.pipeline.name(),
            config: cfg,
            columns: &self.columns,
            rows: self.rows.len(),
            failures,
        };
        let json = serde_json::to_string_pretty(&meta)?;
        write_atomic(&meta_path(&path), json.as_bytes())?;
        Ok(path)
    }
}

pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Writes through a temporary sibling so readers never see partial files.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming onto {}", path.display()))?;
    Ok(())
}
