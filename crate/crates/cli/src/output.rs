//! Deterministic file output: CSV writers with fixed 17-significant-digit
//! formatting, and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::CliError;

/// 17 significant digits; regression diffs stay meaningful.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Tracks every file written so the manifest can list them all.
pub struct OutputDir {
    root: PathBuf,
    files: Vec<String>,
    started: Instant,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root)
            .map_err(|e| CliError::Io(format!("creating {}: {e}", root.display())))?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write_csv(&mut self, name: &str, header: &str, rows: &[String]) -> Result<(), CliError> {
        let path = self.root.join(name);
        let mut out = String::with_capacity(rows.len() * 64 + header.len() + 1);
        out.push_str(header);
        out.push('\n');
        for row in rows {
            out.push_str(row);
            out.push('\n');
        }
        fs::write(&path, out).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        let path = self.root.join(name);
        fs::write(&path, text)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Write `manifest.json`: config echo, version, wall time, file list,
    /// and per-mode summary values.
    pub fn finish(mut self, config_echo: &str, summary: serde_json::Value) -> Result<(), CliError> {
        let manifest = Manifest {
            version: env!("CARGO_PKG_VERSION"),
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
            config: config_echo,
            files: &self.files,
            summary,
        };
        let text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::Io(format!("manifest serialization: {e}")))?;
        let path = self.root.join("manifest.json");
        let mut f = fs::File::create(&path)
            .map_err(|e| CliError::Io(format!("creating {}: {e}", path.display())))?;
        f.write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
        Ok(())
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'a str,
    wall_time_seconds: f64,
    config: &'a str,
    files: &'a [String],
    summary: serde_json::Value,
}
