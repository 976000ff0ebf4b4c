//! Output files and the run manifest written next to them.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use dfg_shaper::{ModelConfig, Spectrum};
use serde::{Deserialize, Serialize};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// RFC 3339, UTC.
    pub timestamp: String,
    pub parameters: serde_json::Value,
    /// Complete resolved configuration; feeding this file back through
    /// `--config` reproduces the run.
    pub config: ModelConfig,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value, config: ModelConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            parameters,
            config,
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        write_file(&path, |w| {
            serde_json::to_writer_pretty(&mut *w, self)?;
            writeln!(w)?;
            Ok(())
        })?;
        Ok(path)
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

pub fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    body(&mut w).with_context(|| format!("cannot write {}", path.display()))?;
    w.flush()
        .with_context(|| format!("cannot write {}", path.display()))
}

/// Two columns, `wavelength_nm intensity`, after `#` comment lines. Values
/// use the shortest representation that reads back to the same float.
pub fn write_spectrum(path: &Path, header: &[String], spectrum: &Spectrum) -> Result<()> {
    write_file(path, |w| {
        for line in header {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "# wavelength_nm intensity")?;
        let g = spectrum.grid();
        for (i, v) in spectrum.intensity().iter().enumerate() {
            writeln!(w, "{} {}", g.wavelength(i), v)?;
        }
        Ok(())
    })
}

#[derive(Serialize)]
pub struct SpectrumDocument<'a> {
    pub wavelength_nm: Vec<f64>,
    pub intensity: &'a [f64],
}

impl<'a> SpectrumDocument<'a> {
    pub fn new(spectrum: &'a Spectrum) -> Self {
        Self {
            wavelength_nm: spectrum.grid().wavelengths(),
            intensity: spectrum.intensity(),
        }
    }
}
