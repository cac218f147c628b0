//! Atomic output files and run manifests.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputEntry {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub artifact: String,
    pub version: String,
    pub command: String,
    pub config_sha256: String,
    pub master_seed: u64,
    pub parallelism: usize,
    pub wall_time_seconds: f64,
    pub outputs: Vec<OutputEntry>,
    /// Effective configuration, canonical JSON.
    pub config: serde_json::Value,
}

impl Manifest {
    pub fn file_name(command: &str) -> String {
        format!("manifest_{command}.json")
    }
}

/// Collects outputs of one command, each written through a temporary file in
/// the target directory and renamed into place.
pub struct OutputDir {
    dir: PathBuf,
    written: Vec<OutputEntry>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Config(format!("output directory {} is not writable: {e}", dir.display())))?;
        Ok(OutputDir { dir: dir.to_path_buf(), written: vec![] })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        write_atomic(&self.dir.join(name), bytes)?;
        self.written.push(OutputEntry { file: name.to_string(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 });
        Ok(())
    }

    /// Renders into memory first so a failure leaves no partial file.
    pub fn write_with(
        &mut self,
        name: &str,
        render: impl FnOnce(&mut Vec<u8>) -> nimfa_core::Result<()>,
    ) -> Result<(), CliError> {
        let mut buf = Vec::new();
        render(&mut buf)?;
        self.write(name, &buf)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.into()))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn outputs(&self) -> &[OutputEntry] {
        &self.written
    }

    pub fn finish(self, mut manifest: Manifest) -> Result<Manifest, CliError> {
        manifest.outputs = self.written;
        let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.into()))?;
        text.push('\n');
        write_atomic(&self.dir.join(Manifest::file_name(&manifest.command)), text.as_bytes())?;
        Ok(manifest)
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// Checks a manifest against the files next to it and, when given, against
/// the canonical JSON of a configuration. Returns the list of problems.
pub fn verify_manifest(manifest_path: &Path, config_json: Option<&str>) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(manifest_path)?;
    let manifest: Manifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", manifest_path.display())))?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let mut problems = vec![];
    let embedded = serde_json::to_string(&manifest.config).map_err(|e| CliError::Io(e.into()))?;
    if sha256_hex(embedded.as_bytes()) != manifest.config_sha256 {
        problems.push("embedded configuration does not match config_sha256".to_string());
    }
    if let Some(cfg) = config_json {
        if sha256_hex(cfg.as_bytes()) != manifest.config_sha256 {
            problems.push("configuration hash differs from the manifest".to_string());
        }
    }
    for entry in &manifest.outputs {
        match std::fs::read(dir.join(&entry.file)) {
            Ok(bytes) if sha256_hex(&bytes) == entry.sha256 => {}
            Ok(_) => problems.push(format!("{}: content hash differs", entry.file)),
            Err(e) => problems.push(format!("{}: {e}", entry.file)),
        }
    }
    Ok(problems)
}
