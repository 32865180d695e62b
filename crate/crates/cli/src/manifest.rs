//! Run manifest: inputs, seed, tool version and checksums of every file
//! read and written, so any output is re-derivable from the manifest alone.
//! Contains no timestamps; identical runs produce identical manifests.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
struct FileEntry {
    path: String,
    sha256: String,
    bytes: u64,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    tool: String,
    version: String,
    command: String,
    args: BTreeMap<String, String>,
    seed: Option<u64>,
    inputs: Vec<FileEntry>,
    outputs: Vec<FileEntry>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Manifest {
            tool: "sistercity".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            args: BTreeMap::new(),
            seed: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn arg(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.args.insert(key.into(), value.to_string());
        self
    }

    pub fn seed(&mut self, seed: u64) -> &mut Self {
        self.seed = Some(seed);
        self
    }

    pub fn input(&mut self, path: &Path) -> Result<&mut Self> {
        self.inputs.push(entry(path)?);
        Ok(self)
    }

    /// Write `content` under the output directory and record its checksum.
    /// Outputs are recorded by file name, not absolute path, so runs into
    /// different directories still produce identical manifests.
    pub fn write_output(&mut self, out_dir: &Path, name: &str, content: &[u8]) -> Result<PathBuf> {
        let path = out_dir.join(name);
        std::fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
        let mut recorded = entry(&path)?;
        recorded.path = name.to_string();
        self.outputs.push(recorded);
        Ok(path)
    }

    /// Finalize: write `manifest.json` into the output directory.
    pub fn finish(&self, out_dir: &Path) -> Result<()> {
        let path = out_dir.join("manifest.json");
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

fn entry(path: &Path) -> Result<FileEntry> {
    let data = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let mut hasher = Sha256::new();
    hasher.update(&data);
    Ok(FileEntry {
        path: path.display().to_string(),
        sha256: format!("{:x}", hasher.finalize()),
        bytes: data.len() as u64,
    })
}
