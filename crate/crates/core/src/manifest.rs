//! Run manifests: what produced an artifact, hashed and stored beside it.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Input path → sha256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub params: serde_json::Value,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, params: &impl Serialize) -> Result<Self> {
        Ok(Self {
            command: command.into(),
            inputs: BTreeMap::new(),
            seed: None,
            params: serde_json::to_value(params)?,
            version: env!("CARGO_PKG_VERSION").to_string(),
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Records `path` and the hash of `bytes` read from it.
    pub fn with_input(mut self, path: &Path, bytes: &[u8]) -> Self {
        self.inputs
            .insert(path.display().to_string(), sha256_hex(bytes));
        self
    }

    pub fn hash(&self) -> String {
        sha256_hex(&serde_json::to_vec(self).expect("manifest serializes"))
    }
}

/// Writes through a temporary file in the same directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    path.with_file_name(name)
}

/// Writes `contents` and its manifest sidecar. `contents` must already carry the manifest hash.
pub fn write_artifact(path: &Path, contents: &str, manifest: &RunManifest) -> Result<()> {
    let mut side = serde_json::to_string_pretty(manifest)?;
    side.push('\n');
    write_atomic(&sidecar_path(path), side.as_bytes())?;
    write_atomic(path, contents.as_bytes())
}

/// Manifest hash carried by an artifact: a `manifest=<hash>` field on the
/// first line, or a top-level `"manifest"` JSON string.
pub fn embedded_hash(contents: &str) -> Option<String> {
    let first = contents.lines().next().unwrap_or("");
    if let Some(h) = first
        .split_whitespace()
        .find_map(|w| w.strip_prefix("manifest="))
    {
        return Some(h.to_string());
    }
    let v: serde_json::Value = serde_json::from_str(contents).ok()?;
    v.get("manifest")?.as_str().map(str::to_string)
}

/// Reads an artifact and checks it against its sidecar, and the sidecar's
/// inputs against the files still on disk.
pub fn read_verified(path: &Path) -> Result<(String, RunManifest)> {
    let contents = fs::read_to_string(path)
        .map_err(|e| crate::error::invalid(format!("{}: {e}", path.display())))?;
    let side = sidecar_path(path);
    let manifest: RunManifest = serde_json::from_str(
        &fs::read_to_string(&side)
            .map_err(|_| Error::ManifestMismatch(format!("{}: no sidecar", path.display())))?,
    )?;
    let expected = manifest.hash();
    match embedded_hash(&contents) {
        Some(h) if h == expected => {}
        Some(h) => {
            return Err(Error::ManifestMismatch(format!(
                "{}: carries {h}, sidecar hashes to {expected}",
                path.display()
            )))
        }
        None => {
            return Err(Error::ManifestMismatch(format!(
                "{}: no manifest hash",
                path.display()
            )))
        }
    }
    for (input, hash) in &manifest.inputs {
        if let Ok(bytes) = fs::read(input) {
            if &sha256_hex(&bytes) != hash {
                return Err(Error::ManifestMismatch(format!(
                    "{}: input {input} changed",
                    path.display()
                )));
            }
        }
    }
    Ok((contents, manifest))
}
