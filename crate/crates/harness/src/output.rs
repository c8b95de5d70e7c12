//! Artifact persistence. Every file is written to a temporary sibling and
//! renamed into place; the manifest is written last and lists only files
//! already renamed.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::error::{HarnessError, Result};

pub const MANIFEST_NAME: &str = "manifest.json";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    /// Path relative to the output directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub tool_version: String,
    /// Milliseconds since the Unix epoch.
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub exit_status: i32,
    pub artifacts: Vec<ArtifactEntry>,
}

/// A table of rows for CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| v.to_string()).collect());
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            if r.len() != self.header.len() {
                return Err(HarnessError::Usage(format!(
                    "table {} row has {} fields, header has {}",
                    self.name,
                    r.len(),
                    self.header.len()
                )));
            }
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))
    }
}

pub fn unix_now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Single writer for one run directory.
#[derive(Debug)]
pub struct ArtifactWriter {
    dir: PathBuf,
    started: u64,
    artifacts: Vec<ArtifactEntry>,
}

impl ArtifactWriter {
    pub fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            started: unix_now_ms(),
            artifacts: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn artifacts(&self) -> &[ArtifactEntry] {
        &self.artifacts
    }

    fn persist(&self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        if name.is_empty() || name.contains(['/', '\\']) || name == MANIFEST_NAME {
            return Err(HarnessError::Usage(format!("invalid artifact name {name:?}")));
        }
        let target = self.dir.join(name);
        let mut tmp = NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(&target).map_err(|e| HarnessError::Io(e.error))?;
        Ok(target)
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.persist(name, bytes)?;
        self.artifacts.retain(|a| a.path != name);
        self.artifacts.push(ArtifactEntry {
            path: name.into(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        });
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write_bytes(name, &bytes)
    }

    /// One JSON object per line.
    pub fn write_json_lines<T: Serialize>(&mut self, name: &str, values: &[T]) -> Result<PathBuf> {
        let mut bytes = Vec::new();
        for v in values {
            serde_json::to_writer(&mut bytes, v)?;
            bytes.push(b'\n');
        }
        self.write_bytes(name, &bytes)
    }

    pub fn write_table(&mut self, table: &Table) -> Result<PathBuf> {
        let name = format!("{}.csv", table.name);
        self.write_bytes(&name, &table.to_csv()?)
    }

    /// Writes the manifest and closes the run.
    pub fn finish(self, config_hash: &str, exit_status: i32) -> Result<RunManifest> {
        let manifest = RunManifest {
            config_hash: config_hash.into(),
            tool_version: TOOL_VERSION.into(),
            started_unix_ms: self.started,
            finished_unix_ms: unix_now_ms(),
            exit_status,
            artifacts: self.artifacts.clone(),
        };
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        let mut tmp = NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.dir.join(MANIFEST_NAME))
            .map_err(|e| HarnessError::Io(e.error))?;
        Ok(manifest)
    }
}

/// Recomputes every checksum listed in a manifest.
pub fn verify_manifest(dir: &Path) -> Result<RunManifest> {
    let manifest: RunManifest = serde_json::from_slice(&std::fs::read(dir.join(MANIFEST_NAME))?)?;
    for a in &manifest.artifacts {
        let bytes = std::fs::read(dir.join(&a.path))?;
        if sha256_hex(&bytes) != a.sha256 || bytes.len() as u64 != a.bytes {
            return Err(HarnessError::Usage(format!("checksum mismatch for {}", a.path)));
        }
    }
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_lf_and_rejects_ragged_rows() {
        let mut t = Table::new("x", &["a", "b"]);
        t.push_numbers(&[1.0, 0.1]);
        assert_eq!(t.to_csv().unwrap(), b"a,b\n1,0.1\n");
        t.push(vec!["1".into()]);
        assert!(t.to_csv().is_err());
    }

    #[test]
    fn manifest_lists_every_artifact_with_checksums() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = ArtifactWriter::create(dir.path()).unwrap();
        w.write_bytes("a.txt", b"hello\n").unwrap();
        w.write_json("b.json", &vec![1, 2]).unwrap();
        w.write_bytes("a.txt", b"again\n").unwrap();
        assert!(w.write_bytes(MANIFEST_NAME, b"{}").is_err());
        assert!(w.write_bytes("../escape", b"").is_err());
        let m = w.finish("abc", 0).unwrap();
        assert_eq!(m.artifacts.len(), 2);
        let v = verify_manifest(dir.path()).unwrap();
        assert_eq!(v, m);
        let leftovers: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n.starts_with(".tmp"))
            .collect();
        assert!(leftovers.is_empty(), "{leftovers:?}");
        std::fs::write(dir.path().join("a.txt"), b"tampered").unwrap();
        assert!(verify_manifest(dir.path()).is_err());
    }
}
