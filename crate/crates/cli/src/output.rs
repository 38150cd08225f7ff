use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Collects every emitted file so the summary can list it with a digest.
pub struct Outputs {
    dir: PathBuf,
    files: Vec<FileRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Outputs {
    pub fn new(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Outputs {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> io::Result<()> {
        fs::write(self.dir.join(name), bytes)?;
        self.files.push(FileRecord {
            path: name.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len(),
        });
        Ok(())
    }

    /// Writes `summary.json`. `generated_at` is the only field that varies
    /// between identical runs.
    pub fn finish(self, command: &str, status: &str, config: Value, results: Value) -> io::Result<()> {
        let summary = json!({
            "command": command,
            "status": status,
            "config": config,
            "results": results,
            "files": self.files,
            "generated_at": SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        });
        let mut text = serde_json::to_vec_pretty(&summary).map_err(io::Error::other)?;
        text.push(b'\n');
        fs::write(self.dir.join("summary.json"), text)
    }
}
