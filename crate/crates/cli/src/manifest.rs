//! Run manifests: one JSON object per run, appended as a line to
//! `manifest.jsonl` in the output directory. Existing lines are never
//! rewritten.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    /// `converged`, `failed`, or `n/a` for commands without a solve.
    pub status: String,
    pub iterations: usize,
    pub residual: f64,
    /// `9-point`, `monotone`, or empty.
    pub branch: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    /// Echo of the effective configuration, `key = value` lines.
    pub config: String,
    pub inputs: Vec<InputDigest>,
    pub version: String,
    pub threads: usize,
    pub wall_time_s: f64,
    pub convergence: Vec<Convergence>,
    pub checks: Vec<Check>,
    pub outputs: Vec<String>,
    pub exit_code: i32,
}

impl RunManifest {
    pub fn new(command: &str, args: Vec<String>) -> Self {
        RunManifest {
            command: command.to_string(),
            args,
            config: String::new(),
            inputs: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            threads: 1,
            wall_time_s: 0.0,
            convergence: Vec::new(),
            checks: Vec::new(),
            outputs: Vec::new(),
            exit_code: 0,
        }
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(Check { name: name.to_string(), pass, detail });
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Append this manifest as one line of `dir/manifest.jsonl`.
    pub fn append_to(&self, dir: &Path) -> std::io::Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(MANIFEST_FILE);
        let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
        let line = serde_json::to_string(self).map_err(std::io::Error::other)?;
        writeln!(f, "{line}")?;
        Ok(path)
    }
}

pub fn sha256_file(path: &Path) -> std::io::Result<InputDigest> {
    let bytes = std::fs::read(path)?;
    Ok(InputDigest { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) })
}

/// All manifests in `dir/manifest.jsonl`, oldest first.
pub fn read_manifests(dir: &Path) -> std::io::Result<Vec<RunManifest>> {
    let f = std::fs::File::open(dir.join(MANIFEST_FILE))?;
    let mut out = Vec::new();
    for (no, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let m = serde_json::from_str(&line).map_err(|e| {
            std::io::Error::new(std::io::ErrorKind::InvalidData, format!("line {}: {e}", no + 1))
        })?;
        out.push(m);
    }
    Ok(out)
}
