//! Artifact directory and run manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::input::{sha256_hex, Source};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct ArtifactRecord {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub started_unix_ms: u128,
    pub elapsed_ms: f64,
}

/// Everything needed to replay a run: rerunning `args` against the same
/// input reproduces every artifact bit for bit.
#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub args: Vec<String>,
    pub params: serde_json::Value,
    pub input: Option<&'a Source>,
    pub seeds: serde_json::Value,
    pub threads: usize,
    pub parallel: bool,
    pub notices: &'a [String],
    pub artifacts: &'a [ArtifactRecord],
    pub timing: Timing,
}

pub struct Artifacts {
    dir: PathBuf,
    records: Vec<ArtifactRecord>,
    pub notices: Vec<String>,
    started: Instant,
    started_unix_ms: u128,
}

impl Artifacts {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            records: Vec::new(),
            notices: Vec::new(),
            started: Instant::now(),
            started_unix_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_millis()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn notice(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        eprintln!("note: {msg}");
        self.notices.push(msg);
    }

    pub fn bytes(&mut self, name: &str, data: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, data)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
        self.records.push(ArtifactRecord {
            file: name.to_string(),
            sha256: sha256_hex(data),
        });
        Ok(())
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::io(format!("cannot serialize {name}: {e}")))?;
        text.push('\n');
        self.bytes(name, text.as_bytes())
    }

    pub fn csv<R: Serialize>(
        &mut self,
        name: &str,
        rows: impl IntoIterator<Item = R>,
    ) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row)
                .map_err(|e| CliError::io(format!("cannot write {name}: {e}")))?;
        }
        let data = w
            .into_inner()
            .map_err(|e| CliError::io(format!("cannot write {name}: {e}")))?;
        self.bytes(name, &data)
    }

    pub fn finish(
        self,
        command: &str,
        params: serde_json::Value,
        input: Option<&Source>,
        seeds: serde_json::Value,
    ) -> Result<(), CliError> {
        let manifest = Manifest {
            schema_version: SCHEMA_VERSION,
            tool: "jpdprof",
            version: env!("CARGO_PKG_VERSION"),
            command,
            args: std::env::args().collect(),
            params,
            input,
            seeds,
            threads: crate::current_threads(),
            parallel: cfg!(feature = "parallel"),
            notices: &self.notices,
            artifacts: &self.records,
            timing: Timing {
                started_unix_ms: self.started_unix_ms,
                elapsed_ms: self.started.elapsed().as_secs_f64() * 1e3,
            },
        };
        let mut text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::io(format!("cannot serialize manifest: {e}")))?;
        text.push('\n');
        let path = self.dir.join(MANIFEST);
        fs::write(&path, text)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
    }
}
