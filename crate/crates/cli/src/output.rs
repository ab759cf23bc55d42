//! Output directory, schema-tagged JSON artifacts and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use tverberg_core::hashing::sha256_hex;
use tverberg_core::SCHEMA;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: String,
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Command line without the output directory; replaying it reproduces
    /// every artifact.
    pub argv: Vec<String>,
    pub parameters: Value,
    pub seed: u64,
    pub status: Status,
    pub inputs: Vec<FileDigest>,
    pub artifacts: Vec<FileDigest>,
    pub transcript_hashes: Vec<String>,
}

pub struct OutDir {
    root: PathBuf,
    artifacts: Vec<FileDigest>,
}

/// `value` as a JSON object carrying `schema` and `kind`; non-objects are
/// wrapped under `data`.
pub fn tagged<T: Serialize>(kind: &str, value: &T) -> Result<Value> {
    let mut obj = match serde_json::to_value(value)? {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("data".into(), other);
            m
        }
    };
    obj.insert("schema".into(), Value::String(SCHEMA.into()));
    obj.insert("kind".into(), Value::String(kind.into()));
    Ok(Value::Object(obj))
}

pub fn kind_of(path: &Path) -> Result<(String, Value)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    match value.get("schema").and_then(Value::as_str) {
        Some(SCHEMA) => {}
        Some(other) => bail!("{}: unsupported schema {other:?}, expected {SCHEMA:?}", path.display()),
        None => bail!("{}: missing \"schema\" field", path.display()),
    }
    let kind = value.get("kind").and_then(Value::as_str).unwrap_or_default().to_string();
    Ok((kind, value))
}

/// Reads an artifact written by [`OutDir::json`], checking its tags.
pub fn load<T: DeserializeOwned>(path: &Path, kind: &str) -> Result<T> {
    let (found, value) = kind_of(path)?;
    if found != kind {
        bail!("{}: expected a {kind} artifact, found {found:?}", path.display());
    }
    untag(value).with_context(|| format!("decoding {}", path.display()))
}

pub fn untag<T: DeserializeOwned>(value: Value) -> Result<T> {
    let Value::Object(mut obj) = value else { bail!("artifact is not a JSON object") };
    obj.remove("schema");
    obj.remove("kind");
    let inner = match obj.remove("data") {
        Some(d) if obj.is_empty() => d,
        Some(d) => {
            obj.insert("data".into(), d);
            Value::Object(obj)
        }
        None => Value::Object(obj),
    };
    Ok(serde_json::from_value(inner)?)
}

pub fn digest_file(path: &Path) -> Result<FileDigest> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(FileDigest { path: path.display().to_string(), sha256: sha256_hex(&bytes) })
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
        Ok(OutDir { root: root.to_path_buf(), artifacts: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, kind: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(&tagged(kind, value)?)?;
        text.push('\n');
        self.text(name, &text)
    }

    pub fn text(&mut self, name: &str, content: &str) -> Result<PathBuf> {
        let path = self.path(name);
        fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
        self.artifacts.push(FileDigest { path: name.to_string(), sha256: sha256_hex(content.as_bytes()) });
        Ok(path)
    }

    pub fn finish(self, mut manifest: Manifest) -> Result<PathBuf> {
        manifest.artifacts = self.artifacts;
        let path = self.root.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}
