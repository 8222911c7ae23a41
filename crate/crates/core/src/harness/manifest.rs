//! Result manifests: a line-oriented record of what a run used and wrote.
//!
//! ```text
//! format = specenc-manifest
//! version = 1
//! library = 0.1.0
//! experiment = enclosure
//! name = demo
//! status = pass
//! [config]
//! experiment.kind = enclosure
//! ...
//! [timings]
//! spectra = 0.412
//! [files]
//! enclosure.csv = <sha256> <bytes>
//! [summary]
//! c_emp = 0.31
//! ```

use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

use super::config::ExperimentConfig;

pub const MANIFEST_FORMAT: &str = "specenc-manifest";
pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileEntry {
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

impl FileEntry {
    pub fn of(name: &str, contents: &[u8]) -> Self {
        Self {
            name: name.to_string(),
            sha256: sha256_hex(contents),
            bytes: contents.len() as u64,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub version: u32,
    pub library: String,
    pub experiment: String,
    pub name: String,
    pub status: String,
    /// Config echo as `section.key = value` pairs.
    pub config: Vec<(String, String)>,
    /// Wall-clock seconds per operation.
    pub timings: Vec<(String, f64)>,
    pub files: Vec<FileEntry>,
    pub summary: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(cfg: &ExperimentConfig) -> Self {
        let mut config = Vec::new();
        let mut section = String::new();
        for line in cfg.echo().lines() {
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.to_string();
            } else if let Some((k, v)) = line.split_once(" = ") {
                config.push((format!("{section}.{k}"), v.to_string()));
            } else if let Some(k) = line.strip_suffix(" =") {
                config.push((format!("{section}.{k}"), String::new()));
            }
        }
        Self {
            version: MANIFEST_VERSION,
            library: env!("CARGO_PKG_VERSION").to_string(),
            experiment: cfg.kind.as_str().to_string(),
            name: cfg.name.clone(),
            status: "pending".into(),
            config,
            timings: Vec::new(),
            files: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn summary_value(&self, key: &str) -> Option<&str> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn file(&self, name: &str) -> Option<&FileEntry> {
        self.files.iter().find(|f| f.name == name)
    }

    /// Rebuilds the config from the echo.
    pub fn config(&self) -> Result<ExperimentConfig> {
        let mut text = String::new();
        let mut section = "";
        for (key, value) in &self.config {
            let (s, k) = key.split_once('.').unwrap_or(("", key));
            if s != section {
                text.push_str(&format!("[{s}]\n"));
                section = s;
            }
            text.push_str(&format!("{k} = {value}\n"));
        }
        ExperimentConfig::parse(&text)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("format = {MANIFEST_FORMAT}\n"));
        s.push_str(&format!("version = {}\n", self.version));
        s.push_str(&format!("library = {}\n", self.library));
        s.push_str(&format!("experiment = {}\n", self.experiment));
        s.push_str(&format!("name = {}\n", self.name));
        s.push_str(&format!("status = {}\n", self.status));
        s.push_str("[config]\n");
        for (k, v) in &self.config {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s.push_str("[timings]\n");
        for (k, v) in &self.timings {
            s.push_str(&format!("{k} = {v:.6}\n"));
        }
        s.push_str("[files]\n");
        for f in &self.files {
            s.push_str(&format!("{} = {} {}\n", f.name, f.sha256, f.bytes));
        }
        s.push_str("[summary]\n");
        for (k, v) in &self.summary {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let err = |line: usize, key: &str, message: &str| Error::Config {
            line,
            key: key.to_string(),
            message: message.to_string(),
        };
        let mut m = Manifest {
            version: 0,
            library: String::new(),
            experiment: String::new(),
            name: String::new(),
            status: String::new(),
            config: Vec::new(),
            timings: Vec::new(),
            files: Vec::new(),
            summary: Vec::new(),
        };
        let mut section = "";
        let mut format_seen = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            if let Some(name) = raw.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = match name {
                    "config" | "timings" | "files" | "summary" => name,
                    _ => return Err(err(line, name, "unknown manifest section")),
                };
                continue;
            }
            let (key, value) = raw
                .split_once(" = ")
                .or_else(|| raw.strip_suffix(" =").map(|k| (k, "")))
                .ok_or_else(|| err(line, raw, "expected `key = value`"))?;
            match section {
                "" => match key {
                    "format" if value == MANIFEST_FORMAT => format_seen = true,
                    "format" => return Err(err(line, key, "not a result manifest")),
                    "version" => m.version = value.parse().map_err(|_| err(line, key, "bad version"))?,
                    "library" => m.library = value.to_string(),
                    "experiment" => m.experiment = value.to_string(),
                    "name" => m.name = value.to_string(),
                    "status" => m.status = value.to_string(),
                    _ => return Err(err(line, key, "unknown header key")),
                },
                "config" => m.config.push((key.to_string(), value.to_string())),
                "timings" => m
                    .timings
                    .push((key.to_string(), value.parse().map_err(|_| err(line, key, "bad timing"))?)),
                "files" => {
                    let (digest, bytes) = value.split_once(' ').ok_or_else(|| err(line, key, "expected `<sha256> <bytes>`"))?;
                    m.files.push(FileEntry {
                        name: key.to_string(),
                        sha256: digest.to_string(),
                        bytes: bytes.parse().map_err(|_| err(line, key, "bad byte count"))?,
                    });
                }
                _ => m.summary.push((key.to_string(), value.to_string())),
            }
        }
        if !format_seen {
            return Err(err(1, "format", "missing format line"));
        }
        if m.version != MANIFEST_VERSION {
            return Err(err(2, "version", "unsupported manifest version"));
        }
        Ok(m)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Files in `dir` whose digest or size differs from the inventory.
    pub fn verify(&self, dir: &Path) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for f in &self.files {
            match std::fs::read(dir.join(&f.name)) {
                Ok(bytes) if FileEntry::of(&f.name, &bytes) == *f => {}
                _ => bad.push(f.name.clone()),
            }
        }
        Ok(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_parse_round_trip() {
        let mut cfg = ExperimentConfig::default();
        cfg.name = "trip".into();
        cfg.enclosure.norms = vec![0.5, 2.0];
        let mut m = Manifest::new(&cfg);
        m.status = "pass".into();
        m.timings.push(("spectra".into(), 0.25));
        m.files.push(FileEntry::of("a.csv", b"x,y\n1,2\n"));
        m.summary.push(("c_emp".into(), "0.125".into()));
        let back = Manifest::parse(&m.render()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.config().unwrap(), cfg);
        assert_eq!(back.summary_value("c_emp"), Some("0.125"));
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn rejects_foreign_text() {
        assert!(Manifest::parse("format = other\nversion = 1\n").is_err());
        assert!(Manifest::parse("version = 1\n").is_err());
    }
}
