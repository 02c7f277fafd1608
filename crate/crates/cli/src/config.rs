use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use reposim_core::Error;

const KEYS: &[&str] = &[
    "embedding_model",
    "cluster_model",
    "distributions",
    "index",
    "labels",
    "mode",
    "epsilon",
    "top_n",
    "explain_m",
    "representatives",
    "max_file_size",
    "ignore",
    "seed",
    "k",
    "max_iter",
];

/// Flat `key = value` settings file. Blank lines and lines starting with `#` are skipped.
#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
    source: PathBuf,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, source: &Path) -> Result<Self, Error> {
        let context = source.display().to_string();
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| Error::Format { context: context.clone(), line: i + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected `key = value`".into()))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(bad(format!("unknown key {key:?}")));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Config { values, source: source.to_path_buf() })
    }

    /// Flag value if given, else the config value parsed as `T`.
    pub fn or<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, Error> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| Error::InvalidArgument(format!("{}: bad value {raw:?} for {key}", self.source.display()))),
        }
    }

    /// Paths in the config are relative to the config file.
    pub fn path_or(&self, flag: Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.or_else(|| {
            self.values.get(key).map(|v| {
                let p = PathBuf::from(v);
                match self.source.parent() {
                    Some(dir) if p.is_relative() => dir.join(p),
                    _ => p,
                }
            })
        })
    }

    pub fn list(&self, key: &str) -> Vec<String> {
        self.values
            .get(key)
            .map(|v| v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
            .unwrap_or_default()
    }
}
