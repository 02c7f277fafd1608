//! Source tree → sub-token counts.

mod keywords;
mod language;
mod lexer;
mod stemmer;
mod subtoken;

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::error::{Error, Result};

pub use language::{detect_language, Language};
pub use lexer::is_keyword;
pub use stemmer::porter2;
pub use subtoken::{merge_short, split_subtokens, stem, subtokenize, MIN_SUBTOKEN_LEN, STEM_MIN_LEN};

/// Directory names skipped by default: vendored dependencies and virtualenvs.
pub const DEFAULT_IGNORE: &[&str] =
    &["node_modules", "vendor", "third_party", "bower_components", "Pods", "venv", "site-packages"];

pub const DEFAULT_MAX_FILE_SIZE: u64 = 1 << 20;

#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: PathBuf,
    pub language: Language,
    pub contents: String,
}

impl SourceFile {
    pub fn new(path: impl Into<PathBuf>, contents: impl Into<String>) -> Self {
        let path = path.into();
        SourceFile { language: detect_language(&path), path, contents: contents.into() }
    }
}

/// Identifier tokens of `file` in source order, without keywords, literals or comments.
pub fn extract_identifiers(file: &SourceFile) -> Result<Vec<String>> {
    lexer::identifiers(file.language, &file.contents)
        .ok_or_else(|| Error::UnsupportedLanguage { path: file.path.clone() })
}

/// Sub-token occurrence counts for one project.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStats {
    pub project_id: String,
    pub total: u64,
    pub counts: BTreeMap<String, u64>,
}

impl TokenStats {
    pub fn new(project_id: impl Into<String>) -> Self {
        TokenStats { project_id: project_id.into(), total: 0, counts: BTreeMap::new() }
    }

    pub fn from_counts(project_id: impl Into<String>, counts: BTreeMap<String, u64>) -> Self {
        let counts: BTreeMap<String, u64> = counts.into_iter().filter(|(_, c)| *c > 0).collect();
        TokenStats { project_id: project_id.into(), total: counts.values().sum(), counts }
    }

    pub fn add(&mut self, subtoken: &str, count: u64) {
        if count == 0 {
            return;
        }
        *self.counts.entry(subtoken.to_string()).or_insert(0) += count;
        self.total += count;
    }

    pub fn merge(&mut self, other: &TokenStats) {
        for (token, &count) in &other.counts {
            self.add(token, count);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.counts.values().any(|&c| c == 0) {
            return Err("zero count".into());
        }
        if self.counts.values().sum::<u64>() != self.total {
            return Err("total does not match counts".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TokenizeOptions {
    pub max_file_size: u64,
    pub ignore: Vec<String>,
}

impl Default for TokenizeOptions {
    fn default() -> Self {
        TokenizeOptions {
            max_file_size: DEFAULT_MAX_FILE_SIZE,
            ignore: DEFAULT_IGNORE.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Sub-token counts of a single source file.
pub fn tokenize_file(file: &SourceFile) -> Result<BTreeMap<String, u64>> {
    let mut counts = BTreeMap::new();
    for ident in extract_identifiers(file)? {
        for sub in subtokenize(&ident) {
            *counts.entry(sub).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

fn collect_files(root: &Path, options: &TokenizeOptions) -> Result<Vec<(PathBuf, Language)>> {
    let meta = fs::metadata(root).map_err(|e| Error::io(root, e))?;
    if !meta.is_dir() {
        return Err(Error::io(root, std::io::Error::new(std::io::ErrorKind::NotADirectory, "not a directory")));
    }
    let walker = WalkDir::new(root).follow_links(false).sort_by_file_name().into_iter().filter_entry(|entry| {
        if entry.depth() == 0 || !entry.file_type().is_dir() {
            return true;
        }
        let name = entry.file_name().to_string_lossy();
        !name.starts_with('.') && !options.ignore.iter().any(|i| *i == name)
    });
    let mut files = Vec::new();
    for entry in walker {
        let entry = match entry {
            Ok(entry) => entry,
            Err(err) => {
                warn!("skipping unreadable entry: {err}");
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let language = detect_language(entry.path());
        if !language.is_supported() {
            debug!("skipping {}: unsupported language", entry.path().display());
            continue;
        }
        files.push((entry.into_path(), language));
    }
    Ok(files)
}

fn read_source(path: &Path, language: Language, max_size: u64) -> Option<SourceFile> {
    let size = fs::metadata(path).ok()?.len();
    if size > max_size {
        debug!("skipping {}: {size} bytes exceeds cap", path.display());
        return None;
    }
    let bytes = match fs::read(path) {
        Ok(bytes) => bytes,
        Err(err) => {
            warn!("skipping {}: {err}", path.display());
            return None;
        }
    };
    match String::from_utf8(bytes) {
        Ok(contents) => Some(SourceFile { path: path.to_path_buf(), language, contents }),
        Err(_) => {
            debug!("skipping {}: not valid UTF-8", path.display());
            None
        }
    }
}

/// Walks `root` and accumulates sub-token counts over every supported source file.
///
/// Hidden and ignored directories are pruned, symlinks are not followed, oversized and
/// non-UTF-8 files are skipped. Files are processed in parallel; the result does not depend
/// on visit order.
pub fn tokenize_project(root: &Path, project_id: &str, options: &TokenizeOptions) -> Result<TokenStats> {
    let files = collect_files(root, options)?;
    let per_file: Vec<BTreeMap<String, u64>> = files
        .par_iter()
        .filter_map(|(path, language)| read_source(path, *language, options.max_file_size))
        .map(|file| tokenize_file(&file))
        .collect::<Result<_>>()?;

    let mut stats = TokenStats::new(project_id);
    for counts in &per_file {
        for (token, &count) in counts {
            stats.add(token, count);
        }
    }
    if stats.is_empty() {
        return Err(Error::EmptyProject(project_id.to_string()));
    }
    Ok(stats)
}

/// Project id for a directory: its final path component, with whitespace replaced so ids
/// stay single tokens in the text formats.
pub fn project_id_for(root: &Path) -> String {
    let name = root
        .canonicalize()
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .or_else(|| root.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "project".to_string());
    name.chars().map(|c| if c.is_whitespace() { '_' } else { c }).collect()
}

/// Writes one JSON record per project; keys come out sorted.
pub fn write_token_stats<W: Write>(mut out: W, stats: &[TokenStats]) -> std::io::Result<()> {
    for s in stats {
        serde_json::to_writer(&mut out, s)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_token_stats<R: BufRead>(input: R, context: &str) -> Result<Vec<TokenStats>> {
    let mut all = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::io(context, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let stats: TokenStats =
            serde_json::from_str(&line).map_err(|e| Error::format(context, i + 1, e.to_string()))?;
        stats.validate().map_err(|msg| Error::format(context, i + 1, msg))?;
        all.push(stats);
    }
    Ok(all)
}

pub fn load_token_stats(path: &Path) -> Result<Vec<TokenStats>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_token_stats(std::io::BufReader::new(file), &path.display().to_string())
}
