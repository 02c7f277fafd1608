//! Glue between the stages: corpus statistics, clustering inputs and atomic artifact writes.

use std::collections::BTreeMap;
use std::io::{BufWriter, Write};
use std::path::Path;

use log::{info, warn};
use rayon::prelude::*;

use crate::clustering::{self, ClusterModel, FitReport};
use crate::distribution::{build_distribution, ProjectDistribution};
use crate::embedding::EmbeddingModel;
use crate::error::{Error, Result};
use crate::tokenizer::{project_id_for, tokenize_project, TokenStats, TokenizeOptions};

/// Summed sub-token counts over all projects.
pub fn corpus_frequencies(stats: &[TokenStats]) -> BTreeMap<String, u64> {
    let mut freq = BTreeMap::new();
    for s in stats {
        for (token, &count) in &s.counts {
            *freq.entry(token.clone()).or_insert(0) += count;
        }
    }
    freq
}

/// Embeds every sub-token in `vocabulary` (composing out-of-vocabulary ones from n-grams).
/// Sub-tokens with no usable vector are returned separately.
pub fn embed_vocabulary<'a>(
    model: &EmbeddingModel,
    vocabulary: impl IntoIterator<Item = &'a String>,
) -> (Vec<(String, Vec<f64>)>, Vec<String>) {
    let tokens: Vec<&String> = vocabulary.into_iter().collect();
    let vectors: Vec<Option<Vec<f64>>> =
        tokens.par_iter().map(|t| model.embed(t).filter(|v| v.iter().any(|x| *x != 0.0))).collect();
    let mut embedded = Vec::new();
    let mut missing = Vec::new();
    for (token, v) in tokens.into_iter().zip(vectors) {
        match v {
            Some(v) => embedded.push((token.clone(), v)),
            None => missing.push(token.clone()),
        }
    }
    (embedded, missing)
}

/// Clusters the embedded corpus vocabulary and records corpus frequencies on the model.
pub fn fit_clusters(
    stats: &[TokenStats],
    embeddings: &EmbeddingModel,
    k: usize,
    max_iter: usize,
    seed: u64,
) -> Result<(ClusterModel, FitReport)> {
    let freq = corpus_frequencies(stats);
    let (points, missing) = embed_vocabulary(embeddings, freq.keys());
    if !missing.is_empty() {
        warn!("{} sub-tokens have no embedding and stay unassigned", missing.len());
    }
    info!("clustering {} sub-tokens into {k} clusters", points.len());
    let (mut model, report) = clustering::spherical_kmeans(&points, k, max_iter, seed)?;
    model.set_frequencies(&freq);
    Ok((model, report))
}

/// Distributions for every project; projects without a single known sub-token are reported
/// separately.
pub fn build_distributions(stats: &[TokenStats], model: &ClusterModel) -> (Vec<ProjectDistribution>, Vec<Error>) {
    let mut dists = Vec::with_capacity(stats.len());
    let mut failed = Vec::new();
    for s in stats {
        match build_distribution(s, model) {
            Ok(d) => dists.push(d),
            Err(e) => failed.push(e),
        }
    }
    (dists, failed)
}

/// Tokenizes each directory, naming projects after their directory. Ids must be unique.
pub fn tokenize_dirs(dirs: &[impl AsRef<Path>], options: &TokenizeOptions) -> Result<Vec<TokenStats>> {
    let mut seen = BTreeMap::new();
    for d in dirs {
        let id = project_id_for(d.as_ref());
        if let Some(prev) = seen.insert(id.clone(), d.as_ref().to_path_buf()) {
            return Err(Error::InvalidArgument(format!(
                "project id {id:?} used by both {} and {}",
                prev.display(),
                d.as_ref().display()
            )));
        }
    }
    dirs.iter().map(|d| tokenize_project(d.as_ref(), &project_id_for(d.as_ref()), options)).collect()
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    {
        let mut out = BufWriter::new(tmp.as_file());
        write(&mut out)?;
        out.flush().map_err(|e| Error::io(path, e))?;
    }
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
