//! Top-n retrieval of reference projects by inner product.
//!
//! KL mode keeps `log` of the smoothed reference distributions, so that
//! `<q', log r'> = sum q' log q' - D_KL(q' || r')` and the highest score is the smallest
//! divergence. Cosine mode keeps L2-normalized distributions.

use std::cmp::Ordering;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::clustering::kmeans::{self, dot, normalized};
use crate::clustering::{join_floats, ClusterModel};
use crate::distribution::{check_epsilon, smooth_probs, ProjectDistribution};
use crate::error::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityMode {
    Kl,
    Cosine,
}

impl SimilarityMode {
    pub fn name(self) -> &'static str {
        match self {
            SimilarityMode::Kl => "kl",
            SimilarityMode::Cosine => "cosine",
        }
    }
}

impl fmt::Display for SimilarityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SimilarityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kl" => Ok(SimilarityMode::Kl),
            "cosine" | "cos" => Ok(SimilarityMode::Cosine),
            _ => Err(Error::InvalidArgument(format!("unknown similarity mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub project_id: String,
    pub score: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchIndex {
    mode: SimilarityMode,
    k: usize,
    epsilon: f64,
    model_checksum: String,
    ids: Vec<String>,
    /// Row-major, `ids.len() * k`.
    rows: Vec<f64>,
}

/// `sum p log(p / r)` with `0 log 0 = 0`, natural log.
pub fn kl_divergence(p: &[f64], r: &[f64]) -> Result<f64> {
    if p.len() != r.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: r.len(), line: None });
    }
    if let Some(x) = r.iter().find(|&&x| x.is_nan() || x <= 0.0) {
        return Err(Error::Domain(format!("reference probability {x} is not positive")));
    }
    Ok(p.iter().zip(r).filter(|(&pc, _)| pc > 0.0).map(|(pc, rc)| pc * (pc / rc).ln()).sum())
}

/// `sum p log p` with `0 log 0 = 0`. In KL mode, `neg_entropy(q') - score` is the divergence.
pub fn neg_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|x| x * x.ln()).sum()
}

fn by_score_then_id(a: &(f64, &str), b: &(f64, &str)) -> Ordering {
    b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1))
}

fn check_row(mode: SimilarityMode, row: &[f64]) -> std::result::Result<(), String> {
    if let Some(v) = row.iter().find(|v| !v.is_finite()) {
        return Err(format!("non-finite component {v}"));
    }
    match mode {
        SimilarityMode::Kl => {
            if let Some(v) = row.iter().find(|&&v| v > 0.0) {
                return Err(format!("log-probability {v} above zero"));
            }
        }
        SimilarityMode::Cosine => {
            let n = kmeans::norm(row);
            if (n - 1.0).abs() > NORM_TOLERANCE {
                return Err(format!("row norm {n} is not 1"));
            }
        }
    }
    Ok(())
}

/// Prepares reference rows for `mode`. `epsilon` only affects KL mode but is recorded either
/// way.
pub fn build_index(
    distributions: &[ProjectDistribution],
    mode: SimilarityMode,
    epsilon: f64,
    model_checksum: &str,
) -> Result<SearchIndex> {
    check_epsilon(epsilon)?;
    let k = distributions.first().ok_or(Error::EmptyIndex)?.k();
    let mut rows = Vec::with_capacity(k * distributions.len());
    let mut ids = Vec::with_capacity(distributions.len());
    for d in distributions {
        if d.k() != k {
            return Err(Error::DimensionMismatch { expected: k, found: d.k(), line: None });
        }
        match mode {
            SimilarityMode::Kl => rows.extend(smooth_probs(&d.probs, epsilon).iter().map(|p| p.ln())),
            SimilarityMode::Cosine => {
                rows.extend(normalized(&d.probs).ok_or_else(|| Error::ZeroVector(d.project_id.clone()))?)
            }
        }
        ids.push(d.project_id.clone());
    }
    Ok(SearchIndex { mode, k, epsilon, model_checksum: model_checksum.to_string(), ids, rows })
}

impl SearchIndex {
    pub fn mode(&self) -> SimilarityMode {
        self.mode
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn model_checksum(&self) -> &str {
        &self.model_checksum
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.k..(i + 1) * self.k]
    }

    pub fn position(&self, project_id: &str) -> Option<usize> {
        self.ids.iter().position(|id| id == project_id)
    }

    pub fn check_model(&self, model: &ClusterModel) -> Result<()> {
        let found = model.checksum();
        if found != self.model_checksum {
            return Err(Error::ChecksumMismatch { expected: self.model_checksum.clone(), found });
        }
        Ok(())
    }

    /// Query side of the inner product: smoothed probabilities in KL mode, the unit vector
    /// in cosine mode.
    pub fn query_vector(&self, q: &ProjectDistribution) -> Result<Vec<f64>> {
        if q.k() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: q.k(), line: None });
        }
        match self.mode {
            SimilarityMode::Kl => Ok(smooth_probs(&q.probs, self.epsilon)),
            SimilarityMode::Cosine => normalized(&q.probs).ok_or_else(|| Error::ZeroVector(q.project_id.clone())),
        }
    }

    /// Score of one reference against a prepared query vector.
    pub fn score_row(&self, qv: &[f64], i: usize) -> f64 {
        dot(qv, self.row(i))
    }

    /// Exact top-n over all references; ties go to the smaller project id.
    pub fn query(&self, q: &ProjectDistribution, top_n: usize) -> Result<Vec<SearchResult>> {
        let qv = self.query_vector(q)?;
        let scores: Vec<f64> = self.rows.par_chunks(self.k).map(|row| dot(&qv, row)).collect();
        let candidates = scores.iter().copied().zip(self.ids.iter().map(String::as_str)).collect();
        top(candidates, top_n)
    }

    /// Reference `i` as a direction in probability space, the space the coarse cells live in.
    fn probability_direction(&self, i: usize) -> Vec<f64> {
        match self.mode {
            SimilarityMode::Kl => {
                let p: Vec<f64> = self.row(i).iter().map(|x| x.exp()).collect();
                normalized(&p).expect("smoothed probabilities are positive")
            }
            SimilarityMode::Cosine => self.row(i).to_vec(),
        }
    }

    /// Partitions the references into about `sqrt(N)` cells by spherical k-means on their
    /// probability vectors, for [`Self::query_approx`].
    pub fn coarse_quantizer(&self, seed: u64) -> Result<CoarseQuantizer> {
        let directions: Vec<Vec<f64>> = (0..self.len()).map(|i| self.probability_direction(i)).collect();
        let cells = ((self.len() as f64).sqrt().round() as usize).clamp(1, self.len().max(1));
        let fit = kmeans::fit(&directions, cells, kmeans::DEFAULT_MAX_ITER, seed)?;
        let mut members = vec![Vec::new(); cells];
        for (i, &c) in fit.labels.iter().enumerate() {
            members[c].push(i);
        }
        Ok(CoarseQuantizer { centroids: fit.centroids, members })
    }

    /// Exact scores for the references in the `probes` cells closest (by cosine) to the
    /// query's probability vector.
    pub fn query_approx(
        &self,
        quantizer: &CoarseQuantizer,
        q: &ProjectDistribution,
        top_n: usize,
        probes: usize,
    ) -> Result<Vec<SearchResult>> {
        let qv = self.query_vector(q)?;
        let direction = normalized(&qv).ok_or_else(|| Error::ZeroVector(q.project_id.clone()))?;
        let mut cells: Vec<(f64, usize)> =
            quantizer.centroids.iter().enumerate().map(|(c, centroid)| (dot(&direction, centroid), c)).collect();
        cells.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let candidates = cells
            .iter()
            .take(probes.max(1))
            .flat_map(|&(_, c)| &quantizer.members[c])
            .map(|&i| (self.score_row(&qv, i), self.ids[i].as_str()))
            .collect();
        top(candidates, top_n)
    }

    /// Header `mode K N epsilon model_checksum`, then `project_id v_1 .. v_K` per row.
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {} {} {} {}", self.mode, self.k, self.len(), self.epsilon, self.model_checksum)?;
        for (i, id) in self.ids.iter().enumerate() {
            writeln!(out, "{id} {}", join_floats(self.row(i)))?;
        }
        Ok(())
    }
}

fn top(mut candidates: Vec<(f64, &str)>, top_n: usize) -> Result<Vec<SearchResult>> {
    if top_n == 0 {
        return Err(Error::InvalidArgument("top_n must be at least 1".into()));
    }
    if candidates.len() > top_n {
        candidates.select_nth_unstable_by(top_n - 1, by_score_then_id);
        candidates.truncate(top_n);
    }
    candidates.sort_by(by_score_then_id);
    Ok(candidates
        .into_iter()
        .enumerate()
        .map(|(i, (score, id))| SearchResult { project_id: id.to_string(), score, rank: i + 1 })
        .collect())
}

/// Cell partition of an index's references.
#[derive(Debug, Clone)]
pub struct CoarseQuantizer {
    centroids: Vec<Vec<f64>>,
    members: Vec<Vec<usize>>,
}

impl CoarseQuantizer {
    pub fn cells(&self) -> usize {
        self.centroids.len()
    }
}

pub fn parse_index<R: BufRead>(input: R, context: &str) -> Result<SearchIndex> {
    let mut lines = input.lines().enumerate();
    let header = match lines.next() {
        Some((_, l)) => l.map_err(|e| Error::format(context, 1, e.to_string()))?,
        None => return Err(Error::format(context, 1, "missing header")),
    };
    let bad_header = || Error::format(context, 1, "header must be `mode K N epsilon model_checksum`");
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [mode, k, n, epsilon, checksum] = fields.as_slice() else {
        return Err(bad_header());
    };
    let mode: SimilarityMode = mode.parse().map_err(|_| bad_header())?;
    let k: usize = k.parse().ok().filter(|&k| k > 0).ok_or_else(bad_header)?;
    let n: usize = n.parse().map_err(|_| bad_header())?;
    let epsilon: f64 = epsilon.parse().map_err(|_| bad_header())?;
    check_epsilon(epsilon).map_err(|_| bad_header())?;

    let mut ids = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n * k);
    for (i, l) in lines {
        let line = i + 1;
        let l = l.map_err(|e| Error::format(context, line, e.to_string()))?;
        if l.trim().is_empty() {
            continue;
        }
        let mut fields = l.split_whitespace();
        let id = fields.next().unwrap_or_default();
        let row = fields
            .map(|t| t.parse::<f64>().map_err(|_| Error::format(context, line, format!("bad number {t:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: row.len(), line: Some(line) });
        }
        check_row(mode, &row).map_err(|m| Error::format(context, line, m))?;
        ids.push(id.to_string());
        rows.extend(row);
    }
    if ids.len() != n {
        return Err(Error::format(context, 1, format!("header promises {n} rows, found {}", ids.len())));
    }
    if n == 0 {
        return Err(Error::EmptyIndex);
    }
    Ok(SearchIndex { mode, k, epsilon, model_checksum: checksum.to_string(), ids, rows })
}

pub fn load_index(path: &Path) -> Result<SearchIndex> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_index(BufReader::new(file), &path.display().to_string())
}
