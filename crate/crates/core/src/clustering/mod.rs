//! Clusters of sub-token embeddings and the sub-token to cluster table built from them.

pub mod gap;
pub mod kmeans;

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
pub use gap::{gap_statistic, select_k, GapValue};
use kmeans::{nearest, normalized};
pub use kmeans::{FitReport, KMeansFit, DEFAULT_MAX_ITER};

pub const DEFAULT_K: usize = 256;
pub const DEFAULT_REPRESENTATIVES: usize = 10;
pub const UNLABELED: &str = "unlabeled";

const NORM_TOLERANCE: f64 = 1e-9;

/// Cluster membership of one sub-token.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Member {
    pub cluster: usize,
    /// Occurrences across the corpus the model was fitted on.
    pub frequency: u64,
    /// Cosine similarity to the cluster centroid.
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    centroids: Vec<Vec<f64>>,
    members: BTreeMap<String, Member>,
    labels: BTreeMap<usize, String>,
}

impl ClusterModel {
    /// Validates centroids (equal length, unit norm) and member cluster ids.
    pub fn new(centroids: Vec<Vec<f64>>, members: BTreeMap<String, Member>) -> Result<Self> {
        let dim = centroids
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidArgument("a cluster model needs at least one centroid".into()))?;
        for (c, centroid) in centroids.iter().enumerate() {
            if centroid.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: centroid.len(), line: None });
            }
            let n = kmeans::norm(centroid);
            if (n - 1.0).abs() > NORM_TOLERANCE {
                return Err(Error::InvalidArgument(format!("centroid {c} has norm {n}")));
            }
        }
        let k = centroids.len();
        if let Some((token, m)) = members.iter().find(|(_, m)| m.cluster >= k) {
            return Err(Error::InvalidArgument(format!(
                "sub-token {token:?} assigned to cluster {} but K = {k}",
                m.cluster
            )));
        }
        Ok(ClusterModel { centroids, members, labels: BTreeMap::new() })
    }

    /// Assigns every embedded sub-token to its nearest centroid.
    pub fn from_embeddings(
        centroids: Vec<Vec<f64>>,
        embeddings: &[(String, Vec<f64>)],
        frequencies: &BTreeMap<String, u64>,
    ) -> Result<Self> {
        let mut members = BTreeMap::new();
        for (token, v) in embeddings {
            let unit = normalized(v).ok_or_else(|| Error::ZeroVector(token.clone()))?;
            let (cluster, similarity) = nearest(&unit, &centroids);
            let frequency = frequencies.get(token).copied().unwrap_or(0);
            members.insert(token.clone(), Member { cluster, frequency, similarity });
        }
        ClusterModel::new(centroids, members)
    }

    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    pub fn dim(&self) -> usize {
        self.centroids[0].len()
    }

    pub fn centroids(&self) -> &[Vec<f64>] {
        &self.centroids
    }

    pub fn members(&self) -> &BTreeMap<String, Member> {
        &self.members
    }

    pub fn cluster_of(&self, subtoken: &str) -> Option<usize> {
        self.members.get(subtoken).map(|m| m.cluster)
    }

    /// Sub-token to cluster id table.
    pub fn assignment(&self) -> BTreeMap<&str, usize> {
        self.members.iter().map(|(t, m)| (t.as_str(), m.cluster)).collect()
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    pub fn label(&self, cluster: usize) -> Option<&str> {
        self.labels.get(&cluster).map(String::as_str)
    }

    pub fn set_label(&mut self, cluster: usize, label: impl Into<String>) -> Result<()> {
        if cluster >= self.k() {
            return Err(Error::InvalidArgument(format!("label for cluster {cluster} but K = {}", self.k())));
        }
        let label = label.into();
        if label.contains('\n') {
            return Err(Error::InvalidArgument("labels must be a single line".into()));
        }
        self.labels.insert(cluster, label);
        Ok(())
    }

    /// Replaces corpus frequencies; sub-tokens missing from `frequencies` get 0.
    pub fn set_frequencies(&mut self, frequencies: &BTreeMap<String, u64>) {
        for (token, m) in self.members.iter_mut() {
            m.frequency = frequencies.get(token).copied().unwrap_or(0);
        }
    }

    pub fn representatives(&self, cluster: usize, m: usize) -> Vec<String> {
        representatives(cluster, &self.members, m)
    }

    /// First 16 hex digits of SHA-256 over the header, centroids and assignment table.
    /// Labels, frequencies and similarities are not part of the fingerprint.
    pub fn checksum(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.header_and_centroids());
        for (token, m) in &self.members {
            hasher.update(format!("{token} {}\n", m.cluster));
        }
        let digest = hasher.finalize();
        digest[..8].iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    fn header_and_centroids(&self) -> String {
        let mut s = format!("{} {}\n", self.k(), self.dim());
        for centroid in &self.centroids {
            s.push_str(&join_floats(centroid));
            s.push('\n');
        }
        s
    }

    /// Text format: `K dim`, K centroid lines, then `subtoken cluster frequency similarity`
    /// lines and finally `@cluster label` lines.
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(self.header_and_centroids().as_bytes())?;
        for (token, m) in &self.members {
            writeln!(out, "{token} {} {} {}", m.cluster, m.frequency, m.similarity)?;
        }
        for (c, label) in &self.labels {
            writeln!(out, "@{c} {label}")?;
        }
        Ok(())
    }
}

pub(crate) fn join_floats(values: &[f64]) -> String {
    let mut s = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{v}");
    }
    s
}

/// Up to `ceil(m/2)` most frequent members followed by up to `ceil(m/2)` members closest to
/// the centroid, without repeats.
pub fn representatives(cluster: usize, members: &BTreeMap<String, Member>, m: usize) -> Vec<String> {
    let half = m.div_ceil(2);
    let mut in_cluster: Vec<(&String, &Member)> = members.iter().filter(|(_, mem)| mem.cluster == cluster).collect();
    in_cluster.sort_by(|a, b| b.1.frequency.cmp(&a.1.frequency).then(a.0.cmp(b.0)));
    let mut out: Vec<String> = in_cluster.iter().take(half).map(|(t, _)| (*t).clone()).collect();
    let mut seen: HashSet<String> = out.iter().cloned().collect();
    in_cluster.sort_by(|a, b| b.1.similarity.total_cmp(&a.1.similarity).then(a.0.cmp(b.0)));
    for (token, _) in in_cluster.into_iter().take(half) {
        if seen.insert(token.clone()) {
            out.push(token.clone());
        }
    }
    out
}

/// Nearest centroid for each embedding; ties go to the lowest cluster id.
pub fn assign_tokens(embeddings: &[(String, Vec<f64>)], centroids: &[Vec<f64>]) -> Result<BTreeMap<String, usize>> {
    embeddings
        .iter()
        .map(|(token, v)| {
            let unit = normalized(v).ok_or_else(|| Error::ZeroVector(token.clone()))?;
            Ok((token.clone(), nearest(&unit, centroids).0))
        })
        .collect()
}

/// Fits `k` clusters over keyed vectors. Frequencies start at zero; see
/// [`ClusterModel::set_frequencies`].
pub fn spherical_kmeans(
    points: &[(String, Vec<f64>)],
    k: usize,
    max_iter: usize,
    seed: u64,
) -> Result<(ClusterModel, FitReport)> {
    let mut seen = HashSet::new();
    if let Some((key, _)) = points.iter().find(|(key, _)| !seen.insert(key)) {
        return Err(Error::InvalidArgument(format!("duplicate key {key:?}")));
    }
    let vectors: Vec<Vec<f64>> = points.iter().map(|(_, v)| v.clone()).collect();
    let fit = kmeans::fit(&vectors, k, max_iter, seed).map_err(|e| match e {
        Error::ZeroVector(what) => {
            let i: usize = what.trim_start_matches("point ").parse().unwrap_or(0);
            Error::ZeroVector(points[i].0.clone())
        }
        other => other,
    })?;
    let members = points
        .iter()
        .zip(fit.labels.iter().zip(&fit.similarities))
        .map(|((key, _), (&cluster, &similarity))| (key.clone(), Member { cluster, frequency: 0, similarity }))
        .collect();
    Ok((ClusterModel::new(fit.centroids, members)?, fit.report))
}

fn parse_floats(text: &str, context: &str, line: usize) -> Result<Vec<f64>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::format(context, line, format!("bad number {t:?}")))
        })
        .collect()
}

fn parse_label(rest: &str, context: &str, line: usize) -> Result<(usize, String)> {
    let (id, text) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
    let id = id.parse::<usize>().map_err(|_| Error::format(context, line, format!("bad cluster id {id:?}")))?;
    Ok((id, text.trim().to_string()))
}

pub fn parse_cluster_model<R: BufRead>(input: R, context: &str) -> Result<ClusterModel> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((n, Ok(l))) => Ok((n, l)),
            Some((n, Err(e))) => Err(Error::format(context, n, e.to_string())),
            None => Err(Error::format(context, 0, format!("unexpected end of file, expected {what}"))),
        }
    };
    let (n, header) = next("header")?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (k, dim) = match fields.as_slice() {
        [k, dim] => match (k.parse::<usize>(), dim.parse::<usize>()) {
            (Ok(k), Ok(dim)) if k > 0 && dim > 0 => (k, dim),
            _ => return Err(Error::format(context, n, "header must be `K dim`")),
        },
        _ => return Err(Error::format(context, n, "header must be `K dim`")),
    };
    let mut centroids = Vec::with_capacity(k);
    for _ in 0..k {
        let (n, l) = next("centroid")?;
        let v = parse_floats(&l, context, n)?;
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.len(), line: Some(n) });
        }
        let norm = kmeans::norm(&v);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::format(context, n, format!("centroid norm {norm} is not 1")));
        }
        centroids.push(v);
    }

    let mut members = BTreeMap::new();
    let mut labels = Vec::new();
    for (n, l) in lines {
        let l = l.map_err(|e| Error::format(context, n, e.to_string()))?;
        if l.trim().is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix('@') {
            labels.push((n, parse_label(rest, context, n)?));
            continue;
        }
        let fields: Vec<&str> = l.split_whitespace().collect();
        if !(2..=4).contains(&fields.len()) {
            return Err(Error::format(context, n, "expected `subtoken cluster [frequency [similarity]]`"));
        }
        let cluster = fields[1]
            .parse::<usize>()
            .ok()
            .filter(|&c| c < k)
            .ok_or_else(|| Error::format(context, n, format!("cluster id {:?} not in [0, {k})", fields[1])))?;
        let frequency = match fields.get(2) {
            Some(f) => f.parse::<u64>().map_err(|_| Error::format(context, n, format!("bad frequency {f:?}")))?,
            None => 0,
        };
        let similarity = match fields.get(3) {
            Some(s) => parse_floats(s, context, n)?[0],
            None => f64::NAN,
        };
        let token = fields[0].to_string();
        if members.contains_key(&token) {
            return Err(Error::format(context, n, format!("sub-token {token:?} assigned twice")));
        }
        members.insert(token, Member { cluster, frequency, similarity });
    }
    let mut model = ClusterModel::new(centroids, members)?;
    for (n, (id, text)) in labels {
        model.set_label(id, text).map_err(|e| Error::format(context, n, e.to_string()))?;
    }
    Ok(model)
}

pub fn load_cluster_model(path: &Path) -> Result<ClusterModel> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_cluster_model(BufReader::new(file), &path.display().to_string())
}

/// Label file: one `cluster_id label text` per line (a leading `@` is accepted); `#` starts
/// a comment line.
pub fn parse_labels<R: BufRead>(input: R, context: &str) -> Result<BTreeMap<usize, String>> {
    let mut labels = BTreeMap::new();
    for (i, l) in input.lines().enumerate() {
        let n = i + 1;
        let l = l.map_err(|e| Error::format(context, n, e.to_string()))?;
        let t = l.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (id, text) = parse_label(t.strip_prefix('@').unwrap_or(t), context, n)?;
        labels.insert(id, text);
    }
    Ok(labels)
}

pub fn load_labels(path: &Path) -> Result<BTreeMap<usize, String>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_labels(BufReader::new(file), &path.display().to_string())
}
