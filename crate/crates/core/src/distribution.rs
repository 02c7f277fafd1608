//! Project representation: the probability of each cluster among a project's sub-tokens.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::clustering::{join_floats, ClusterModel};
use crate::error::{Error, Result};
use crate::tokenizer::TokenStats;

pub const DEFAULT_EPSILON: f64 = 1e-6;

const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectDistribution {
    pub project_id: String,
    pub probs: Vec<f64>,
    /// Sub-token occurrences that mapped to a cluster.
    pub covered: u64,
    /// Occurrences of sub-tokens unknown to the cluster model.
    pub dropped: u64,
}

impl ProjectDistribution {
    /// Checks that `probs` is a probability vector.
    pub fn new(project_id: impl Into<String>, probs: Vec<f64>, covered: u64, dropped: u64) -> Result<Self> {
        let project_id = project_id.into();
        check_probabilities(&probs).map_err(|m| Error::InvalidArgument(format!("{project_id}: {m}")))?;
        Ok(ProjectDistribution { project_id, probs, covered, dropped })
    }

    pub fn k(&self) -> usize {
        self.probs.len()
    }
}

fn check_probabilities(probs: &[f64]) -> std::result::Result<(), String> {
    if probs.is_empty() {
        return Err("empty probability vector".into());
    }
    if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(format!("invalid probability {p}"));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(format!("probabilities sum to {sum}"));
    }
    Ok(())
}

/// Cluster frequencies of the sub-token occurrences in `stats`; sub-tokens the model does
/// not know are counted in `dropped` and otherwise ignored.
pub fn build_distribution(stats: &TokenStats, model: &ClusterModel) -> Result<ProjectDistribution> {
    let mut mass = vec![0u64; model.k()];
    let mut covered = 0u64;
    let mut dropped = 0u64;
    for (token, &count) in &stats.counts {
        match model.cluster_of(token) {
            Some(c) => {
                mass[c] += count;
                covered += count;
            }
            None => dropped += count,
        }
    }
    if covered == 0 {
        return Err(Error::NoKnownTokens(stats.project_id.clone()));
    }
    let probs = mass.iter().map(|&m| m as f64 / covered as f64).collect();
    Ok(ProjectDistribution { project_id: stats.project_id.clone(), probs, covered, dropped })
}

/// `(p + epsilon) / (1 + K * epsilon)` componentwise.
pub fn smooth_probs(probs: &[f64], epsilon: f64) -> Vec<f64> {
    let denom = 1.0 + probs.len() as f64 * epsilon;
    probs.iter().map(|p| (p + epsilon) / denom).collect()
}

pub fn smooth(dist: &ProjectDistribution, epsilon: f64) -> Result<ProjectDistribution> {
    check_epsilon(epsilon)?;
    Ok(ProjectDistribution { probs: smooth_probs(&dist.probs, epsilon), ..dist.clone() })
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")))
    }
}

/// Header `K model_checksum`, then `project_id covered dropped p_1 .. p_K` per project.
pub fn write_distributions<W: Write>(mut out: W, checksum: &str, dists: &[ProjectDistribution]) -> Result<()> {
    let k = dists.first().map_or(0, ProjectDistribution::k);
    if let Some(d) = dists.iter().find(|d| d.k() != k) {
        return Err(Error::DimensionMismatch { expected: k, found: d.k(), line: None });
    }
    let io = |e| Error::io("<distributions>", e);
    writeln!(out, "{k} {checksum}").map_err(io)?;
    for d in dists {
        writeln!(out, "{} {} {} {}", d.project_id, d.covered, d.dropped, join_floats(&d.probs)).map_err(io)?;
    }
    Ok(())
}

/// Distribution file contents.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSet {
    pub k: usize,
    pub model_checksum: String,
    pub distributions: Vec<ProjectDistribution>,
}

pub fn parse_distributions<R: BufRead>(input: R, context: &str) -> Result<DistributionSet> {
    let mut lines = input.lines().enumerate();
    let header = match lines.next() {
        Some((_, l)) => l.map_err(|e| Error::format(context, 1, e.to_string()))?,
        None => return Err(Error::format(context, 1, "missing header")),
    };
    let (k, model_checksum) = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        [k, sum] => {
            (k.parse::<usize>().map_err(|_| Error::format(context, 1, "header must be `K checksum`"))?, sum.to_string())
        }
        _ => return Err(Error::format(context, 1, "header must be `K checksum`")),
    };
    let mut distributions = Vec::new();
    for (i, l) in lines {
        let n = i + 1;
        let l = l.map_err(|e| Error::format(context, n, e.to_string()))?;
        if l.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() < 3 {
            return Err(Error::format(context, n, "expected `project_id covered dropped p...`"));
        }
        let count = |s: &str| s.parse::<u64>().map_err(|_| Error::format(context, n, format!("bad count {s:?}")));
        let covered = count(fields[1])?;
        let dropped = count(fields[2])?;
        let probs = fields[3..]
            .iter()
            .map(|t| t.parse::<f64>().map_err(|_| Error::format(context, n, format!("bad number {t:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        if probs.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: probs.len(), line: Some(n) });
        }
        check_probabilities(&probs).map_err(|m| Error::format(context, n, m))?;
        distributions.push(ProjectDistribution { project_id: fields[0].to_string(), probs, covered, dropped });
    }
    Ok(DistributionSet { k, model_checksum, distributions })
}

pub fn load_distributions(path: &Path) -> Result<DistributionSet> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_distributions(BufReader::new(file), &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::clustering::Member;

    fn model(k: usize, table: &[(&str, usize)]) -> ClusterModel {
        let centroids = (0..k)
            .map(|i| {
                let mut v = vec![0.0; k];
                v[i] = 1.0;
                v
            })
            .collect();
        let members =
            table.iter().map(|(t, c)| (t.to_string(), Member { cluster: *c, frequency: 0, similarity: 1.0 })).collect();
        ClusterModel::new(centroids, members).unwrap()
    }

    fn stats(counts: &[(&str, u64)]) -> TokenStats {
        TokenStats::from_counts("p", counts.iter().map(|(t, c)| (t.to_string(), *c)).collect::<BTreeMap<_, _>>())
    }

    #[test]
    fn one_hot() {
        let m = model(4, &[("aaa", 3), ("bbb", 3)]);
        let d = build_distribution(&stats(&[("aaa", 2), ("bbb", 5)]), &m).unwrap();
        assert_eq!(d.probs, vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn unknown_tokens_are_dropped() {
        let m = model(2, &[("a", 0), ("b", 1)]);
        let d = build_distribution(&stats(&[("a", 2), ("b", 1), ("x", 1)]), &m).unwrap();
        assert_eq!(d.probs, vec![2.0 / 3.0, 1.0 / 3.0]);
        assert_eq!((d.covered, d.dropped), (3, 1));
        assert!(matches!(build_distribution(&stats(&[("x", 5)]), &m), Err(Error::NoKnownTokens(_))));
    }

    #[test]
    fn smoothing() {
        let d = ProjectDistribution::new("p", vec![1.0, 0.0], 1, 0).unwrap();
        assert_eq!(smooth(&d, 0.5).unwrap().probs, vec![0.75, 0.25]);
        let u = ProjectDistribution::new("u", vec![0.25; 4], 4, 0).unwrap();
        for p in smooth(&u, 0.3).unwrap().probs {
            assert!((p - 0.25).abs() < 1e-15);
        }
        assert!(smooth(&d, 0.0).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dists = vec![
            ProjectDistribution::new("a", vec![0.1, 0.2, 0.7], 10, 1).unwrap(),
            ProjectDistribution::new("b", vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 3, 0).unwrap(),
        ];
        let mut buf = Vec::new();
        write_distributions(&mut buf, "abcd", &dists).unwrap();
        let set = parse_distributions(buf.as_slice(), "m").unwrap();
        assert_eq!(set.k, 3);
        assert_eq!(set.model_checksum, "abcd");
        assert_eq!(set.distributions, dists);
    }

    #[test]
    fn malformed_rows() {
        let cases = ["2 x\np 1 0 1\n", "2 x\np 1 0 0.5 0.6\n", "2 x\np one 0 0.5 0.5\n", "2\n"];
        for text in cases {
            assert!(parse_distributions(text.as_bytes(), "m").is_err(), "{text:?}");
        }
    }
}
