//! Spherical k-means: Lloyd iterations on the unit sphere with cosine similarity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    /// Number of centroid updates performed.
    pub iterations: usize,
    /// Sum of point-to-centroid cosine similarities after each assignment pass.
    pub objective_trace: Vec<f64>,
    /// True when the assignment reached a fixpoint before `max_iter`.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    pub centroids: Vec<Vec<f64>>,
    /// Cluster of each input point, in input order.
    pub labels: Vec<usize>,
    /// Cosine similarity of each point to its centroid.
    pub similarities: Vec<f64>,
    pub report: FitReport,
}

impl KMeansFit {
    /// Within-cluster dispersion: sum over points of `1 - cos(point, centroid)`.
    pub fn dispersion(&self) -> f64 {
        self.similarities.iter().map(|s| 1.0 - s).sum()
    }

    pub fn objective(&self) -> f64 {
        self.report.objective_trace.last().copied().unwrap_or(0.0)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// `v / |v|`, or `None` for a zero (or non-finite) vector.
pub fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let n = norm(v);
    if n > 0.0 && n.is_finite() {
        Some(v.iter().map(|x| x / n).collect())
    } else {
        None
    }
}

/// Index of the centroid with the largest dot product; ties go to the lowest index.
pub(crate) fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let s = dot(point, centroid);
        if s > best.1 {
            best = (c, s);
        }
    }
    best
}

fn assign(points: &[Vec<f64>], centroids: &[Vec<f64>]) -> (Vec<usize>, Vec<f64>, f64) {
    let pairs: Vec<(usize, f64)> = points.par_iter().map(|p| nearest(p, centroids)).collect();
    let (labels, sims): (Vec<usize>, Vec<f64>) = pairs.into_iter().unzip();
    // Sequential sum keeps the objective bit-reproducible.
    let objective = sims.iter().sum();
    (labels, sims, objective)
}

/// k-means++ seeding with `1 - cos` as the distance.
fn init_plus_plus(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut chosen = vec![false; n];
    let first = rng.gen_range(0..n);
    chosen[first] = true;
    let mut centroids = vec![points[first].clone()];
    let mut best_sim: Vec<f64> = points.iter().map(|p| dot(p, &points[first])).collect();

    while centroids.len() < k {
        let weights: Vec<f64> = best_sim
            .iter()
            .map(|&s| {
                let d = (1.0 - s).max(0.0);
                d * d
            })
            .collect();
        let total: f64 = weights.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = None;
            for (i, w) in weights.iter().enumerate() {
                if *w <= 0.0 {
                    continue;
                }
                pick = Some(i);
                if target < *w {
                    break;
                }
                target -= w;
            }
            pick.expect("positive total weight")
        } else {
            // Every point coincides with a chosen centre; fall back to an unused point.
            let unused: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            unused[rng.gen_range(0..unused.len())]
        };
        chosen[pick] = true;
        let centre = points[pick].clone();
        for (s, p) in best_sim.iter_mut().zip(points) {
            *s = s.max(dot(p, &centre));
        }
        centroids.push(centre);
    }
    centroids
}

/// Normalized member means; empty (or cancelling) clusters are reseeded with the points
/// that fit their own centroid worst.
fn update(points: &[Vec<f64>], labels: &[usize], k: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; dim]; k];
    let mut sizes = vec![0usize; k];
    for (p, &c) in points.iter().zip(labels) {
        sizes[c] += 1;
        for (s, x) in sums[c].iter_mut().zip(p) {
            *s += x;
        }
    }
    let mut centroids: Vec<Option<Vec<f64>>> =
        sums.iter().zip(&sizes).map(|(s, &size)| if size == 0 { None } else { normalized(s) }).collect();

    let empty: Vec<usize> = (0..k).filter(|&c| centroids[c].is_none()).collect();
    if empty.is_empty() {
        return centroids.into_iter().map(Option::unwrap).collect();
    }

    // Fit of each point against its (updated) centroid; orphaned points count as worst.
    let orphaned: Vec<bool> = centroids.iter().map(Option::is_none).collect();
    let mut order: Vec<(f64, usize)> = points
        .iter()
        .zip(labels)
        .enumerate()
        .map(|(i, (p, &c))| {
            let s = centroids[c].as_ref().map_or(f64::NEG_INFINITY, |cen| dot(p, cen));
            (s, i)
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut order = order.into_iter().map(|(_, i)| i);
    for c in empty {
        // Never take the last member of a healthy cluster.
        let picked = order.by_ref().find(|&i| {
            let owner = labels[i];
            if orphaned[owner] || sizes[owner] > 1 {
                sizes[owner] -= 1;
                true
            } else {
                false
            }
        });
        centroids[c] = Some(points[picked.unwrap_or(c % points.len())].clone());
    }
    centroids.into_iter().map(Option::unwrap).collect()
}

/// Fits `k` unit-norm centroids to `points` (normalized internally).
///
/// Seeded k-means++ initialization, then alternating assignment (largest dot product,
/// lowest id on ties) and normalized-mean updates until the assignment stops changing or
/// `max_iter` updates have run. The returned labels always match the returned centroids.
pub fn fit(points: &[Vec<f64>], k: usize, max_iter: usize, seed: u64) -> Result<KMeansFit> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if points.len() < k {
        return Err(Error::InsufficientPoints { needed: k, got: points.len() });
    }
    let dim = points[0].len();
    let mut unit = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len(), line: None });
        }
        unit.push(normalized(p).ok_or_else(|| Error::ZeroVector(format!("point {i}")))?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = init_plus_plus(&unit, k, &mut rng);
    let (mut labels, mut sims, objective) = assign(&unit, &centroids);
    let mut report = FitReport { iterations: 0, objective_trace: vec![objective], converged: false };

    while report.iterations < max_iter {
        centroids = update(&unit, &labels, k, dim);
        report.iterations += 1;
        let (new_labels, new_sims, objective) = assign(&unit, &centroids);
        report.objective_trace.push(objective);
        let changed = new_labels != labels;
        labels = new_labels;
        sims = new_sims;
        if !changed {
            report.converged = true;
            break;
        }
    }

    Ok(KMeansFit { centroids, labels, similarities: sims, report })
}
