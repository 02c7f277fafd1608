//! Gap statistic for choosing the number of clusters.
//!
//! The within-cluster dispersion of the data, `W_k = sum(1 - cos(x, centroid(x)))`, is
//! compared against the dispersion of reference samples drawn uniformly from the unit sphere
//! (normalized Gaussian draws) with the same size and dimension.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::kmeans::{self, normalized};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapValue {
    pub gap: f64,
    /// `sd(log W_ref) * sqrt(1 + 1/B)`
    pub std_err: f64,
    pub log_dispersion: f64,
    pub mean_ref_log_dispersion: f64,
}

/// `n` points drawn uniformly from the unit sphere in `dim` dimensions.
pub fn uniform_sphere(n: usize, dim: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| loop {
            let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
            if let Some(u) = normalized(&v) {
                break u;
            }
        })
        .collect()
}

fn log_dispersion(points: &[Vec<f64>], k: usize, max_iter: usize, seed: u64) -> Result<f64> {
    let fit = kmeans::fit(points, k, max_iter, seed)?;
    // A perfect fit (k = n) has zero dispersion; keep the log finite.
    Ok(fit.dispersion().max(f64::MIN_POSITIVE).ln())
}

/// Gap value and standard error for every candidate `k`, using `b` reference samples.
pub fn gap_statistic(
    points: &[Vec<f64>],
    k_candidates: &[usize],
    b: usize,
    seed: u64,
    max_iter: usize,
) -> Result<BTreeMap<usize, GapValue>> {
    if k_candidates.is_empty() {
        return Err(Error::InvalidArgument("no candidate k".into()));
    }
    if b == 0 {
        return Err(Error::InvalidArgument("need at least one reference sample".into()));
    }
    if points.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, got: 0 });
    }
    let dim = points[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let references: Vec<Vec<Vec<f64>>> = (0..b).map(|_| uniform_sphere(points.len(), dim, &mut rng)).collect();

    let mut out = BTreeMap::new();
    for &k in k_candidates {
        let log_w = log_dispersion(points, k, max_iter, seed)?;
        let ref_log_w = references
            .iter()
            .enumerate()
            .map(|(i, r)| log_dispersion(r, k, max_iter, seed.wrapping_add(1 + i as u64)))
            .collect::<Result<Vec<f64>>>()?;
        let bf = b as f64;
        let mean = ref_log_w.iter().sum::<f64>() / bf;
        let sd = (ref_log_w.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / bf).sqrt();
        out.insert(
            k,
            GapValue {
                gap: mean - log_w,
                std_err: sd * (1.0 + 1.0 / bf).sqrt(),
                log_dispersion: log_w,
                mean_ref_log_dispersion: mean,
            },
        );
    }
    Ok(out)
}

/// Smallest `k` with `gap(k) >= gap(k') - se(k')`, `k'` the next candidate. Falls back to the
/// largest candidate when no `k` qualifies.
pub fn select_k(gaps: &BTreeMap<usize, GapValue>) -> Option<usize> {
    let entries: Vec<(&usize, &GapValue)> = gaps.iter().collect();
    entries
        .windows(2)
        .find(|w| w[0].1.gap >= w[1].1.gap - w[1].1.std_err)
        .map(|w| *w[0].0)
        .or_else(|| entries.last().map(|e| *e.0))
}
