//! Per-cluster breakdown of a query/result score.

use serde::Serialize;

use crate::clustering::{ClusterModel, UNLABELED};
use crate::distribution::ProjectDistribution;
use crate::error::{Error, Result};
use crate::search::SearchIndex;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExplanationEntry {
    pub cluster: usize,
    /// Term `q(c) * row(c)` of the scored inner product.
    pub contribution: f64,
    /// Query-side weight of the cluster (smoothed probability in KL mode).
    pub query_weight: f64,
    pub label: String,
    pub representatives: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Explanation {
    pub result_id: String,
    /// Sum of all K terms, equal to the search score.
    pub score: f64,
    pub entries: Vec<ExplanationEntry>,
}

/// All K inner-product terms between the query and the reference `result_id`, in cluster order.
pub fn contributions(q: &ProjectDistribution, index: &SearchIndex, result_id: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let i = index.position(result_id).ok_or_else(|| Error::UnknownResult(result_id.to_string()))?;
    let qv = index.query_vector(q)?;
    let terms = qv.iter().zip(index.row(i)).map(|(a, b)| a * b).collect();
    Ok((terms, qv))
}

/// The `m` largest terms (ties by cluster id), labelled and with `representatives` sub-tokens
/// per cluster.
pub fn explain(
    q: &ProjectDistribution,
    index: &SearchIndex,
    result_id: &str,
    model: &ClusterModel,
    m: usize,
    representatives: usize,
) -> Result<Explanation> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let (terms, qv) = contributions(q, index, result_id)?;
    let score = terms.iter().sum();
    let mut order: Vec<usize> = (0..terms.len()).collect();
    order.sort_by(|&a, &b| terms[b].total_cmp(&terms[a]).then(a.cmp(&b)));
    let entries = order
        .into_iter()
        .take(m)
        .map(|c| ExplanationEntry {
            cluster: c,
            contribution: terms[c],
            query_weight: qv[c],
            label: model.label(c).unwrap_or(UNLABELED).to_string(),
            representatives: model.representatives(c, representatives),
        })
        .collect();
    Ok(Explanation { result_id: result_id.to_string(), score, entries })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::clustering::Member;
    use crate::search::{build_index, SimilarityMode};

    fn model(k: usize) -> ClusterModel {
        let centroids = (0..k)
            .map(|i| {
                let mut v = vec![0.0; k];
                v[i] = 1.0;
                v
            })
            .collect();
        let members: BTreeMap<String, Member> =
            (0..k).map(|c| (format!("tok{c}"), Member { cluster: c, frequency: 1, similarity: 1.0 })).collect();
        let mut model = ClusterModel::new(centroids, members).unwrap();
        model.set_label(0, "zero").unwrap();
        model
    }

    fn dist(id: &str, probs: &[f64]) -> ProjectDistribution {
        ProjectDistribution::new(id, probs.to_vec(), 1, 0).unwrap()
    }

    #[test]
    fn one_hot_self_match() {
        let r = dist("r", &[0.0, 0.0, 1.0]);
        let idx = build_index(std::slice::from_ref(&r), SimilarityMode::Cosine, 1e-6, "x").unwrap();
        let e = explain(&r, &idx, "r", &model(3), 1, 4).unwrap();
        assert_eq!(e.entries.len(), 1);
        assert_eq!(e.entries[0].cluster, 2);
        assert_eq!(e.entries[0].contribution, 1.0);
        assert_eq!(e.entries[0].label, UNLABELED);
        assert_eq!(e.entries[0].representatives, ["tok2"]);
    }

    #[test]
    fn cosine_terms() {
        let idx = build_index(&[dist("r", &[1.0, 0.0])], SimilarityMode::Cosine, 1e-6, "x").unwrap();
        let e = explain(&dist("q", &[0.5, 0.5]), &idx, "r", &model(2), 2, 4).unwrap();
        let got: Vec<(usize, f64)> = e.entries.iter().map(|x| (x.cluster, x.contribution)).collect();
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].0, 0);
        assert!((got[0].1 - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(got[1], (1, 0.0));
        assert_eq!(e.entries[0].label, "zero");
    }

    #[test]
    fn clamps_and_errors() {
        let r = dist("r", &[0.3, 0.7]);
        let idx = build_index(std::slice::from_ref(&r), SimilarityMode::Kl, 1e-6, "x").unwrap();
        let e = explain(&r, &idx, "r", &model(2), 9, 4).unwrap();
        assert_eq!(e.entries.len(), 2);
        let score = idx.query(&r, 1).unwrap()[0].score;
        assert!((e.score - score).abs() < 1e-12);
        assert!(matches!(explain(&r, &idx, "nope", &model(2), 1, 4), Err(Error::UnknownResult(_))));
        assert!(explain(&r, &idx, "r", &model(2), 0, 4).is_err());
    }
}
