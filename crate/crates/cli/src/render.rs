use std::fmt::Write;

use reposim_core::search::{neg_entropy, SearchIndex, SimilarityMode};
use reposim_core::{Explanation, ProjectDistribution, SearchResult};
use serde_json::json;

/// Divergence of the query from a result, available in KL mode only.
fn divergence(q: &ProjectDistribution, index: &SearchIndex, score: f64) -> Option<f64> {
    match index.mode() {
        SimilarityMode::Kl => {
            let qv = index.query_vector(q).ok()?;
            Some((neg_entropy(&qv) - score).max(0.0))
        }
        SimilarityMode::Cosine => None,
    }
}

pub fn text(
    q: &ProjectDistribution,
    index: &SearchIndex,
    results: &[SearchResult],
    explanations: &[Explanation],
) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "query {} mode {} references {} covered {} dropped {}",
        q.project_id,
        index.mode(),
        index.len(),
        q.covered,
        q.dropped
    );
    for (r, e) in results.iter().zip(explanations) {
        let _ = write!(s, "\n#{} {} score {:.6}", r.rank, r.project_id, r.score);
        if let Some(d) = divergence(q, index, r.score) {
            let _ = write!(s, " divergence {d:.6}");
        }
        s.push('\n');
        let _ = writeln!(
            s,
            "  {:>7}  {:>12}  {:>8}  {:<24}  representatives",
            "cluster", "contribution", "weight", "label"
        );
        for entry in &e.entries {
            let _ = writeln!(
                s,
                "  {:>7}  {:>12.6}  {:>8.6}  {:<24}  {}",
                entry.cluster,
                entry.contribution,
                entry.query_weight,
                entry.label,
                entry.representatives.join(", ")
            );
        }
    }
    s
}

pub fn json(
    q: &ProjectDistribution,
    index: &SearchIndex,
    results: &[SearchResult],
    explanations: &[Explanation],
) -> String {
    let mut s = String::new();
    for (r, e) in results.iter().zip(explanations) {
        let record = json!({
            "query": q.project_id,
            "mode": index.mode(),
            "rank": r.rank,
            "project_id": r.project_id,
            "score": r.score,
            "divergence": divergence(q, index, r.score),
            "clusters": e.entries,
        });
        let _ = writeln!(s, "{record}");
    }
    s
}
