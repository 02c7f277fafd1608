mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reposim_core::clustering::{kmeans, parse_cluster_model, spherical_kmeans};
use reposim_core::distribution::{build_distribution, smooth, smooth_probs};
use reposim_core::explain::contributions;
use reposim_core::search::{build_index, kl_divergence, SimilarityMode};
use reposim_core::{ProjectDistribution, TokenStats};

use common::{adjusted_rand_index, oracle_kl, planted_clusters, random_distribution};

fn dist(id: &str, probs: Vec<f64>) -> ProjectDistribution {
    ProjectDistribution::new(id, probs, 1, 0).unwrap()
}

fn token_model(k: usize, vocab: usize, seed: u64) -> reposim_core::ClusterModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(String, Vec<f64>)> = common::uniform_sphere(&mut rng, vocab, 4)
        .into_iter()
        .enumerate()
        .map(|(i, v)| (format!("tok{i:03}"), v))
        .collect();
    spherical_kmeans(&points, k, 100, seed).unwrap().0
}

fn counts_strategy() -> impl Strategy<Value = BTreeMap<String, u64>> {
    prop::collection::btree_map((0usize..40).prop_map(|i| format!("tok{i:03}")), 1u64..50, 1..20)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kmeans_trace_norms_and_determinism(seed in any::<u64>(), k in 1usize..6, n in 6usize..80, dim in 2usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = common::uniform_sphere(&mut rng, n, dim);
        let fit = kmeans::fit(&points, k, 100, seed).unwrap();
        for w in fit.report.objective_trace.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
        for c in &fit.centroids {
            let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() <= 1e-9);
        }
        let again = kmeans::fit(&points, k, 100, seed).unwrap();
        prop_assert_eq!(&fit, &again);
        prop_assert!(fit.labels.iter().all(|&l| l < k));
    }

    #[test]
    fn permuting_inputs_keeps_the_partition(seed in any::<u64>(), shift in 1usize..119) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (points, _) = planted_clusters(&mut rng, 3, 120, 6, 0.05, 60.0);
        let fit = kmeans::fit(&points, 3, 100, 1).unwrap();
        let mut rotated = points.clone();
        rotated.rotate_left(shift);
        let other = kmeans::fit(&rotated, 3, 100, 1).unwrap();
        let mut back = other.labels.clone();
        back.rotate_right(shift);
        prop_assert_eq!(adjusted_rand_index(&fit.labels, &back), 1.0);
        prop_assert!((fit.objective() - other.objective()).abs() <= 1e-9);
    }

    #[test]
    fn distribution_is_scale_equivariant(counts in counts_strategy(), factor in 2u64..9) {
        let model = token_model(5, 30, 3);
        let a = TokenStats::from_counts("p", counts.clone());
        let b = TokenStats::from_counts("p", counts.iter().map(|(t, c)| (t.clone(), c * factor)).collect());
        match (build_distribution(&a, &model), build_distribution(&b, &model)) {
            (Ok(da), Ok(db)) => {
                for (x, y) in da.probs.iter().zip(&db.probs) {
                    prop_assert!((x - y).abs() <= 1e-12);
                }
                prop_assert_eq!(da.covered + da.dropped, a.total);
                let sum: f64 = da.probs.iter().sum();
                prop_assert!((sum - 1.0).abs() <= 1e-9);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "only one side failed"),
        }
    }

    #[test]
    fn merged_stats_average_by_coverage(a in counts_strategy(), b in counts_strategy()) {
        let model = token_model(5, 30, 4);
        let sa = TokenStats::from_counts("p", a);
        let sb = TokenStats::from_counts("p", b);
        let (Ok(da), Ok(db)) = (build_distribution(&sa, &model), build_distribution(&sb, &model)) else {
            return Ok(());
        };
        let mut merged = sa.clone();
        merged.merge(&sb);
        let dm = build_distribution(&merged, &model).unwrap();
        let (wa, wb) = (da.covered as f64, db.covered as f64);
        for c in 0..model.k() {
            let expected = (da.probs[c] * wa + db.probs[c] * wb) / (wa + wb);
            prop_assert!((dm.probs[c] - expected).abs() <= 1e-12);
        }
    }

    #[test]
    fn smoothing_keeps_order_and_mass(seed in any::<u64>(), k in 2usize..20, eps in 1e-9f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_distribution(&mut rng, k);
        let s = smooth(&dist("p", p.clone()), eps).unwrap().probs;
        prop_assert!(s.iter().all(|&x| x > 0.0));
        prop_assert!((s.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        for i in 0..k {
            for j in 0..k {
                if p[i] < p[j] {
                    prop_assert!(s[i] < s[j]);
                }
            }
            prop_assert!((s[i] - p[i]).abs() <= 10.0 * k as f64 * eps);
        }
    }

    #[test]
    fn gibbs_inequality(seed in any::<u64>(), k in 2usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = smooth_probs(&random_distribution(&mut rng, k), 1e-6);
        let r = smooth_probs(&random_distribution(&mut rng, k), 1e-6);
        let d = kl_divergence(&p, &r).unwrap();
        prop_assert!(d >= -1e-15);
        prop_assert!((d - oracle_kl(&p, &r)).abs() <= 1e-12);
        prop_assert!(kl_divergence(&p, &p).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn kl_ranking_matches_divergence(seed in any::<u64>(), n in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let refs: Vec<ProjectDistribution> =
            (0..n).map(|i| dist(&format!("r{i:02}"), random_distribution(&mut rng, 8))).collect();
        let q = dist("q", random_distribution(&mut rng, 8));
        let index = build_index(&refs, SimilarityMode::Kl, 1e-6, "x").unwrap();
        let got: Vec<String> = index.query(&q, n).unwrap().into_iter().map(|r| r.project_id).collect();
        let qs = smooth_probs(&q.probs, 1e-6);
        let mut want: Vec<(f64, String)> = refs
            .iter()
            .map(|r| (kl_divergence(&qs, &smooth_probs(&r.probs, 1e-6)).unwrap(), r.project_id.clone()))
            .collect();
        want.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        prop_assert_eq!(got, want.into_iter().map(|w| w.1).collect::<Vec<_>>());
    }

    #[test]
    fn cosine_scores_are_bounded(seed in any::<u64>(), n in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let refs: Vec<ProjectDistribution> =
            (0..n).map(|i| dist(&format!("r{i:02}"), random_distribution(&mut rng, 6))).collect();
        let index = build_index(&refs, SimilarityMode::Cosine, 1e-6, "x").unwrap();
        for r in &refs {
            let results = index.query(r, n).unwrap();
            prop_assert!(results.iter().all(|x| x.score >= 0.0 && x.score <= 1.0 + 1e-12));
            let own = results.iter().find(|x| x.project_id == r.project_id).unwrap();
            prop_assert!((own.score - 1.0).abs() <= 1e-12);
            prop_assert!(results.windows(2).all(|w| w[0].score >= w[1].score));
            prop_assert!(results.iter().enumerate().all(|(i, x)| x.rank == i + 1));
        }
    }

    #[test]
    fn growing_the_index_keeps_relative_order(seed in any::<u64>(), n in 2usize..30, extra in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let refs: Vec<ProjectDistribution> =
            (0..n).map(|i| dist(&format!("a{i:02}"), random_distribution(&mut rng, 8))).collect();
        let q = dist("q", random_distribution(&mut rng, 8));
        for mode in [SimilarityMode::Kl, SimilarityMode::Cosine] {
            let before: Vec<String> = build_index(&refs, mode, 1e-6, "x").unwrap()
                .query(&q, n).unwrap().into_iter().map(|r| r.project_id).collect();
            let mut grown = refs.clone();
            grown.extend((0..extra).map(|i| dist(&format!("b{i:02}"), random_distribution(&mut rng, 8))));
            let after: Vec<String> = build_index(&grown, mode, 1e-6, "x").unwrap()
                .query(&q, grown.len()).unwrap().into_iter().map(|r| r.project_id)
                .filter(|id| id.starts_with('a')).collect();
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn contributions_sum_to_score(seed in any::<u64>(), n in 1usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let refs: Vec<ProjectDistribution> =
            (0..n).map(|i| dist(&format!("r{i:02}"), random_distribution(&mut rng, 12))).collect();
        let q = dist("q", random_distribution(&mut rng, 12));
        for mode in [SimilarityMode::Kl, SimilarityMode::Cosine] {
            let index = build_index(&refs, mode, 1e-6, "x").unwrap();
            for r in index.query(&q, n).unwrap() {
                let (terms, _) = contributions(&q, &index, &r.project_id).unwrap();
                prop_assert!((terms.iter().sum::<f64>() - r.score).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn cluster_model_round_trips(seed in any::<u64>(), k in 1usize..6) {
        let model = token_model(k, 20, seed);
        prop_assert!(model.members().values().all(|m| m.cluster < k));
        let mut buf = Vec::new();
        model.write(&mut buf).unwrap();
        let back = parse_cluster_model(buf.as_slice(), "mem").unwrap();
        prop_assert_eq!(back.checksum(), model.checksum());
        prop_assert_eq!(&back, &model);
    }

    #[test]
    fn token_stats_json_round_trip(counts in counts_strategy()) {
        let stats = TokenStats::from_counts("proj", counts);
        let mut buf = Vec::new();
        reposim_core::tokenizer::write_token_stats(&mut buf, std::slice::from_ref(&stats)).unwrap();
        let back = reposim_core::tokenizer::read_token_stats(buf.as_slice(), "mem").unwrap();
        prop_assert_eq!(back, vec![stats]);
    }
}
