//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn corpus_dirs() -> Vec<PathBuf> {
    let mut dirs: Vec<PathBuf> =
        fs::read_dir(fixture("corpus")).unwrap().map(|e| e.unwrap().path()).filter(|p| p.is_dir()).collect();
    dirs.sort();
    dirs
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

fn gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn uniform_sphere(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| unit(gaussian(rng, dim))).collect()
}

/// `n` points in `k` groups (sizes differ by at most one) around random centres at least
/// `min_angle_deg` apart, each point `normalize(centre + sigma * N(0, I))`.
pub fn planted_clusters(
    rng: &mut ChaCha8Rng,
    k: usize,
    n: usize,
    dim: usize,
    sigma: f64,
    min_angle_deg: f64,
) -> (Vec<Vec<f64>>, Vec<usize>) {
    let max_cos = min_angle_deg.to_radians().cos();
    let mut centres: Vec<Vec<f64>> = Vec::new();
    while centres.len() < k {
        let c = unit(gaussian(rng, dim));
        let ok = centres.iter().all(|o| o.iter().zip(&c).map(|(a, b)| a * b).sum::<f64>() <= max_cos);
        if ok || min_angle_deg <= 0.0 {
            centres.push(c);
        }
    }
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let c = i % k;
        let noise = gaussian(rng, dim);
        points.push(unit(centres[c].iter().zip(noise).map(|(x, e)| x + sigma * e).collect()));
        labels.push(c);
    }
    (points, labels)
}

/// Random probability vector; roughly a third of them have some exact zeros.
pub fn random_distribution(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let sparse = rng.gen_bool(0.3);
    let mut w: Vec<f64> = (0..k).map(|_| if sparse && rng.gen_bool(0.5) { 0.0 } else { Exp1.sample(rng) }).collect();
    if w.iter().all(|x| *x == 0.0) {
        w[rng.gen_range(0..k)] = 1.0;
    }
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

pub fn oracle_smooth(p: &[f64], eps: f64) -> Vec<f64> {
    let k = p.len() as f64;
    p.iter().map(|x| (x + eps) / (1.0 + k * eps)).collect()
}

/// Divergence term by term, straight from the definition.
pub fn oracle_kl(p: &[f64], r: &[f64]) -> f64 {
    let mut total = 0.0;
    for c in 0..p.len() {
        if p[c] > 0.0 {
            total += p[c] * (p[c].ln() - r[c].ln());
        }
    }
    total
}

fn choose2(n: u64) -> f64 {
    (n * n.saturating_sub(1) / 2) as f64
}

/// Hubert-Arabie adjusted Rand index.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&n| choose2(n)).sum();
    let sum_rows: f64 = rows.values().map(|&n| choose2(n)).sum();
    let sum_cols: f64 = cols.values().map(|&n| choose2(n)).sum();
    let expected = sum_rows * sum_cols / choose2(a.len() as u64);
    let max = (sum_rows + sum_cols) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

fn embedding_words() -> Vec<String> {
    fs::read_to_string(fixture("embeddings.txt"))
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .filter(|w| w.len() >= 3 && w.chars().all(|c| c.is_ascii_lowercase()))
        .collect()
}

/// Writes `projects` directories of `files_per` Python/Go/Java files built from fixture
/// vocabulary words. Returns the number of files written.
pub fn synthetic_projects(root: &Path, projects: usize, files_per: usize, seed: u64) -> usize {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = embedding_words();
    let mut written = 0;
    for p in 0..projects {
        let dir = root.join(format!("proj{p:02}"));
        fs::create_dir_all(&dir).unwrap();
        let pick = |rng: &mut ChaCha8Rng| words.choose(rng).unwrap().clone();
        for f in 0..files_per {
            let mut body = String::new();
            let (ext, text) = match f % 3 {
                0 => {
                    for _ in 0..20 {
                        body.push_str(&format!(
                            "def {}_{}({}):\n    return {}\n",
                            pick(&mut rng),
                            pick(&mut rng),
                            pick(&mut rng),
                            pick(&mut rng)
                        ));
                    }
                    ("py", body)
                }
                1 => {
                    body.push_str("package main\n");
                    for _ in 0..20 {
                        let a = pick(&mut rng);
                        body.push_str(&format!(
                            "func {}{}() {{ {a} := 1; _ = {a} }}\n",
                            pick(&mut rng),
                            capitalize(&pick(&mut rng))
                        ));
                    }
                    ("go", body)
                }
                _ => {
                    body.push_str(&format!("class {} {{\n", capitalize(&pick(&mut rng))));
                    for _ in 0..20 {
                        body.push_str(&format!(
                            "  int {}{}() {{ return 0; }}\n",
                            pick(&mut rng),
                            capitalize(&pick(&mut rng))
                        ));
                    }
                    body.push_str("}\n");
                    ("java", body)
                }
            };
            fs::write(dir.join(format!("f{f}.{ext}")), text).unwrap();
            written += 1;
        }
    }
    written
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}
