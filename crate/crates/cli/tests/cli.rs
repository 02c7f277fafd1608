use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn reposim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reposim")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = reposim(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    reposim(args).status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Artifacts {
    dir: tempfile::TempDir,
}

impl Artifacts {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

/// tokenize -> cluster-fit -> distributions -> build-index (both modes) in a fresh directory.
fn build_pipeline() -> Artifacts {
    let a = Artifacts { dir: tempfile::tempdir().unwrap() };
    let corpus = fixtures().join("corpus");
    let mut dirs: Vec<String> =
        fs::read_dir(&corpus).unwrap().map(|e| e.unwrap().path().display().to_string()).collect();
    dirs.sort();
    fs::write(a.path("manifest.txt"), dirs.join("\n")).unwrap();
    let tokens = a.path("tokens.jsonl");
    let clusters = a.path("clusters.txt");
    let dists = a.path("dists.txt");
    ok(&["tokenize", "--manifest", s(&a.path("manifest.txt")), "-o", s(&tokens)]);
    ok(&[
        "cluster-fit",
        "--model",
        s(&fixtures().join("embeddings.txt")),
        "--tokens",
        s(&tokens),
        "-K",
        "8",
        "--seed",
        "1",
        "--labels",
        s(&fixtures().join("labels.txt")),
        "-o",
        s(&clusters),
    ]);
    ok(&["distributions", "--clusters", s(&clusters), "--tokens", s(&tokens), "-o", s(&dists)]);
    for mode in ["kl", "cosine"] {
        let out = a.path(&format!("{mode}.idx"));
        ok(&["build-index", "--distributions", s(&dists), "--clusters", s(&clusters), "--mode", mode, "-o", s(&out)]);
    }
    a
}

fn query(a: &Artifacts, mode: &str, target: &str, extra: &[&str]) -> String {
    let clusters = a.path("clusters.txt");
    let index = a.path(&format!("{mode}.idx"));
    let target = fixtures().join("corpus").join(target);
    let mut args = vec!["query", s(&target), "--clusters", s(&clusters), "--index", s(&index), "-n", "3", "-m", "3"];
    args.extend_from_slice(extra);
    ok(&args)
}

#[test]
fn pipeline_output_is_reproducible_and_matches_golden() {
    let first = build_pipeline();
    let second = build_pipeline();
    for name in ["tokens.jsonl", "clusters.txt", "dists.txt", "kl.idx", "cosine.idx"] {
        assert_eq!(fs::read(first.path(name)).unwrap(), fs::read(second.path(name)).unwrap(), "{name}");
    }
    let out = query(&first, "kl", "router", &[]);
    assert_eq!(out, query(&second, "kl", "router", &[]));
    let golden =
        fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/query_router_kl.txt")).unwrap();
    assert_eq!(out, golden);
    assert!(out.lines().any(|l| l.starts_with("#1 router ")));
}

#[test]
fn self_query_in_both_modes() {
    let a = build_pipeline();
    for mode in ["kl", "cosine"] {
        let out = query(&a, mode, "ledger", &[]);
        assert!(out.starts_with(&format!("query ledger mode {mode} ")), "{out}");
        assert!(out.lines().any(|l| l.starts_with("#1 ledger score")), "{out}");
    }
    let json = query(&a, "cosine", "ledger", &["--json"]);
    let first: serde_json::Value = serde_json::from_str(json.lines().next().unwrap()).unwrap();
    assert_eq!(first["project_id"], "ledger");
    assert_eq!(first["mode"], "cosine");
    assert_eq!(first["clusters"].as_array().unwrap().len(), 3);
}

#[test]
fn query_from_distributions_and_approximate() {
    let a = build_pipeline();
    let target = fixtures().join("corpus/trainer");
    let clusters = a.path("clusters.txt");
    let dists = a.path("dists.txt");
    let out = ok(&[
        "query",
        s(&target),
        "--clusters",
        s(&clusters),
        "--distributions",
        s(&dists),
        "--mode",
        "cosine",
        "-n",
        "1",
    ]);
    assert!(out.contains("#1 trainer score 1.000000"), "{out}");
    let out = query(&a, "kl", "trainer", &["--probes", "4", "--seed", "2"]);
    assert!(out.contains("#1 trainer "), "{out}");
}

#[test]
fn explain_reports_clusters() {
    let a = build_pipeline();
    let target = fixtures().join("corpus/minidb");
    let out = ok(&[
        "explain",
        s(&target),
        "--clusters",
        s(&a.path("clusters.txt")),
        "--index",
        s(&a.path("cosine.idx")),
        "--result",
        "querykit",
        "-m",
        "2",
    ]);
    assert!(out.contains("querykit score"), "{out}");
    assert!(out.contains("databases"), "{out}");
}

#[test]
fn tokenize_manifest_of_three() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = fixtures().join("corpus");
    let manifest = dir.path().join("m.txt");
    fs::write(&manifest, format!("{0}/router\n{0}/deepnet\n\n{0}/ledger\n", corpus.display())).unwrap();
    let out = dir.path().join("t.jsonl");
    ok(&["tokenize", "--manifest", s(&manifest), "-o", s(&out)]);
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 3);
}

#[test]
fn exit_codes() {
    let a = build_pipeline();
    let clusters = a.path("clusters.txt");
    let index = a.path("kl.idx");

    // Missing artifact.
    let nowhere = a.path("nope.idx");
    let target = fixtures().join("corpus/router");
    assert_eq!(code(&["query", s(&target), "--clusters", s(&clusters), "--index", s(&nowhere)]), 2);
    assert_eq!(code(&["query", s(&target), "--index", s(&index)]), 2);

    // No supported source files.
    let empty = a.path("empty");
    fs::create_dir(&empty).unwrap();
    fs::write(empty.join("README.md"), "# nothing here\n").unwrap();
    assert_eq!(code(&["query", s(&empty), "--clusters", s(&clusters), "--index", s(&index)]), 3);
    let out = reposim(&["query", s(&empty), "--clusters", s(&clusters), "--index", s(&index)]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no sub-tokens"));

    // Only unknown sub-tokens.
    let odd = a.path("odd");
    fs::create_dir(&odd).unwrap();
    fs::write(odd.join("x.py"), "zqxw = qqqz_wwzv\n").unwrap();
    assert_eq!(code(&["query", s(&odd), "--clusters", s(&clusters), "--index", s(&index)]), 4);

    // A cluster model that does not match the distributions or index.
    let other = a.path("other.txt");
    ok(&[
        "cluster-fit",
        "--model",
        s(&fixtures().join("embeddings.txt")),
        "--tokens",
        s(&a.path("tokens.jsonl")),
        "-K",
        "5",
        "-o",
        s(&other),
    ]);
    let out_idx = a.path("mismatch.idx");
    assert_eq!(
        code(&["build-index", "--distributions", s(&a.path("dists.txt")), "--clusters", s(&other), "-o", s(&out_idx)]),
        5
    );
    assert!(!out_idx.exists());
    assert_eq!(code(&["query", s(&target), "--clusters", s(&other), "--index", s(&index)]), 5);

    // Mode disagreeing with a prebuilt index.
    assert_eq!(code(&["query", s(&target), "--clusters", s(&clusters), "--index", s(&index), "--mode", "cosine"]), 1);
}

#[test]
fn config_file_supplies_defaults() {
    let a = build_pipeline();
    let cfg = a.path("reposim.conf");
    fs::write(&cfg, "# shared settings\ncluster_model = clusters.txt\nindex = cosine.idx\ntop_n = 2\nexplain_m = 1\n")
        .unwrap();
    let target = fixtures().join("corpus/pixelart");
    let out = ok(&["query", s(&target), "--config", s(&cfg)]);
    assert!(out.contains("mode cosine"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with('#')).count(), 2);
    let out = ok(&["query", s(&target), "--config", s(&cfg), "-n", "4"]);
    assert_eq!(out.lines().filter(|l| l.starts_with('#')).count(), 4);

    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(code(&["query", s(&target), "--config", s(&cfg)]), 1);
}

#[test]
fn gap_reports_a_selection() {
    let a = build_pipeline();
    let out = ok(&[
        "gap",
        "--model",
        s(&fixtures().join("embeddings.txt")),
        "--tokens",
        s(&a.path("tokens.jsonl")),
        "--k-min",
        "2",
        "--k-max",
        "6",
        "-B",
        "3",
        "--seed",
        "4",
    ]);
    assert_eq!(out.lines().next(), Some("k gap std_err"));
    assert_eq!(out.lines().count(), 7);
    assert!(out.lines().last().unwrap().starts_with("selected "));
}

#[test]
fn assign_reuses_centroids() {
    let a = build_pipeline();
    let out = a.path("reassigned.txt");
    let printed = ok(&[
        "assign",
        "--model",
        s(&fixtures().join("embeddings.txt")),
        "--clusters",
        s(&a.path("clusters.txt")),
        "--tokens",
        s(&a.path("tokens.jsonl")),
        "-o",
        s(&out),
    ]);
    // Same vocabulary and centroids at a fixpoint: same table, same fingerprint.
    let fitted = ok(&[
        "cluster-fit",
        "--model",
        s(&fixtures().join("embeddings.txt")),
        "--tokens",
        s(&a.path("tokens.jsonl")),
        "-K",
        "8",
        "--seed",
        "1",
        "-o",
        s(&a.path("again.txt")),
    ]);
    let checksum = |text: &str| text.split_whitespace().last().unwrap().to_string();
    assert_eq!(checksum(&printed), checksum(&fitted));
}
