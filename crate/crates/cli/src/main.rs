mod config;
mod render;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use reposim_core::clustering::{self, gap, ClusterModel, DEFAULT_K, DEFAULT_MAX_ITER, DEFAULT_REPRESENTATIVES};
use reposim_core::distribution::{self, write_distributions, DistributionSet};
use reposim_core::embedding::{load_model, EmbeddingModel};
use reposim_core::pipeline::{self, write_atomic};
use reposim_core::search::{self, build_index, SearchIndex, SimilarityMode};
use reposim_core::tokenizer::{self, project_id_for, TokenStats, TokenizeOptions};
use reposim_core::{build_distribution, Error, DEFAULT_EPSILON};

use config::Config;

#[derive(Parser)]
#[command(name = "reposim", version, about = "Find similar repositories by the topics of their identifiers")]
struct Cli {
    /// Seed for every randomized stage.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Flat `key = value` settings file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Repeat for more detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count sub-tokens of project directories (one JSON record per project).
    Tokenize(TokenizeArgs),
    /// Cluster the embedded corpus vocabulary with spherical k-means.
    ClusterFit(ClusterFitArgs),
    /// Gap statistic over a range of cluster counts.
    Gap(GapArgs),
    /// Reassign a corpus vocabulary to the centroids of an existing cluster model.
    Assign(AssignArgs),
    /// Cluster distributions of tokenized projects.
    Distributions(DistributionsArgs),
    /// Prepare a search index from distributions.
    BuildIndex(BuildIndexArgs),
    /// Most similar references for a project directory, with explanations.
    Query(QueryArgs),
    /// Per-cluster breakdown of one query/result pair.
    Explain(ExplainArgs),
}

#[derive(Args)]
struct TokenizeArgs {
    /// Project directories.
    dirs: Vec<PathBuf>,
    /// File listing one project directory per line.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    max_file_size: Option<u64>,
    /// Directory name to skip; repeatable. Replaces the default list.
    #[arg(long)]
    ignore: Vec<String>,
    /// Leave out projects with no sub-tokens instead of failing.
    #[arg(long)]
    skip_empty: bool,
}

#[derive(Args)]
struct EmbeddingInput {
    /// Embedding model file.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Token statistics files.
    #[arg(long, num_args = 1.., required = true)]
    tokens: Vec<PathBuf>,
    #[arg(long)]
    max_iter: Option<usize>,
}

#[derive(Args)]
struct ClusterFitArgs {
    #[command(flatten)]
    input: EmbeddingInput,
    #[arg(short = 'K', long = "k")]
    k: Option<usize>,
    #[arg(short, long)]
    output: PathBuf,
    /// Cluster labels to attach (`cluster_id label` lines).
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Write the fit report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct GapArgs {
    #[command(flatten)]
    input: EmbeddingInput,
    #[arg(long)]
    k_min: usize,
    #[arg(long)]
    k_max: usize,
    /// Reference samples per k.
    #[arg(short = 'B', long = "references", default_value_t = 10)]
    b: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AssignArgs {
    #[command(flatten)]
    input: EmbeddingInput,
    /// Cluster model whose centroids are reused.
    #[arg(long)]
    clusters: Option<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct DistributionsArgs {
    #[arg(long)]
    clusters: Option<PathBuf>,
    #[arg(long, num_args = 1.., required = true)]
    tokens: Vec<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct BuildIndexArgs {
    #[arg(long)]
    distributions: Option<PathBuf>,
    #[arg(long)]
    mode: Option<SimilarityMode>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Cluster model to check the distributions against.
    #[arg(long)]
    clusters: Option<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SearchInput {
    /// Project directory to search for.
    target: PathBuf,
    #[arg(long)]
    clusters: Option<PathBuf>,
    /// Prebuilt index.
    #[arg(long)]
    index: Option<PathBuf>,
    /// Build the index in memory from a distribution file instead.
    #[arg(long)]
    distributions: Option<PathBuf>,
    #[arg(long)]
    mode: Option<SimilarityMode>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Extra cluster labels, overriding those stored in the model.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Sub-tokens listed per cluster.
    #[arg(long)]
    representatives: Option<usize>,
    /// Line-delimited JSON output.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    max_file_size: Option<u64>,
    #[arg(long)]
    ignore: Vec<String>,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    input: SearchInput,
    #[arg(short = 'n', long)]
    top_n: Option<usize>,
    /// Clusters shown per result.
    #[arg(short = 'm', long)]
    explain_m: Option<usize>,
    /// Approximate search probing this many coarse cells.
    #[arg(long)]
    probes: Option<usize>,
}

#[derive(Args)]
struct ExplainArgs {
    #[command(flatten)]
    input: SearchInput,
    /// Reference project to explain.
    #[arg(long)]
    result: String,
    #[arg(short = 'm', long)]
    explain_m: Option<usize>,
}

enum Failure {
    Core(Error),
    /// A required input artifact was not given or does not exist.
    Missing(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { ref source, ref path } if source.kind() == io::ErrorKind::NotFound => {
                Failure::Missing(format!("{} does not exist", path.display()))
            }
            e => Failure::Core(e),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Missing(_) => 2,
            Failure::Core(Error::EmptyProject(_)) => 3,
            Failure::Core(Error::NoKnownTokens(_)) => 4,
            Failure::Core(Error::ChecksumMismatch { .. }) => 5,
            Failure::Core(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => e.fmt(f),
            Failure::Missing(m) => f.write_str(m),
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn io_err(path: &Path) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| Error::Io { path: path.to_path_buf(), source: e }.into()
}

fn required(path: Option<PathBuf>, what: &str) -> Outcome<PathBuf> {
    path.ok_or_else(|| Failure::Missing(format!("no {what} given (flag or config)")))
}

struct Ctx {
    config: Config,
    seed: u64,
}

impl Ctx {
    fn embedding_model(&self, flag: Option<PathBuf>) -> Outcome<EmbeddingModel> {
        let path = required(self.config.path_or(flag, "embedding_model"), "embedding model")?;
        Ok(load_model(&path)?)
    }

    fn cluster_model(&self, flag: Option<PathBuf>) -> Outcome<ClusterModel> {
        let path = required(self.config.path_or(flag, "cluster_model"), "cluster model")?;
        let mut model = clustering::load_cluster_model(&path)?;
        if let Some(labels) = self.config.path_or(None, "labels") {
            apply_labels(&mut model, &labels)?;
        }
        Ok(model)
    }

    fn max_iter(&self, flag: Option<usize>) -> Outcome<usize> {
        Ok(self.config.or(flag, "max_iter")?.unwrap_or(DEFAULT_MAX_ITER))
    }

    fn epsilon(&self, flag: Option<f64>) -> Outcome<f64> {
        Ok(self.config.or(flag, "epsilon")?.unwrap_or(DEFAULT_EPSILON))
    }

    fn tokenize_options(&self, max_file_size: Option<u64>, ignore: Vec<String>) -> Outcome<TokenizeOptions> {
        let mut options = TokenizeOptions::default();
        if let Some(size) = self.config.or(max_file_size, "max_file_size")? {
            options.max_file_size = size;
        }
        let ignore = if ignore.is_empty() { self.config.list("ignore") } else { ignore };
        if !ignore.is_empty() {
            options.ignore = ignore;
        }
        Ok(options)
    }
}

fn apply_labels(model: &mut ClusterModel, path: &Path) -> Outcome {
    for (c, label) in clustering::load_labels(path)? {
        model.set_label(c, label)?;
    }
    Ok(())
}

fn load_all_tokens(paths: &[PathBuf]) -> Outcome<Vec<TokenStats>> {
    let mut all = Vec::new();
    for p in paths {
        all.extend(tokenizer::load_token_stats(p)?);
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = all.iter().find(|s| !seen.insert(s.project_id.as_str())) {
        return Err(Error::InvalidArgument(format!("project {:?} appears twice", dup.project_id)).into());
    }
    Ok(all)
}

fn stdout_line(text: &str) -> Outcome {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(io_err(Path::new("<stdout>")))
}

fn tokenize(ctx: &Ctx, args: TokenizeArgs) -> Outcome {
    let mut dirs = args.dirs;
    if let Some(manifest) = &args.manifest {
        let text = fs::read_to_string(manifest).map_err(io_err(manifest))?;
        let base = manifest.parent().unwrap_or(Path::new(""));
        dirs.extend(text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(|l| base.join(l)));
    }
    if dirs.is_empty() {
        return Err(Error::InvalidArgument("no project directories given".into()).into());
    }
    for d in &dirs {
        if !d.is_dir() {
            return Err(Failure::Missing(format!("{} is not a directory", d.display())));
        }
    }
    let options = ctx.tokenize_options(args.max_file_size, args.ignore)?;
    let stats = if args.skip_empty {
        let mut kept = Vec::new();
        for d in &dirs {
            match tokenizer::tokenize_project(d, &project_id_for(d), &options) {
                Ok(s) => kept.push(s),
                Err(Error::EmptyProject(id)) => warn!("skipping {id}: no sub-tokens"),
                Err(e) => return Err(e.into()),
            }
        }
        kept
    } else {
        pipeline::tokenize_dirs(&dirs, &options)?
    };
    write_atomic(&args.output, |w| {
        tokenizer::write_token_stats(w, &stats).map_err(|e| Error::Io { path: args.output.clone(), source: e })
    })?;
    info!("wrote {} projects to {}", stats.len(), args.output.display());
    Ok(())
}

fn cluster_fit(ctx: &Ctx, args: ClusterFitArgs) -> Outcome {
    let embeddings = ctx.embedding_model(args.input.model)?;
    let stats = load_all_tokens(&args.input.tokens)?;
    let k = ctx.config.or(args.k, "k")?.unwrap_or(DEFAULT_K);
    let max_iter = ctx.max_iter(args.input.max_iter)?;
    let (mut model, report) = pipeline::fit_clusters(&stats, &embeddings, k, max_iter, ctx.seed)?;
    if let Some(labels) = ctx.config.path_or(args.labels, "labels") {
        apply_labels(&mut model, &labels)?;
    }
    write_atomic(&args.output, |w| model.write(w).map_err(|e| Error::Io { path: args.output.clone(), source: e }))?;
    if let Some(path) = &args.report {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        write_atomic(path, |w| writeln!(w, "{json}").map_err(|e| Error::Io { path: path.clone(), source: e }))?;
    }
    stdout_line(&format!(
        "clusters {} sub-tokens {} iterations {} converged {} checksum {}\n",
        model.k(),
        model.members().len(),
        report.iterations,
        report.converged,
        model.checksum()
    ))
}

fn gap_cmd(ctx: &Ctx, args: GapArgs) -> Outcome {
    if args.k_min == 0 || args.k_min > args.k_max {
        return Err(Error::InvalidArgument("need 1 <= k-min <= k-max".into()).into());
    }
    let embeddings = ctx.embedding_model(args.input.model)?;
    let stats = load_all_tokens(&args.input.tokens)?;
    let freq = pipeline::corpus_frequencies(&stats);
    let (points, _) = pipeline::embed_vocabulary(&embeddings, freq.keys());
    let vectors: Vec<Vec<f64>> = points.into_iter().map(|(_, v)| v).collect();
    let candidates: Vec<usize> = (args.k_min..=args.k_max).collect();
    let max_iter = ctx.max_iter(args.input.max_iter)?;
    let gaps = gap::gap_statistic(&vectors, &candidates, args.b, ctx.seed, max_iter)?;
    let mut text = String::from("k gap std_err\n");
    for (k, g) in &gaps {
        text.push_str(&format!("{k} {:.6} {:.6}\n", g.gap, g.std_err));
    }
    if let Some(k) = gap::select_k(&gaps) {
        text.push_str(&format!("selected {k}\n"));
    }
    if let Some(path) = &args.output {
        write_atomic(path, |w| w.write_all(text.as_bytes()).map_err(|e| Error::Io { path: path.clone(), source: e }))?;
    }
    stdout_line(&text)
}

fn assign(ctx: &Ctx, args: AssignArgs) -> Outcome {
    let embeddings = ctx.embedding_model(args.input.model)?;
    let base = ctx.cluster_model(args.clusters)?;
    let stats = load_all_tokens(&args.input.tokens)?;
    let freq = pipeline::corpus_frequencies(&stats);
    let (points, missing) = pipeline::embed_vocabulary(&embeddings, freq.keys());
    if !missing.is_empty() {
        warn!("{} sub-tokens have no embedding and stay unassigned", missing.len());
    }
    let mut model = ClusterModel::from_embeddings(base.centroids().to_vec(), &points, &freq)?;
    for (c, label) in base.labels() {
        model.set_label(*c, label.clone())?;
    }
    write_atomic(&args.output, |w| model.write(w).map_err(|e| Error::Io { path: args.output.clone(), source: e }))?;
    stdout_line(&format!("sub-tokens {} checksum {}\n", model.members().len(), model.checksum()))
}

fn distributions(ctx: &Ctx, args: DistributionsArgs) -> Outcome {
    let model = ctx.cluster_model(args.clusters)?;
    let stats = load_all_tokens(&args.tokens)?;
    let (dists, failed) = pipeline::build_distributions(&stats, &model);
    for e in &failed {
        warn!("skipping: {e}");
    }
    if dists.is_empty() {
        if let Some(e) = failed.into_iter().next() {
            return Err(e.into());
        }
        return Err(Error::EmptyIndex.into());
    }
    write_atomic(&args.output, |w| write_distributions(w, &model.checksum(), &dists))?;
    info!("wrote {} distributions to {}", dists.len(), args.output.display());
    Ok(())
}

fn load_distribution_set(path: &Path, model: Option<&ClusterModel>) -> Outcome<DistributionSet> {
    let set = distribution::load_distributions(path)?;
    if let Some(model) = model {
        let found = model.checksum();
        if set.model_checksum != found {
            return Err(Error::ChecksumMismatch { expected: set.model_checksum, found }.into());
        }
    }
    Ok(set)
}

fn build_index_cmd(ctx: &Ctx, args: BuildIndexArgs) -> Outcome {
    let path = required(ctx.config.path_or(args.distributions, "distributions"), "distributions")?;
    let model = match ctx.config.path_or(args.clusters, "cluster_model") {
        Some(p) => Some(clustering::load_cluster_model(&p)?),
        None => None,
    };
    let set = load_distribution_set(&path, model.as_ref())?;
    let mode = ctx.config.or(args.mode, "mode")?.unwrap_or(SimilarityMode::Kl);
    let index = build_index(&set.distributions, mode, ctx.epsilon(args.epsilon)?, &set.model_checksum)?;
    write_atomic(&args.output, |w| index.write(w).map_err(|e| Error::Io { path: args.output.clone(), source: e }))?;
    info!("indexed {} references ({mode})", index.len());
    Ok(())
}

/// Cluster model, index and the target's distribution, with checksums verified.
fn prepare_search(
    ctx: &Ctx,
    input: &mut SearchInput,
) -> Outcome<(ClusterModel, SearchIndex, reposim_core::ProjectDistribution)> {
    let mut model = ctx.cluster_model(input.clusters.take())?;
    if let Some(labels) = input.labels.take() {
        apply_labels(&mut model, &labels)?;
    }
    let mode = ctx.config.or(input.mode, "mode")?;
    let index = match (input.index.take(), input.distributions.take()) {
        (Some(path), _) => {
            let index = search::load_index(&path)?;
            if let Some(mode) = input.mode.filter(|m| *m != index.mode()) {
                return Err(Error::InvalidArgument(format!(
                    "--mode {mode} but {} was built for {}",
                    path.display(),
                    index.mode()
                ))
                .into());
            }
            index
        }
        (None, flag) => match ctx.config.path_or(None, "index").filter(|_| flag.is_none()) {
            Some(path) => search::load_index(&path)?,
            None => {
                let path = required(ctx.config.path_or(flag, "distributions"), "index or distributions")?;
                let set = load_distribution_set(&path, Some(&model))?;
                build_index(
                    &set.distributions,
                    mode.unwrap_or(SimilarityMode::Kl),
                    ctx.epsilon(input.epsilon)?,
                    &set.model_checksum,
                )?
            }
        },
    };
    index.check_model(&model)?;

    if !input.target.is_dir() {
        return Err(Failure::Missing(format!("{} is not a directory", input.target.display())));
    }
    let options = ctx.tokenize_options(input.max_file_size, std::mem::take(&mut input.ignore))?;
    let stats = tokenizer::tokenize_project(&input.target, &project_id_for(&input.target), &options)?;
    let q = build_distribution(&stats, &model)?;
    Ok((model, index, q))
}

fn query(ctx: &Ctx, mut args: QueryArgs) -> Outcome {
    let (model, index, q) = prepare_search(ctx, &mut args.input)?;
    let top_n = ctx.config.or(args.top_n, "top_n")?.unwrap_or(10);
    let m = ctx.config.or(args.explain_m, "explain_m")?.unwrap_or(5);
    let reps = ctx.config.or(args.input.representatives, "representatives")?.unwrap_or(DEFAULT_REPRESENTATIVES);
    if top_n == 0 || m == 0 {
        return Err(Error::InvalidArgument("top_n and explain_m must be at least 1".into()).into());
    }
    let results = match args.probes {
        Some(p) => {
            let quantizer = index.coarse_quantizer(ctx.seed)?;
            index.query_approx(&quantizer, &q, top_n, p)?
        }
        None => index.query(&q, top_n)?,
    };
    let mut explanations = Vec::with_capacity(results.len());
    for r in &results {
        explanations.push(reposim_core::explain(&q, &index, &r.project_id, &model, m, reps)?);
    }
    let text = if args.input.json {
        render::json(&q, &index, &results, &explanations)
    } else {
        render::text(&q, &index, &results, &explanations)
    };
    stdout_line(&text)
}

fn explain_cmd(ctx: &Ctx, mut args: ExplainArgs) -> Outcome {
    let (model, index, q) = prepare_search(ctx, &mut args.input)?;
    let m = ctx.config.or(args.explain_m, "explain_m")?.unwrap_or(5);
    let reps = ctx.config.or(args.input.representatives, "representatives")?.unwrap_or(DEFAULT_REPRESENTATIVES);
    let e = reposim_core::explain(&q, &index, &args.result, &model, m, reps)?;
    let rank =
        index.query(&q, index.len())?.into_iter().find(|r| r.project_id == args.result).expect("result is indexed");
    let text =
        if args.input.json { render::json(&q, &index, &[rank], &[e]) } else { render::text(&q, &index, &[rank], &[e]) };
    stdout_line(&text)
}

fn run(cli: Cli) -> Outcome {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let seed = config.or(cli.seed, "seed")?.unwrap_or(0);
    let ctx = Ctx { config, seed };
    match cli.command {
        Command::Tokenize(a) => tokenize(&ctx, a),
        Command::ClusterFit(a) => cluster_fit(&ctx, a),
        Command::Gap(a) => gap_cmd(&ctx, a),
        Command::Assign(a) => assign(&ctx, a),
        Command::Distributions(a) => distributions(&ctx, a),
        Command::BuildIndex(a) => build_index_cmd(&ctx, a),
        Command::Query(a) => query(&ctx, a),
        Command::Explain(a) => explain_cmd(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).format_timestamp(None).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("reposim: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
