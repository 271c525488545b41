//! Command-line front end for the document toolkit. Every command prints
//! its payload to stdout and keeps diagnostics on stderr. Exit codes: 0
//! on success, 1 when the work itself fails (an excluded document, a
//! reward error, abandoned records), 2 for usage and environment trouble.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dockit::elements::extract_elements;
use dockit::metrics::{aggregate_reports, derender_scores, document_metrics, MetricReport,
    MetricWarning};
use dockit::parse::parse_document;
use dockit::pipeline::{self, Clients, PipelineConfig};
use dockit::reward::{
    advantages_unchecked, group_advantages, handle_reward_request, reward_candidates,
    AdvantageConfig, RewardConfig, RewardRequest,
};
use dockit::style::{resolve_styles, StyleEnv};
use dockit::svg::render_svg;
use dockit::task::{build_task, split_ids, task_pairs_to_jsonl, to_flat, TaskKind, TaskPair};
use dockit::text::FontMetricModel;
use dockit::validate::{validate_source, AssetStage, ValidateOptions, Verdict};
use dockit::{lay_out_source, LaidDocument, Px};

#[derive(Parser)]
#[command(name = "dockit", version, about = "Restricted HTML/CSS document toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for shuffles, splits, and synthesis.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Height-reward tolerance band below the target.
    #[arg(long, global = true)]
    gamma: Option<f64>,

    /// Height-reward overflow penalty slope.
    #[arg(long, global = true)]
    alpha: Option<f64>,

    /// Overflow tolerance in px granted during validation.
    #[arg(long, global = true)]
    tau: Option<f64>,

    /// TOML run configuration for dataset builds.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for dataset builds (0 = one per CPU).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check documents against the dialect and cleaning rules.
    Validate(ValidateArgs),
    /// Lay a document out and print its box tree.
    Layout(DocArgs),
    /// Render a document to SVG.
    RenderSvg(RenderSvgArgs),
    /// Score candidate documents against a target height.
    Reward(RewardArgs),
    /// Turn a reward group into group-relative advantages.
    Advantage(AdvantageArgs),
    /// Layout quality metrics: overlap, alignment, height deviation.
    Metrics(MetricsArgs),
    /// Compare a predicted document against a reference rendering.
    DerenderEval(DerenderArgs),
    /// List the texts and images a document contains.
    ExtractElements(DocArgs),
    /// Build task pairs from kept dataset records.
    MakeTasks(MakeTasksArgs),
    /// Flatten a document to absolutely positioned leaf elements.
    ToFlat(DocArgs),
    /// Run a synthesis manifest into a dataset directory.
    BuildDataset(BuildDatasetArgs),
    /// Partition ids into train/val/test splits.
    Split(SplitArgs),
    /// Serve reward requests over stdio lines or HTTP.
    Serve(ServeArgs),
}

#[derive(Args)]
struct DocArgs {
    /// Document to read.
    file: PathBuf,
    /// Declared width in px (default: the body's declared width).
    #[arg(long)]
    width: Option<f64>,
    /// Declared height in px (default: the body's declared height).
    #[arg(long)]
    height: Option<f64>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Documents to check.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    height: Option<f64>,
    /// Treat dialect warnings as exclusions.
    #[arg(long)]
    strict: bool,
    /// Which img src form the documents are expected to carry.
    #[arg(long, value_enum, default_value_t = StageArg::Placeholder)]
    stage: StageArg,
    /// Directory that must hold the substituted asset files.
    #[arg(long)]
    asset_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Placeholder,
    Substituted,
}

#[derive(Args)]
struct RenderSvgArgs {
    #[command(flatten)]
    doc: DocArgs,
    /// Write the SVG here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RewardArgs {
    /// Candidate documents, one report each.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Target height in px.
    #[arg(long)]
    height: f64,
    /// Viewport width in px (default: the first candidate's body width).
    #[arg(long)]
    width: Option<f64>,
}

#[derive(Args)]
struct AdvantageArgs {
    /// Rewards forming one group.
    #[arg(required = true)]
    rewards: Vec<f64>,
    /// Expected group size.
    #[arg(long, default_value_t = 5)]
    group_size: usize,
    /// Accept any group size instead of enforcing one.
    #[arg(long)]
    free_size: bool,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    height: Option<f64>,
    /// Emit one CSV row per document instead of JSON.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct DerenderArgs {
    /// Predicted document.
    file: PathBuf,
    /// Reference document the prediction is measured against.
    #[arg(long)]
    reference: PathBuf,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    height: Option<f64>,
}

#[derive(Args)]
struct MakeTasksArgs {
    /// Dataset root, or one record directory.
    #[arg(long)]
    dataset: PathBuf,
    /// Task kind: i2d, dd, or e2d.
    #[arg(long)]
    kind: TaskKind,
    /// Write the JSONL here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BuildDatasetArgs {
    /// Run manifest: one metadata JSON object per line.
    #[arg(long, conflicts_with = "synthetic")]
    manifest: Option<PathBuf>,
    /// Generate a synthetic manifest of this many records instead.
    #[arg(long)]
    synthetic: Option<usize>,
    /// Dataset directory (default from config: "dataset").
    #[arg(long)]
    dataset_dir: Option<PathBuf>,
    /// Also write train/val/test splits over the kept records.
    #[arg(long)]
    emit_splits: bool,
}

#[derive(Args)]
struct SplitArgs {
    /// Ids to partition.
    ids: Vec<String>,
    /// Take kept record ids from this dataset root instead.
    #[arg(long, conflicts_with = "ids")]
    dataset: Option<PathBuf>,
}

#[derive(Args)]
struct ServeArgs {
    /// Listen for HTTP POST /reward here instead of serving stdio lines.
    #[arg(long)]
    http: Option<String>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Validate(args) => cmd_validate(&cli, args),
        Command::Layout(args) => cmd_layout(args),
        Command::RenderSvg(args) => cmd_render_svg(args),
        Command::Reward(args) => cmd_reward(&cli, args),
        Command::Advantage(args) => cmd_advantage(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::DerenderEval(args) => cmd_derender_eval(args),
        Command::ExtractElements(args) => cmd_extract_elements(args),
        Command::MakeTasks(args) => cmd_make_tasks(&cli, args),
        Command::ToFlat(args) => cmd_to_flat(args),
        Command::BuildDataset(args) => cmd_build_dataset(&cli, args),
        Command::Split(args) => cmd_split(&cli, args),
        Command::Serve(args) => cmd_serve(args),
    }
}

/// Writes to stdout, treating a closed pipe as a clean early exit so
/// `dockit ... | head` ends quietly.
fn write_stdout(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(e.into()),
    }
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_stdout(&text)
}

fn read_doc(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Declared canvas for a document: explicit flags win, then the body's
/// declared px width and height.
fn declared_dims(html: &str, width: Option<f64>, height: Option<f64>) -> Result<(f64, f64)> {
    if let (Some(w), Some(h)) = (width, height) {
        return Ok((w, h));
    }
    let ast = parse_document(html).context("document does not parse, pass --width/--height")?;
    let styles = resolve_styles::<Px>(&ast, &StyleEnv::default());
    let body = ast
        .body()
        .context("document has no body, pass --width/--height")?;
    let style = &styles.styles[body.index];
    let body_w = style.width.resolve(0.0);
    let body_h = style.height.resolve(0.0);
    let w = width
        .or(body_w)
        .context("the body declares no px width, pass --width")?;
    let h = height
        .or(body_h)
        .context("the body declares no px height, pass --height")?;
    Ok((w, h))
}

fn lay_out_file(path: &Path, width: Option<f64>, height: Option<f64>) -> Result<LaidDocument<Px>> {
    let html = read_doc(path)?;
    let dims = declared_dims(&html, width, height)?;
    lay_out_source(&html, dims, &FontMetricModel::default())
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn cmd_validate(cli: &Cli, args: &ValidateArgs) -> Result<ExitCode> {
    let opts = ValidateOptions::<Px> {
        tau: cli.tau.unwrap_or(0.0),
        stage: match args.stage {
            StageArg::Placeholder => AssetStage::Placeholder,
            StageArg::Substituted => AssetStage::Substituted,
        },
        strict: args.strict,
        asset_dir: args.asset_dir.clone(),
        ..ValidateOptions::default()
    };
    let model = FontMetricModel::default();

    #[derive(Serialize)]
    struct FileReport {
        file: String,
        #[serde(flatten)]
        report: dockit::validate::ValidationReport<Px>,
    }

    let mut reports = Vec::new();
    let mut any_excluded = false;
    for path in &args.files {
        let html = read_doc(path)?;
        let dims = match declared_dims(&html, args.width, args.height) {
            Ok(dims) => dims,
            // An unparseable document cannot reveal its size; validation
            // still reports it as a parse failure at a nominal canvas.
            Err(_) if parse_document(&html).is_err() => (1.0, 1.0),
            Err(e) => return Err(e),
        };
        let report = validate_source(&html, dims, &opts, &model);
        any_excluded |= report.verdict == Verdict::Exclude;
        reports.push(FileReport {
            file: path.display().to_string(),
            report,
        });
    }
    if reports.len() == 1 {
        emit(&reports[0].report)?;
    } else {
        emit(&reports)?;
    }
    Ok(if any_excluded {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_layout(args: &DocArgs) -> Result<ExitCode> {
    let doc = lay_out_file(&args.file, args.width, args.height)?;
    emit(&doc.tree)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_render_svg(args: &RenderSvgArgs) -> Result<ExitCode> {
    let doc = lay_out_file(&args.doc.file, args.doc.width, args.doc.height)?;
    let svg = render_svg(&doc.ast, &doc.styles, &doc.tree);
    match &args.output {
        Some(path) => std::fs::write(path, svg)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => write_stdout(&format!("{svg}\n"))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reward(cli: &Cli, args: &RewardArgs) -> Result<ExitCode> {
    let candidates: Vec<String> = args
        .files
        .iter()
        .map(|p| read_doc(p))
        .collect::<Result<_>>()?;
    let width = match args.width {
        Some(w) => w,
        None => declared_dims(&candidates[0], None, Some(args.height))?.0,
    };
    let defaults = RewardConfig::<Px>::default();
    let cfg = RewardConfig {
        gamma: cli.gamma.unwrap_or(defaults.gamma),
        alpha: cli.alpha.unwrap_or(defaults.alpha),
    };
    let result = reward_candidates(
        &candidates,
        (width, args.height),
        &cfg,
        AdvantageConfig::default().epsilon,
        &FontMetricModel::default(),
    );
    match result {
        Ok((reports, advantages)) => {
            if reports.len() == 1 {
                emit(&reports[0])?;
            } else {
                #[derive(Serialize)]
                struct Batch {
                    reports: Vec<dockit::reward::RewardReport<Px>>,
                    advantages: Vec<Px>,
                }
                emit(&Batch {
                    reports,
                    advantages,
                })?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_advantage(args: &AdvantageArgs) -> Result<ExitCode> {
    let cfg = AdvantageConfig {
        group_size: args.group_size,
        ..AdvantageConfig::default()
    };
    let advantages = if args.free_size {
        Ok(advantages_unchecked(&args.rewards, cfg.epsilon))
    } else {
        group_advantages(&args.rewards, &cfg)
    };
    match advantages {
        Ok(advantages) => {
            emit(&advantages)?;
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_metrics(args: &MetricsArgs) -> Result<ExitCode> {
    #[derive(Serialize)]
    struct FileMetrics {
        file: String,
        #[serde(flatten)]
        report: MetricReport<Px>,
        warnings: Vec<MetricWarning>,
    }

    let mut rows = Vec::new();
    for path in &args.files {
        let doc = lay_out_file(path, args.width, args.height)?;
        let html = read_doc(path)?;
        let dims = declared_dims(&html, args.width, args.height)?;
        let (report, warnings) = document_metrics(&doc.tree, dims)
            .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        rows.push(FileMetrics {
            file: path.display().to_string(),
            report,
            warnings,
        });
    }

    if args.csv {
        let mut out = String::from("file,overlap,alignment,height,n_elements\n");
        for row in &rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.file,
                row.report.overlap,
                row.report.alignment,
                row.report.height,
                row.report.n_elements
            ));
        }
        write_stdout(&out)?;
        return Ok(ExitCode::SUCCESS);
    }

    let aggregate = aggregate_reports(
        &rows.iter().map(|r| r.report).collect::<Vec<_>>(),
    );
    #[derive(Serialize)]
    struct Output {
        per_document: Vec<FileMetrics>,
        aggregate: Option<MetricReport<Px>>,
    }
    emit(&Output {
        per_document: rows,
        aggregate,
    })?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_derender_eval(args: &DerenderArgs) -> Result<ExitCode> {
    let reference_html = read_doc(&args.reference)?;
    let dims = declared_dims(&reference_html, args.width, args.height)?;
    let reference = lay_out_source(&reference_html, dims, &FontMetricModel::default())
        .map_err(|e| anyhow::anyhow!("{}: {e}", args.reference.display()))?;
    let predicted = lay_out_file(&args.file, Some(dims.0), Some(dims.1))?;
    emit(&derender_scores(&predicted, &reference, dims))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_extract_elements(args: &DocArgs) -> Result<ExitCode> {
    let html = read_doc(&args.file)?;
    let ast =
        parse_document(&html).map_err(|e| anyhow::anyhow!("{}: {e}", args.file.display()))?;
    emit(&extract_elements(&ast))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_make_tasks(cli: &Cli, args: &MakeTasksArgs) -> Result<ExitCode> {
    let seed = cli.seed.unwrap_or(0);
    let records = if args.dataset.join("record.json").is_file() {
        let text = read_doc(&args.dataset.join("record.json"))?;
        vec![serde_json::from_str(&text)
            .with_context(|| format!("{} holds no record", args.dataset.display()))?]
    } else {
        pipeline::load_records(&args.dataset)?
    };

    let mut pairs: Vec<TaskPair> = Vec::new();
    for mut record in records {
        if record.status != pipeline::RecordStatus::Kept {
            continue;
        }
        // Screenshot paths are stored relative to the record directory;
        // the emitted JSONL resolves them against the dataset root.
        record.screenshot_path = record
            .screenshot_path
            .take()
            .map(|name| format!("{}/{name}", record.id));
        let pair = build_task(&record, args.kind, seed)
            .map_err(|e| anyhow::anyhow!("{}: {e}", record.id))?;
        pairs.push(pair);
    }
    let jsonl = task_pairs_to_jsonl(&pairs);
    match &args.output {
        Some(path) => std::fs::write(path, jsonl)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => write_stdout(&jsonl)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_to_flat(args: &DocArgs) -> Result<ExitCode> {
    let doc = lay_out_file(&args.file, args.width, args.height)?;
    emit(&to_flat(&doc))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_build_dataset(cli: &Cli, args: &BuildDatasetArgs) -> Result<ExitCode> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::from_path(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(jobs) = cli.jobs {
        cfg.parallelism = jobs;
    }
    if let Some(gamma) = cli.gamma {
        cfg.gamma = gamma;
    }
    if let Some(alpha) = cli.alpha {
        cfg.alpha = alpha;
    }
    if let Some(tau) = cli.tau {
        cfg.tau = tau;
    }
    if let Some(dir) = &args.dataset_dir {
        cfg.dataset_dir = dir.clone();
    }
    if args.emit_splits {
        cfg.emit_splits = true;
    }
    cfg.override_from_env();

    let manifest_path = match (&args.manifest, args.synthetic) {
        (Some(path), None) => path.clone(),
        (None, Some(n)) => {
            let metas = pipeline::mock::synthetic_manifest(n, cfg.seed);
            std::fs::create_dir_all(&cfg.dataset_dir)
                .with_context(|| format!("cannot create {}", cfg.dataset_dir.display()))?;
            let path = cfg.dataset_dir.join("run-manifest.jsonl");
            std::fs::write(&path, pipeline::manifest_to_jsonl(&metas))
                .with_context(|| format!("cannot write {}", path.display()))?;
            path
        }
        _ => bail!("pass exactly one of --manifest or --synthetic"),
    };

    let clients = Clients::from_config(&cfg);
    let summary = pipeline::run_manifest(&manifest_path, &cfg, &clients)?;
    emit(&summary)?;
    Ok(if summary.io_failures > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_split(cli: &Cli, args: &SplitArgs) -> Result<ExitCode> {
    let ids: Vec<String> = match &args.dataset {
        Some(root) => pipeline::load_records(root)?
            .into_iter()
            .filter(|r| r.status == pipeline::RecordStatus::Kept)
            .map(|r| r.id)
            .collect(),
        None if args.ids.is_empty() => bail!("pass ids or --dataset"),
        None => args.ids.clone(),
    };
    emit(&split_ids(&ids, cli.seed.unwrap_or(0)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_serve(args: &ServeArgs) -> Result<ExitCode> {
    match &args.http {
        None => serve_stdio(),
        Some(addr) => serve_http(addr),
    }
}

/// One JSON request per stdin line, one JSON response per stdout line.
/// Malformed requests answer {"error": ...} and the loop keeps serving.
fn serve_stdio() -> Result<ExitCode> {
    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout().lock();
    for line in stdin.lock().lines() {
        let line = line.context("stdin closed uncleanly")?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let response = match serde_json::from_str::<RewardRequest>(line) {
            Ok(request) => match handle_reward_request(&request) {
                Ok(response) => serde_json::to_string(&response)?,
                Err(e) => serde_json::to_string(&serde_json::json!({ "error": e.to_string() }))?,
            },
            Err(e) => serde_json::to_string(&serde_json::json!({ "error": e.to_string() }))?,
        };
        writeln!(stdout, "{response}")?;
        stdout.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn serve_http(addr: &str) -> Result<ExitCode> {
    use axum::http::StatusCode;
    use axum::routing::post;
    use axum::Json;

    async fn reward_endpoint(
        Json(request): Json<RewardRequest>,
    ) -> (StatusCode, Json<serde_json::Value>) {
        match handle_reward_request(&request) {
            Ok(response) => (
                StatusCode::OK,
                Json(serde_json::to_value(response).expect("responses serialize")),
            ),
            Err(e) => (
                StatusCode::BAD_REQUEST,
                Json(serde_json::json!({ "error": e.to_string() })),
            ),
        }
    }

    let addr = addr.to_string();
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let app = axum::Router::new().route("/reward", post(reward_endpoint));
        let listener = tokio::net::TcpListener::bind(&addr)
            .await
            .with_context(|| format!("cannot bind {addr}"))?;
        let local = listener.local_addr().context("no local address")?;
        eprintln!("serving POST /reward on {local}");
        axum::serve(listener, app).await.context("server stopped")?;
        Ok(ExitCode::SUCCESS)
    })
}
