//! Document synthesis pipeline: metadata in, validated dataset records
//! out, with pluggable clients, on-disk persistence, and resumability.
//!
//! Each record moves through code generation, a pre-render validation
//! gate, image asset synthesis, rendering, and a final validation at the
//! declared canvas size. Client failures exclude the record with a stage
//! code; rule violations exclude it with the rule code. One record's
//! failure never aborts the batch.
//!
//! On disk a run produces `dataset/<id>/` holding `record.json`,
//! `source.html`, the substituted `image_<k>_<W>x<H>.png` assets, the
//! screenshot, and `validation.json`, plus a root `manifest.jsonl` index
//! sorted by id. Records whose directory already holds a terminal
//! `record.json` are skipped, so an interrupted run resumes where it
//! stopped.

pub mod client;
pub mod config;
pub mod mock;
pub mod record;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::parse::parse_document;
use crate::serialize::serialize_document;
use crate::task::split_ids;
use crate::text::FontMetricModel;
use crate::validate::{
    parse_placeholder_url, substitute_assets, validate_source, AssetStage, ValidateOptions,
    ValidationReport, Verdict, ViolationCode,
};

pub use client::{
    annotate, Annotation, AnnotationClient, ClientError, CodegenClient, HttpAnnotationClient,
    HttpCodegenClient, HttpImagegenClient, ImagegenClient, Rendered, Renderer, RetryPolicy,
    SvgRenderer,
};
pub use config::{ConfigError, PipelineConfig};
pub use record::{
    AssetRef, DatasetRecord, ExclusionCode, RecordMeta, RecordStatus, StageCode,
};

/// The four services a run needs, shared across worker threads.
#[derive(Clone)]
pub struct Clients {
    pub annotation: Arc<dyn AnnotationClient>,
    pub codegen: Arc<dyn CodegenClient>,
    pub imagegen: Arc<dyn ImagegenClient>,
    pub renderer: Arc<dyn Renderer>,
}

impl Clients {
    /// Fully deterministic in-process services.
    pub fn mock(seed: u64) -> Self {
        Self {
            annotation: Arc::new(mock::MockAnnotation),
            codegen: Arc::new(mock::MockCodegen { seed }),
            imagegen: Arc::new(mock::MockImagegen),
            renderer: Arc::new(SvgRenderer::default()),
        }
    }

    /// HTTP clients where an endpoint is configured, deterministic mocks
    /// elsewhere. Rendering always uses the built-in renderer.
    pub fn from_config(cfg: &PipelineConfig) -> Self {
        let key = cfg.api_key.clone();
        Self {
            annotation: match &cfg.annotation_url {
                Some(url) => Arc::new(HttpAnnotationClient {
                    url: url.clone(),
                    api_key: key.clone(),
                }),
                None => Arc::new(mock::MockAnnotation),
            },
            codegen: match &cfg.codegen_url {
                Some(url) => Arc::new(HttpCodegenClient {
                    url: url.clone(),
                    api_key: key.clone(),
                }),
                None => Arc::new(mock::MockCodegen { seed: cfg.seed }),
            },
            imagegen: match &cfg.imagegen_url {
                Some(url) => Arc::new(HttpImagegenClient {
                    url: url.clone(),
                    api_key: key,
                }),
                None => Arc::new(mock::MockImagegen),
            },
            renderer: Arc::new(SvgRenderer::default()),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("worker pool: {0}")]
    Pool(String),
}

fn io_at(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), PipelineError> {
    let mut text =
        serde_json::to_string_pretty(value).expect("pipeline types serialize infallibly");
    text.push('\n');
    std::fs::write(path, text).map_err(io_at(path))
}

fn excluded_from(report: &ValidationReport<f64>) -> RecordStatus {
    let codes: std::collections::BTreeSet<ViolationCode> =
        report.violations.iter().map(|v| v.code).collect();
    RecordStatus::Excluded {
        codes: codes.into_iter().map(ExclusionCode::Rule).collect(),
    }
}

fn stage_excluded(stage: record::StageCode) -> RecordStatus {
    RecordStatus::Excluded {
        codes: vec![ExclusionCode::Stage(stage)],
    }
}

/// Runs one record through the full synthesis flow, writing artifacts
/// into `dir`. Client failures and rule violations come back as an
/// excluded record, not an error; only filesystem trouble is an `Err`.
pub fn synthesize_document(
    meta: &RecordMeta,
    clients: &Clients,
    cfg: &PipelineConfig,
    dir: &Path,
) -> Result<DatasetRecord, PipelineError> {
    let first = synthesize_once(meta, clients, cfg, dir, None)?;
    if !cfg.regenerate_on_exclude || !matches!(first.status, RecordStatus::Excluded { .. }) {
        return Ok(first);
    }
    for entry in std::fs::read_dir(dir).map_err(io_at(dir))? {
        let path = entry.map_err(io_at(dir))?.path();
        if path.is_dir() {
            std::fs::remove_dir_all(&path).map_err(io_at(&path))?;
        } else {
            std::fs::remove_file(&path).map_err(io_at(&path))?;
        }
    }
    synthesize_once(meta, clients, cfg, dir, Some("retry"))
}

fn synthesize_once(
    meta: &RecordMeta,
    clients: &Clients,
    cfg: &PipelineConfig,
    dir: &Path,
    salt: Option<&str>,
) -> Result<DatasetRecord, PipelineError> {
    let mut record = DatasetRecord::from_meta(meta);
    let retry = cfg.retry();
    let model = FontMetricModel::default();
    let declared = (f64::from(meta.width), f64::from(meta.height));

    let prompt_meta = match salt {
        Some(salt) => {
            let mut reseeded = meta.clone();
            reseeded.id = format!("{}::{salt}", meta.id);
            reseeded
        }
        None => meta.clone(),
    };
    let html = match retry.run(|| clients.codegen.generate(&prompt_meta)) {
        Ok(html) => html,
        Err(e) => {
            log::warn!("{}: code generation failed: {e}", meta.id);
            record.status = stage_excluded(record::StageCode::Codegen);
            write_json(&dir.join("record.json"), &record)?;
            return Ok(record);
        }
    };
    record.html = html.clone();
    let source_path = dir.join("source.html");
    std::fs::write(&source_path, &html).map_err(io_at(&source_path))?;

    // Pre-render gate: geometry and dialect at the placeholder stage, so
    // hopeless documents never reach asset synthesis.
    let pre_opts = ValidateOptions {
        tau: cfg.tau,
        stage: AssetStage::Placeholder,
        strict: cfg.strict_dialect,
        ..ValidateOptions::default()
    };
    let pre = validate_source(&html, declared, &pre_opts, &model);
    if pre.verdict == Verdict::Exclude {
        record.status = excluded_from(&pre);
        write_json(&dir.join("validation.json"), &pre)?;
        write_json(&dir.join("record.json"), &record)?;
        return Ok(record);
    }

    let ast = match parse_document(&html) {
        Ok(ast) => ast,
        Err(_) => unreachable!("the pre-render gate rejects unparseable source"),
    };
    let imgs: Vec<(u32, u32, String)> = ast
        .nodes()
        .iter()
        .filter(|r| r.node.tag == "img")
        .map(|r| {
            let (w, h) = r
                .node
                .attr("src")
                .and_then(parse_placeholder_url)
                .expect("the pre-render gate rejects invalid placeholders");
            (w, h, r.node.attr("alt").unwrap_or("").to_string())
        })
        .collect();
    let ids: Vec<usize> = (0..imgs.len()).collect();
    let (sub_ast, names) =
        substitute_assets(&ast, &ids).expect("one asset id per img by construction");

    for (k, ((width, height, alt), name)) in imgs.iter().zip(&names).enumerate() {
        match retry.run(|| clients.imagegen.generate(alt, *width, *height)) {
            Ok(bytes) => {
                let path = dir.join(name);
                std::fs::write(&path, bytes).map_err(io_at(&path))?;
                record.assets.push(AssetRef {
                    index: k,
                    width: *width,
                    height: *height,
                    alt: alt.clone(),
                    path: name.clone(),
                });
            }
            Err(e) => {
                log::warn!("{}: asset {k} generation failed: {e}", meta.id);
                record.status = stage_excluded(record::StageCode::Assets);
                write_json(&dir.join("record.json"), &record)?;
                return Ok(record);
            }
        }
    }

    let sub_html = serialize_document(&sub_ast);
    match retry.run(|| clients.renderer.render(&sub_html, declared, dir)) {
        Ok(rendered) => {
            let path = dir.join(&rendered.file_name);
            std::fs::write(&path, &rendered.bytes).map_err(io_at(&path))?;
            record.screenshot_path = Some(rendered.file_name);
            record.h_hat = Some(rendered.h_hat);
        }
        Err(e) => {
            log::warn!("{}: rendering failed: {e}", meta.id);
            record.status = stage_excluded(record::StageCode::Render);
            write_json(&dir.join("record.json"), &record)?;
            return Ok(record);
        }
    }

    let final_opts = ValidateOptions {
        tau: cfg.tau,
        stage: AssetStage::Substituted,
        strict: cfg.strict_dialect,
        asset_dir: Some(dir.to_path_buf()),
        ..ValidateOptions::default()
    };
    let report = validate_source(&sub_html, declared, &final_opts, &model);
    record.status = match report.verdict {
        Verdict::Exclude => excluded_from(&report),
        Verdict::Keep | Verdict::DialectWarning => RecordStatus::Kept,
    };
    write_json(&dir.join("validation.json"), &report)?;
    write_json(&dir.join("record.json"), &record)?;
    Ok(record)
}

/// Totals for one run, counted over every record in the dataset
/// directory, resumed ones included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    /// Records synthesized by this invocation.
    pub processed: usize,
    /// Records already terminal on disk and left alone.
    pub skipped: usize,
    pub kept: usize,
    pub excluded: usize,
    /// Manifest lines that failed to parse.
    pub bad_rows: usize,
    /// Records abandoned by filesystem errors.
    pub io_failures: usize,
    /// Exclusions per code, one count per record carrying the code.
    pub per_code: BTreeMap<String, usize>,
}

#[derive(Serialize)]
struct IndexEntry<'a> {
    id: &'a str,
    width: u32,
    height: u32,
    status: &'a RecordStatus,
}

fn read_terminal_record(dir: &Path) -> Option<DatasetRecord> {
    let text = std::fs::read_to_string(dir.join("record.json")).ok()?;
    let record: DatasetRecord = serde_json::from_str(&text).ok()?;
    record.status.is_terminal().then_some(record)
}

/// Reads every record under a dataset root, sorted by id.
pub fn load_records(dataset_dir: &Path) -> Result<Vec<DatasetRecord>, PipelineError> {
    let mut records = Vec::new();
    for entry in std::fs::read_dir(dataset_dir).map_err(io_at(dataset_dir))? {
        let path = entry.map_err(io_at(dataset_dir))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if !path.is_dir() || name.starts_with(".tmp-") {
            continue;
        }
        let record_path = path.join("record.json");
        if !record_path.is_file() {
            continue;
        }
        let text = std::fs::read_to_string(&record_path).map_err(io_at(&record_path))?;
        let record: DatasetRecord = serde_json::from_str(&text).map_err(|e| {
            PipelineError::Io {
                path: record_path.clone(),
                source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
            }
        })?;
        records.push(record);
    }
    records.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(records)
}

fn parse_manifest(text: &str) -> (Vec<RecordMeta>, usize) {
    let mut metas = Vec::new();
    let mut bad_rows = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match serde_json::from_str::<RecordMeta>(line) {
            Ok(meta) => metas.push(meta),
            Err(e) => {
                bad_rows += 1;
                log::warn!("manifest line {}: {e}", lineno + 1);
            }
        }
    }
    (metas, bad_rows)
}

fn process_record(
    meta: &RecordMeta,
    cfg: &PipelineConfig,
    clients: &Clients,
) -> Result<DatasetRecord, PipelineError> {
    let final_dir = cfg.dataset_dir.join(&meta.id);
    let tmp = cfg.dataset_dir.join(format!(".tmp-{}", meta.id));
    if tmp.exists() {
        std::fs::remove_dir_all(&tmp).map_err(io_at(&tmp))?;
    }
    std::fs::create_dir_all(&tmp).map_err(io_at(&tmp))?;
    let record = synthesize_document(meta, clients, cfg, &tmp)?;
    if final_dir.exists() {
        std::fs::remove_dir_all(&final_dir).map_err(io_at(&final_dir))?;
    }
    std::fs::rename(&tmp, &final_dir).map_err(io_at(&final_dir))?;
    Ok(record)
}

/// Runs a manifest of record metadata (one JSON object per line) against
/// the configured dataset directory. Records with a terminal record.json
/// are skipped; partial leftovers are cleared and redone; the root index
/// and optional splits are rebuilt at the end.
pub fn run_manifest(
    manifest_path: &Path,
    cfg: &PipelineConfig,
    clients: &Clients,
) -> Result<RunSummary, PipelineError> {
    let text = std::fs::read_to_string(manifest_path).map_err(io_at(manifest_path))?;
    let (metas, bad_rows) = parse_manifest(&text);
    std::fs::create_dir_all(&cfg.dataset_dir).map_err(io_at(&cfg.dataset_dir))?;

    for entry in std::fs::read_dir(&cfg.dataset_dir).map_err(io_at(&cfg.dataset_dir))? {
        let path = entry.map_err(io_at(&cfg.dataset_dir))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if path.is_dir() && name.starts_with(".tmp-") {
            std::fs::remove_dir_all(&path).map_err(io_at(&path))?;
        }
    }

    let mut resumed = Vec::new();
    let mut pending = Vec::new();
    for meta in metas {
        let dir = cfg.dataset_dir.join(&meta.id);
        match read_terminal_record(&dir) {
            Some(record) => resumed.push(record),
            None => {
                if dir.exists() {
                    std::fs::remove_dir_all(&dir).map_err(io_at(&dir))?;
                }
                pending.push(meta);
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| PipelineError::Pool(e.to_string()))?;
    let results: Vec<Result<DatasetRecord, PipelineError>> = pool.install(|| {
        pending
            .par_iter()
            .map(|meta| process_record(meta, cfg, clients))
            .collect()
    });

    let mut processed = Vec::new();
    let mut io_failures = 0;
    for result in results {
        match result {
            Ok(record) => processed.push(record),
            Err(e) => {
                io_failures += 1;
                log::error!("record abandoned: {e}");
            }
        }
    }

    let mut all: Vec<&DatasetRecord> = resumed.iter().chain(processed.iter()).collect();
    all.sort_by(|a, b| a.id.cmp(&b.id));

    let index_path = cfg.dataset_dir.join("manifest.jsonl");
    let mut index = String::new();
    for record in &all {
        let entry = IndexEntry {
            id: &record.id,
            width: record.width,
            height: record.height,
            status: &record.status,
        };
        index.push_str(&serde_json::to_string(&entry).expect("index entries serialize"));
        index.push('\n');
    }
    std::fs::write(&index_path, index).map_err(io_at(&index_path))?;

    if cfg.emit_splits {
        let kept_ids: Vec<String> = all
            .iter()
            .filter(|r| r.status == RecordStatus::Kept)
            .map(|r| r.id.clone())
            .collect();
        write_json(
            &cfg.dataset_dir.join("splits.json"),
            &split_ids(&kept_ids, cfg.seed),
        )?;
    }

    let mut per_code: BTreeMap<String, usize> = BTreeMap::new();
    let mut kept = 0;
    let mut excluded = 0;
    for record in &all {
        match &record.status {
            RecordStatus::Kept => kept += 1,
            RecordStatus::Excluded { codes } => {
                excluded += 1;
                for code in codes {
                    *per_code.entry(code.to_string()).or_default() += 1;
                }
            }
            _ => {}
        }
    }

    Ok(RunSummary {
        processed: processed.len(),
        skipped: resumed.len(),
        kept,
        excluded,
        bad_rows,
        io_failures,
        per_code,
    })
}

/// Serializes a run manifest as JSONL, one metadata object per line.
pub fn manifest_to_jsonl(metas: &[RecordMeta]) -> String {
    let mut out = String::new();
    for meta in metas {
        out.push_str(&serde_json::to_string(meta).expect("metadata serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::mock::{synthetic_manifest, MockCodegen};

    fn test_config(dir: &Path, seed: u64) -> PipelineConfig {
        PipelineConfig {
            dataset_dir: dir.to_path_buf(),
            seed,
            parallelism: 2,
            base_delay_ms: 0,
            max_delay_ms: 0,
            ..PipelineConfig::default()
        }
    }

    fn write_manifest(path: &Path, metas: &[RecordMeta]) {
        std::fs::write(path, manifest_to_jsonl(metas)).unwrap();
    }

    #[test]
    fn synthesizes_a_clean_record_with_artifacts() {
        let tmp = tempfile::tempdir().unwrap();
        let manifest = synthetic_manifest(40, 3);
        let meta = manifest
            .iter()
            .find(|m| mock::planted_flaw(3, &m.id).is_none())
            .expect("some record draws a clean route");
        let cfg = test_config(tmp.path(), 3);
        let clients = Clients::mock(3);
        let dir = tmp.path().join(&meta.id);
        std::fs::create_dir_all(&dir).unwrap();

        let record = synthesize_document(meta, &clients, &cfg, &dir).unwrap();
        assert_eq!(record.status, RecordStatus::Kept, "{:?}", record.status);
        assert!(dir.join("source.html").is_file());
        assert!(dir.join("record.json").is_file());
        assert!(dir.join("validation.json").is_file());
        assert_eq!(record.screenshot_path.as_deref(), Some("screenshot.svg"));
        assert!(dir.join("screenshot.svg").is_file());
        assert!(record.h_hat.is_some());
        for asset in &record.assets {
            assert!(dir.join(&asset.path).is_file(), "{}", asset.path);
        }
    }

    #[test]
    fn planted_flaws_come_back_as_their_codes() {
        let tmp = tempfile::tempdir().unwrap();
        let manifest = synthetic_manifest(60, 3);
        let cfg = test_config(tmp.path(), 3);
        let clients = Clients::mock(3);
        for expected in [
            ViolationCode::R1,
            ViolationCode::R2,
            ViolationCode::R3,
            ViolationCode::R4,
            ViolationCode::D0,
        ] {
            let meta = manifest
                .iter()
                .find(|m| mock::planted_flaw(3, &m.id) == Some(expected))
                .expect("every flaw appears in 60 records");
            let dir = tmp.path().join(&meta.id);
            std::fs::create_dir_all(&dir).unwrap();
            let record = synthesize_document(meta, &clients, &cfg, &dir).unwrap();
            assert_eq!(
                record.status,
                RecordStatus::Excluded {
                    codes: vec![ExclusionCode::Rule(expected)]
                },
                "flaw {expected:?}"
            );
        }
    }

    #[test]
    fn client_outage_yields_a_stage_code() {
        struct DownCodegen;
        impl CodegenClient for DownCodegen {
            fn generate(&self, _meta: &RecordMeta) -> Result<String, ClientError> {
                Err(ClientError::Unavailable("down".into()))
            }
        }
        let tmp = tempfile::tempdir().unwrap();
        let meta = &synthetic_manifest(1, 3)[0];
        let cfg = test_config(tmp.path(), 3);
        let mut clients = Clients::mock(3);
        clients.codegen = Arc::new(DownCodegen);
        let dir = tmp.path().join(&meta.id);
        std::fs::create_dir_all(&dir).unwrap();
        let record = synthesize_document(meta, &clients, &cfg, &dir).unwrap();
        assert_eq!(
            record.status,
            RecordStatus::Excluded {
                codes: vec![ExclusionCode::Stage(record::StageCode::Codegen)]
            }
        );
    }

    #[test]
    fn run_is_deterministic_across_invocations() {
        let tmp = tempfile::tempdir().unwrap();
        let manifest_path = tmp.path().join("run.jsonl");
        write_manifest(&manifest_path, &synthetic_manifest(30, 5));

        let cfg_a = test_config(&tmp.path().join("a"), 5);
        let cfg_b = test_config(&tmp.path().join("b"), 5);
        let summary_a = run_manifest(&manifest_path, &cfg_a, &Clients::mock(5)).unwrap();
        let summary_b = run_manifest(&manifest_path, &cfg_b, &Clients::mock(5)).unwrap();
        assert_eq!(summary_a, summary_b);
        assert_eq!(summary_a.processed, 30);
        assert_eq!(summary_a.bad_rows, 0);
        assert_eq!(summary_a.io_failures, 0);

        let index_a = std::fs::read(cfg_a.dataset_dir.join("manifest.jsonl")).unwrap();
        let index_b = std::fs::read(cfg_b.dataset_dir.join("manifest.jsonl")).unwrap();
        assert_eq!(index_a, index_b);

        for record in load_records(&cfg_a.dataset_dir).unwrap() {
            let a = std::fs::read(cfg_a.dataset_dir.join(&record.id).join("source.html"));
            let b = std::fs::read(cfg_b.dataset_dir.join(&record.id).join("source.html"));
            match (&record.status, a, b) {
                (RecordStatus::Excluded { codes }, _, _)
                    if codes
                        .iter()
                        .any(|c| matches!(c, ExclusionCode::Stage(record::StageCode::Codegen))) => {}
                (_, Ok(a), Ok(b)) => assert_eq!(a, b, "{}", record.id),
                (status, a, b) => {
                    panic!("{}: status {status:?}, reads {a:?} / {b:?}", record.id)
                }
            }
        }
    }

    #[test]
    fn resumed_run_matches_uninterrupted_totals() {
        let tmp = tempfile::tempdir().unwrap();
        let metas = synthetic_manifest(24, 9);
        let full_path = tmp.path().join("full.jsonl");
        let half_path = tmp.path().join("half.jsonl");
        write_manifest(&full_path, &metas);
        write_manifest(&half_path, &metas[..12]);

        let cfg_once = test_config(&tmp.path().join("once"), 9);
        let once = run_manifest(&full_path, &cfg_once, &Clients::mock(9)).unwrap();

        let cfg_resumed = test_config(&tmp.path().join("resumed"), 9);
        let first = run_manifest(&half_path, &cfg_resumed, &Clients::mock(9)).unwrap();
        assert_eq!(first.processed, 12);
        let second = run_manifest(&full_path, &cfg_resumed, &Clients::mock(9)).unwrap();
        assert_eq!(second.skipped, 12);
        assert_eq!(second.processed, 12);

        assert_eq!(once.kept, second.kept);
        assert_eq!(once.excluded, second.excluded);
        assert_eq!(once.per_code, second.per_code);

        let index_once = std::fs::read(cfg_once.dataset_dir.join("manifest.jsonl")).unwrap();
        let index_resumed =
            std::fs::read(cfg_resumed.dataset_dir.join("manifest.jsonl")).unwrap();
        assert_eq!(index_once, index_resumed);
    }

    #[test]
    fn partial_leftovers_are_cleared_and_redone() {
        let tmp = tempfile::tempdir().unwrap();
        let metas = synthetic_manifest(4, 9);
        let manifest_path = tmp.path().join("run.jsonl");
        write_manifest(&manifest_path, &metas);
        let cfg = test_config(&tmp.path().join("data"), 9);

        std::fs::create_dir_all(cfg.dataset_dir.join(".tmp-rec_0001")).unwrap();
        let stale = cfg.dataset_dir.join("rec_0002");
        std::fs::create_dir_all(&stale).unwrap();
        std::fs::write(stale.join("source.html"), "partial").unwrap();

        let summary = run_manifest(&manifest_path, &cfg, &Clients::mock(9)).unwrap();
        assert_eq!(summary.processed, 4);
        assert_eq!(summary.skipped, 0);
        assert!(!cfg.dataset_dir.join(".tmp-rec_0001").exists());
        assert_ne!(
            std::fs::read_to_string(stale.join("source.html")).unwrap(),
            "partial"
        );
    }

    #[test]
    fn bad_manifest_rows_are_counted_not_fatal() {
        let tmp = tempfile::tempdir().unwrap();
        let metas = synthetic_manifest(2, 9);
        let manifest_path = tmp.path().join("run.jsonl");
        let mut text = manifest_to_jsonl(&metas);
        text.push_str("{\"id\": \"broken\"\n\n");
        std::fs::write(&manifest_path, text).unwrap();
        let cfg = test_config(&tmp.path().join("data"), 9);
        let summary = run_manifest(&manifest_path, &cfg, &Clients::mock(9)).unwrap();
        assert_eq!(summary.bad_rows, 1);
        assert_eq!(summary.processed, 2);
    }

    #[test]
    fn flaky_clients_recover_under_retry() {
        let tmp = tempfile::tempdir().unwrap();
        let metas = synthetic_manifest(8, 5);
        let manifest_path = tmp.path().join("run.jsonl");
        write_manifest(&manifest_path, &metas);

        let cfg_flaky = test_config(&tmp.path().join("flaky"), 5);
        let mut flaky = Clients::mock(5);
        flaky.codegen = Arc::new(mock::FlakyCodegen::new(MockCodegen { seed: 5 }));
        let with_outages = run_manifest(&manifest_path, &cfg_flaky, &flaky).unwrap();

        let cfg_steady = test_config(&tmp.path().join("steady"), 5);
        let steady = run_manifest(&manifest_path, &cfg_steady, &Clients::mock(5)).unwrap();
        assert_eq!(with_outages, steady);
    }

    #[test]
    fn kept_records_revalidate_as_keep() {
        let tmp = tempfile::tempdir().unwrap();
        let metas = synthetic_manifest(20, 7);
        let manifest_path = tmp.path().join("run.jsonl");
        write_manifest(&manifest_path, &metas);
        let cfg = test_config(&tmp.path().join("data"), 7);
        run_manifest(&manifest_path, &cfg, &Clients::mock(7)).unwrap();

        let records = load_records(&cfg.dataset_dir).unwrap();
        let mut kept_seen = 0;
        for record in records.iter().filter(|r| r.status == RecordStatus::Kept) {
            kept_seen += 1;
            let report = validate_source::<f64>(
                &record.html,
                (f64::from(record.width), f64::from(record.height)),
                &ValidateOptions {
                    strict: true,
                    ..ValidateOptions::default()
                },
                &FontMetricModel::default(),
            );
            assert_eq!(report.verdict, Verdict::Keep, "{}", record.id);
        }
        assert!(kept_seen > 0, "expected kept records in 20");
    }

    #[test]
    fn splits_are_emitted_over_kept_records() {
        let tmp = tempfile::tempdir().unwrap();
        let metas = synthetic_manifest(20, 7);
        let manifest_path = tmp.path().join("run.jsonl");
        write_manifest(&manifest_path, &metas);
        let mut cfg = test_config(&tmp.path().join("data"), 7);
        cfg.emit_splits = true;
        let summary = run_manifest(&manifest_path, &cfg, &Clients::mock(7)).unwrap();

        let splits: crate::task::Splits = serde_json::from_str(
            &std::fs::read_to_string(cfg.dataset_dir.join("splits.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(
            splits.train.len() + splits.val.len() + splits.test.len(),
            summary.kept
        );
    }

    #[test]
    fn regeneration_gives_excluded_records_a_second_chance() {
        struct BadThenCleanCodegen {
            inner: MockCodegen,
        }
        impl CodegenClient for BadThenCleanCodegen {
            fn generate(&self, meta: &RecordMeta) -> Result<String, ClientError> {
                if meta.id.ends_with("::retry") {
                    let clean = synthetic_manifest(40, 11)
                        .into_iter()
                        .find(|m| mock::planted_flaw(11, &m.id).is_none())
                        .expect("a clean route exists");
                    let mut fresh = clean;
                    fresh.width = meta.width;
                    fresh.height = meta.height;
                    self.inner.generate(&fresh)
                } else {
                    Ok("<html><body>".to_string())
                }
            }
        }

        let tmp = tempfile::tempdir().unwrap();
        let meta = &synthetic_manifest(1, 11)[0];
        let mut cfg = test_config(tmp.path(), 11);
        cfg.regenerate_on_exclude = true;
        let mut clients = Clients::mock(11);
        clients.codegen = Arc::new(BadThenCleanCodegen {
            inner: MockCodegen { seed: 11 },
        });
        let dir = tmp.path().join(&meta.id);
        std::fs::create_dir_all(&dir).unwrap();
        let record = synthesize_document(meta, &clients, &cfg, &dir).unwrap();
        assert_eq!(record.status, RecordStatus::Kept);
    }
}
