//! Pluggable external services the pipeline drives: an annotator, a code
//! generator, an image generator, and a renderer. Each has a reference
//! HTTP implementation speaking a small JSON shape; deterministic mocks
//! live in [`crate::pipeline::mock`]. Calls go through a bounded
//! exponential backoff policy.

use std::path::Path;
use std::time::Duration;

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::pipeline::record::RecordMeta;
use crate::svg::render_svg;
use crate::text::FontMetricModel;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClientError {
    /// Transport failure or server-side trouble; worth retrying.
    #[error("client unavailable: {0}")]
    Unavailable(String),
    /// The client answered, but not in the required shape; retried, since
    /// generative services are not deterministic.
    #[error("response violates the expected schema: {0}")]
    SchemaViolation(String),
    /// The request itself is unusable; retrying cannot help.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io error: {0}")]
    Io(String),
}

impl ClientError {
    pub fn is_retryable(&self) -> bool {
        matches!(
            self,
            ClientError::Unavailable(_) | ClientError::SchemaViolation(_)
        )
    }
}

/// Bounded exponential backoff without jitter: the n-th failure waits
/// base * 2^(n-1) milliseconds, capped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay_ms: u64,
    pub max_delay_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 3,
            base_delay_ms: 250,
            max_delay_ms: 4000,
        }
    }
}

impl RetryPolicy {
    pub fn delay_after(&self, failures: u32) -> Duration {
        let exp = failures.saturating_sub(1).min(16);
        let ms = self
            .base_delay_ms
            .saturating_mul(1u64 << exp)
            .min(self.max_delay_ms);
        Duration::from_millis(ms)
    }

    /// Runs an operation until it succeeds, exhausts the attempt budget,
    /// or fails unretryably.
    pub fn run<T>(
        &self,
        mut op: impl FnMut() -> Result<T, ClientError>,
    ) -> Result<T, ClientError> {
        let mut failures = 0;
        loop {
            match op() {
                Ok(v) => return Ok(v),
                Err(e) => {
                    failures += 1;
                    if failures >= self.max_attempts.max(1) || !e.is_retryable() {
                        return Err(e);
                    }
                    std::thread::sleep(self.delay_after(failures));
                }
            }
        }
    }
}

/// Produces raw model text for a screenshot; the [`annotate`] wrapper
/// enforces the response schema.
pub trait AnnotationClient: Send + Sync {
    fn annotate(&self, screenshot: &[u8]) -> Result<String, ClientError>;
}

/// Produces document source text from metadata.
pub trait CodegenClient: Send + Sync {
    fn generate(&self, meta: &RecordMeta) -> Result<String, ClientError>;
}

/// Produces encoded image bytes for an alt text at exact pixel dimensions.
pub trait ImagegenClient: Send + Sync {
    fn generate(&self, alt: &str, width: u32, height: u32) -> Result<Vec<u8>, ClientError>;
}

/// A rendered screenshot plus the height the renderer measured.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    /// Screenshot file name, extension included.
    pub file_name: String,
    pub bytes: Vec<u8>,
    pub h_hat: f64,
}

/// Turns document source into a screenshot and a rendered height. The
/// asset directory holds the substituted image files, if the renderer
/// wants to inline them.
pub trait Renderer: Send + Sync {
    fn render(
        &self,
        html: &str,
        viewport: (f64, f64),
        asset_dir: &Path,
    ) -> Result<Rendered, ClientError>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub intention: String,
    pub description: String,
}

/// Parses a raw annotation response, insisting on a bare JSON object with
/// exactly the keys intention and description.
pub fn parse_annotation(raw: &str) -> Result<Annotation, ClientError> {
    let trimmed = raw.trim();
    if trimmed.contains("```") {
        return Err(ClientError::SchemaViolation(
            "response wraps JSON in a fenced code block".to_string(),
        ));
    }
    let value: Value = serde_json::from_str(trimmed)
        .map_err(|e| ClientError::SchemaViolation(format!("response is not JSON: {e}")))?;
    let Some(obj) = value.as_object() else {
        return Err(ClientError::SchemaViolation(
            "response is not a JSON object".to_string(),
        ));
    };
    if obj.len() != 2 || !obj.contains_key("intention") || !obj.contains_key("description") {
        return Err(ClientError::SchemaViolation(format!(
            "expected exactly the keys intention and description, got {:?}",
            obj.keys().collect::<Vec<_>>()
        )));
    }
    match (obj["intention"].as_str(), obj["description"].as_str()) {
        (Some(intention), Some(description)) => Ok(Annotation {
            intention: intention.to_string(),
            description: description.to_string(),
        }),
        _ => Err(ClientError::SchemaViolation(
            "intention and description must be strings".to_string(),
        )),
    }
}

/// Annotates one screenshot file: reads it, queries the client under the
/// retry policy, and validates the response schema. A missing file fails
/// before any client call.
pub fn annotate(
    screenshot: &Path,
    client: &dyn AnnotationClient,
    retry: &RetryPolicy,
) -> Result<Annotation, ClientError> {
    let bytes = std::fs::read(screenshot)
        .map_err(|e| ClientError::Io(format!("{}: {e}", screenshot.display())))?;
    retry.run(|| parse_annotation(&client.annotate(&bytes)?))
}

/// The built-in renderer: parse, style, lay out, and emit SVG. Asset
/// files are referenced by relative name, not inlined.
#[derive(Debug, Clone, Default)]
pub struct SvgRenderer {
    pub model: FontMetricModel<f64>,
}

impl Renderer for SvgRenderer {
    fn render(
        &self,
        html: &str,
        viewport: (f64, f64),
        _asset_dir: &Path,
    ) -> Result<Rendered, ClientError> {
        let doc = crate::lay_out_source(html, viewport, &self.model)
            .map_err(|e| ClientError::InvalidInput(format!("document does not parse: {e}")))?;
        let svg = render_svg(&doc.ast, &doc.styles, &doc.tree);
        Ok(Rendered {
            file_name: "screenshot.svg".to_string(),
            bytes: svg.into_bytes(),
            h_hat: doc.tree.document_height(),
        })
    }
}

fn post_json(url: &str, api_key: Option<&str>, body: Value) -> Result<Value, ClientError> {
    let mut req = ureq::post(url).set("content-type", "application/json");
    if let Some(key) = api_key {
        req = req.set("authorization", &format!("Bearer {key}"));
    }
    let resp = req.send_json(body).map_err(|e| match e {
        ureq::Error::Status(code, resp) if code >= 500 || code == 429 => {
            ClientError::Unavailable(format!("{url} answered {code}: {:?}", resp.status_text()))
        }
        ureq::Error::Status(code, resp) => {
            ClientError::InvalidInput(format!("{url} answered {code}: {:?}", resp.status_text()))
        }
        ureq::Error::Transport(t) => ClientError::Unavailable(t.to_string()),
    })?;
    resp.into_json()
        .map_err(|e| ClientError::SchemaViolation(format!("response is not JSON: {e}")))
}

fn string_field(value: &Value, key: &str) -> Result<String, ClientError> {
    value
        .get(key)
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| {
            ClientError::SchemaViolation(format!("response lacks a string {key:?} field"))
        })
}

/// Reference HTTP annotator. POSTs {image_base64, prompt} and expects
/// {content: "..."} with the model's raw text.
#[derive(Debug, Clone)]
pub struct HttpAnnotationClient {
    pub url: String,
    pub api_key: Option<String>,
}

impl AnnotationClient for HttpAnnotationClient {
    fn annotate(&self, screenshot: &[u8]) -> Result<String, ClientError> {
        let body = serde_json::json!({
            "image_base64": BASE64.encode(screenshot),
            "prompt": "Extract the document's design intention and a detailed \
                       visual description. Answer with a bare JSON object with \
                       exactly the keys \"intention\" and \"description\". \
                       Do not include ``` fences.",
        });
        let resp = post_json(&self.url, self.api_key.as_deref(), body)?;
        string_field(&resp, "content")
    }
}

/// Reference HTTP code generator. POSTs {prompt} built from the metadata
/// and expects {content: "..."} with document source text.
#[derive(Debug, Clone)]
pub struct HttpCodegenClient {
    pub url: String,
    pub api_key: Option<String>,
}

impl CodegenClient for HttpCodegenClient {
    fn generate(&self, meta: &RecordMeta) -> Result<String, ClientError> {
        let prompt = format!(
            "Write a complete HTML document of category {:?} in styles {:?} \
             for this intention: {}. Canvas is {}x{} px. Use only div, img, \
             and p elements; every body and div declares display: flex or \
             display: grid with flex-wrap: nowrap; grids are at least 2x2; \
             no absolute positioning, no reversed or reordered children, no \
             background images; text only inside p; every img uses \
             src=\"https://picsum.photos/W/H\" with a non-empty alt. \
             Answer with the HTML only.",
            meta.category, meta.styles, meta.intention, meta.width, meta.height
        );
        let resp = post_json(
            &self.url,
            self.api_key.as_deref(),
            serde_json::json!({ "prompt": prompt }),
        )?;
        string_field(&resp, "content")
    }
}

/// Reference HTTP image generator. POSTs {prompt, width, height} and
/// expects {image_base64: "..."} with encoded image bytes.
#[derive(Debug, Clone)]
pub struct HttpImagegenClient {
    pub url: String,
    pub api_key: Option<String>,
}

impl ImagegenClient for HttpImagegenClient {
    fn generate(&self, alt: &str, width: u32, height: u32) -> Result<Vec<u8>, ClientError> {
        let resp = post_json(
            &self.url,
            self.api_key.as_deref(),
            serde_json::json!({ "prompt": alt, "width": width, "height": height }),
        )?;
        let encoded = string_field(&resp, "image_base64")?;
        BASE64
            .decode(encoded.as_bytes())
            .map_err(|e| ClientError::SchemaViolation(format!("image_base64 is invalid: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicU32, Ordering};

    #[test]
    fn delays_double_up_to_the_cap() {
        let p = RetryPolicy {
            max_attempts: 10,
            base_delay_ms: 100,
            max_delay_ms: 1000,
        };
        assert_eq!(p.delay_after(1), Duration::from_millis(100));
        assert_eq!(p.delay_after(2), Duration::from_millis(200));
        assert_eq!(p.delay_after(3), Duration::from_millis(400));
        assert_eq!(p.delay_after(4), Duration::from_millis(800));
        assert_eq!(p.delay_after(5), Duration::from_millis(1000));
        assert_eq!(p.delay_after(20), Duration::from_millis(1000));
    }

    #[test]
    fn retries_stop_at_the_attempt_budget() {
        let p = RetryPolicy {
            max_attempts: 3,
            base_delay_ms: 0,
            max_delay_ms: 0,
        };
        let calls = AtomicU32::new(0);
        let result: Result<(), _> = p.run(|| {
            calls.fetch_add(1, Ordering::SeqCst);
            Err(ClientError::Unavailable("down".into()))
        });
        assert!(result.is_err());
        assert_eq!(calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn transient_failures_recover() {
        let p = RetryPolicy {
            max_attempts: 3,
            base_delay_ms: 0,
            max_delay_ms: 0,
        };
        let calls = AtomicU32::new(0);
        let result = p.run(|| {
            if calls.fetch_add(1, Ordering::SeqCst) < 1 {
                Err(ClientError::Unavailable("down".into()))
            } else {
                Ok(42)
            }
        });
        assert_eq!(result, Ok(42));
        assert_eq!(calls.load(Ordering::SeqCst), 2);
    }

    #[test]
    fn unretryable_errors_fail_fast() {
        let p = RetryPolicy {
            max_attempts: 5,
            base_delay_ms: 0,
            max_delay_ms: 0,
        };
        let calls = AtomicU32::new(0);
        let result: Result<(), _> = p.run(|| {
            calls.fetch_add(1, Ordering::SeqCst);
            Err(ClientError::InvalidInput("bad".into()))
        });
        assert!(result.is_err());
        assert_eq!(calls.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn annotation_schema_is_strict() {
        let good = r#"{"intention": "a", "description": "b"}"#;
        assert!(parse_annotation(good).is_ok());
        assert!(parse_annotation("  \n{\"intention\":\"a\",\"description\":\"b\"}\n").is_ok());

        let fenced = "```json\n{\"intention\":\"a\",\"description\":\"b\"}\n```";
        assert!(matches!(
            parse_annotation(fenced),
            Err(ClientError::SchemaViolation(_))
        ));
        assert!(matches!(
            parse_annotation(r#"{"intention": "a"}"#),
            Err(ClientError::SchemaViolation(_))
        ));
        assert!(matches!(
            parse_annotation(r#"{"intention": "a", "description": "b", "extra": 1}"#),
            Err(ClientError::SchemaViolation(_))
        ));
        assert!(matches!(
            parse_annotation(r#"{"intention": 3, "description": "b"}"#),
            Err(ClientError::SchemaViolation(_))
        ));
        assert!(matches!(
            parse_annotation("not json"),
            Err(ClientError::SchemaViolation(_))
        ));
    }

    struct CountingAnnotator(AtomicU32);

    impl AnnotationClient for CountingAnnotator {
        fn annotate(&self, _screenshot: &[u8]) -> Result<String, ClientError> {
            self.0.fetch_add(1, Ordering::SeqCst);
            Ok(r#"{"intention": "x", "description": "y"}"#.to_string())
        }
    }

    #[test]
    fn missing_screenshot_fails_before_any_client_call() {
        let client = CountingAnnotator(AtomicU32::new(0));
        let err = annotate(
            Path::new("/nonexistent/screenshot.png"),
            &client,
            &RetryPolicy::default(),
        )
        .unwrap_err();
        assert!(matches!(err, ClientError::Io(_)));
        assert_eq!(client.0.load(Ordering::SeqCst), 0);
    }

    #[test]
    fn annotate_reads_the_file_and_validates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("shot.png");
        std::fs::write(&path, b"not really a png").unwrap();
        let client = CountingAnnotator(AtomicU32::new(0));
        let ann = annotate(&path, &client, &RetryPolicy::default()).unwrap();
        assert_eq!(ann.intention, "x");
        assert_eq!(ann.description, "y");
        assert_eq!(client.0.load(Ordering::SeqCst), 1);
    }

    struct FencedThenClean(AtomicU32);

    impl AnnotationClient for FencedThenClean {
        fn annotate(&self, _screenshot: &[u8]) -> Result<String, ClientError> {
            if self.0.fetch_add(1, Ordering::SeqCst) == 0 {
                Ok("```json\n{}\n```".to_string())
            } else {
                Ok(r#"{"intention": "x", "description": "y"}"#.to_string())
            }
        }
    }

    #[test]
    fn schema_violations_are_retried() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("shot.png");
        std::fs::write(&path, b"png").unwrap();
        let client = FencedThenClean(AtomicU32::new(0));
        let retry = RetryPolicy {
            max_attempts: 2,
            base_delay_ms: 0,
            max_delay_ms: 0,
        };
        let ann = annotate(&path, &client, &retry).unwrap();
        assert_eq!(ann.intention, "x");
        assert_eq!(client.0.load(Ordering::SeqCst), 2);
    }

    #[test]
    fn svg_renderer_measures_document_height() {
        let html = "<html><head><style>body { display: flex; width: 100px; \
                    height: 80px }</style></head><body></body></html>";
        let r = SvgRenderer::default();
        let out = r.render(html, (100.0, 80.0), Path::new(".")).unwrap();
        assert_eq!(out.file_name, "screenshot.svg");
        assert_eq!(out.h_hat, 80.0);
        assert!(String::from_utf8(out.bytes).unwrap().starts_with("<svg"));
    }

    #[test]
    fn svg_renderer_rejects_unparseable_source() {
        let r = SvgRenderer::default();
        let err = r
            .render("<html><body>", (100.0, 80.0), Path::new("."))
            .unwrap_err();
        assert!(matches!(err, ClientError::InvalidInput(_)));
    }
}
