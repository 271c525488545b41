//! Deterministic stand-ins for the external services, plus generators for
//! synthetic run manifests and a labeled cleaning corpus. Everything here
//! is a pure function of its seeds, so two runs over the same manifest
//! produce byte-identical documents and images.

use std::collections::HashSet;
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pipeline::client::{AnnotationClient, ClientError, CodegenClient, ImagegenClient};
use crate::pipeline::record::RecordMeta;
use crate::task::derive_seed;
use crate::validate::ViolationCode;

const CATEGORIES: &[&str] = &[
    "planner", "resume", "menu", "report", "letter", "presentation", "poster",
    "newsletter", "invitation", "certificate", "schedule", "brochure",
];

const STYLE_POOL: &[&str] = &[
    "natural", "minimal", "modern", "classic", "elegant", "playful",
    "corporate", "vintage",
];

const TOPICS: &[&str] = &[
    "a weekend market", "quarterly planning", "a garden workshop",
    "team onboarding", "a recital evening", "seasonal recipes",
    "a travel itinerary", "studio photography", "volunteer signups",
    "a product launch",
];

const CANVASES: &[(u32, u32)] = &[
    (480, 640),
    (640, 480),
    (600, 800),
    (800, 600),
    (540, 540),
];

const WORDS: &[&str] = &[
    "harvest", "meridian", "atlas", "juniper", "lattice", "ember", "cove",
    "prairie", "sonata", "garnet", "drift", "arbor", "quill", "vesper",
    "marble", "linen", "orchard", "beacon", "summit", "willow",
];

const PALETTE: &[(&str, &str, &str)] = &[
    ("#f8f4ec", "#1a365d", "#222222"),
    ("#eef3f8", "#7c2d12", "#1f2430"),
    ("#fdf6f0", "#14532d", "#2b2b2b"),
    ("#f4f4f5", "#581c87", "#18181b"),
];

fn pick<'a, T: Copy>(rng: &mut ChaCha8Rng, pool: &'a [T]) -> T {
    *pool.choose(rng).expect("pool is never empty")
}

fn sentence(rng: &mut ChaCha8Rng, words: usize) -> String {
    let mut parts = Vec::with_capacity(words);
    for _ in 0..words {
        parts.push(pick(rng, WORDS));
    }
    let mut s = parts.join(" ");
    if let Some(first) = s.get_mut(0..1) {
        first.make_ascii_uppercase();
    }
    s.push('.');
    s
}

/// Builds a deterministic run manifest. Each record's metadata depends
/// only on the seed and its own id, so prefixes agree across lengths.
pub fn synthetic_manifest(n: usize, seed: u64) -> Vec<RecordMeta> {
    (0..n)
        .map(|i| {
            let id = format!("rec_{i:04}");
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &id));
            let category = pick(&mut rng, CATEGORIES).to_string();
            let n_styles = rng.gen_range(1..=3);
            let mut styles: Vec<String> = STYLE_POOL
                .choose_multiple(&mut rng, n_styles)
                .map(|s| s.to_string())
                .collect();
            styles.sort();
            let (width, height) = pick(&mut rng, CANVASES);
            let intention = format!(
                "A {} {} about {}",
                styles[0],
                category,
                pick(&mut rng, TOPICS)
            );
            RecordMeta {
                id,
                width,
                height,
                category,
                styles,
                intention,
                description: String::new(),
            }
        })
        .collect()
}

struct DocParams {
    width: u32,
    height: u32,
    background: &'static str,
    title_color: &'static str,
    text_color: &'static str,
    title: String,
    paragraphs: Vec<String>,
    image: Option<(u32, u32, String)>,
}

impl DocParams {
    fn new(meta: &RecordMeta, rng: &mut ChaCha8Rng) -> Self {
        let (background, title_color, text_color) = pick(rng, PALETTE);
        let n_paragraphs = rng.gen_range(1..=3);
        let paragraphs = (0..n_paragraphs)
            .map(|_| {
                let words = rng.gen_range(4..=9);
                sentence(rng, words)
            })
            .collect();
        let image = if rng.gen_bool(0.7) {
            let iw = rng.gen_range(12..=20) * 10;
            let ih = rng.gen_range(8..=12) * 10;
            Some((iw, ih, sentence(rng, 3)))
        } else {
            None
        };
        Self {
            width: meta.width,
            height: meta.height,
            background,
            title_color,
            text_color,
            title: format!("{} {}", capitalize(&meta.category), pick(rng, WORDS)),
            paragraphs,
            image,
        }
    }

    fn render(&self) -> String {
        let mut body = String::new();
        body.push_str(&format!("<p class=\"title\">{}</p>\n", self.title));
        let mut paragraphs: &[String] = &self.paragraphs;
        if let Some((iw, ih, alt)) = &self.image {
            let caption = paragraphs.last().map(String::as_str).unwrap_or("Notes.");
            body.push_str(&format!(
                "<div class=\"hero\"><img src=\"https://picsum.photos/{iw}/{ih}\" \
                 alt=\"{alt}\"><p>{caption}</p></div>\n",
            ));
            paragraphs = &paragraphs[..paragraphs.len().saturating_sub(1)];
        }
        for p in paragraphs {
            body.push_str(&format!("<p>{p}</p>\n"));
        }
        format!(
            "<!DOCTYPE html>\n<html>\n<head>\n<style>\n\
             body {{ display: flex; flex-direction: column; width: {w}px; \
             height: {h}px; padding: 16px; gap: 12px; \
             background-color: {bg}; }}\n\
             div {{ display: flex; }}\n\
             .hero {{ flex-direction: row; gap: 10px; }}\n\
             img {{ align-self: flex-start; }}\n\
             p {{ margin: 0; font-size: 14px; color: {fg}; }}\n\
             .title {{ font-size: 24px; color: {tc}; }}\n\
             </style>\n</head>\n<body>\n{body}</body>\n</html>\n",
            w = self.width,
            h = self.height,
            bg = self.background,
            fg = self.text_color,
            tc = self.title_color,
        )
    }
}

fn capitalize(s: &str) -> String {
    let mut out = s.to_string();
    if let Some(first) = out.get_mut(0..1) {
        first.make_ascii_uppercase();
    }
    out
}

fn clean_doc(meta: &RecordMeta, rng: &mut ChaCha8Rng) -> String {
    DocParams::new(meta, rng).render()
}

/// The body resolves 40px shorter than the declared canvas.
fn doc_with_r1(meta: &RecordMeta, rng: &mut ChaCha8Rng) -> String {
    let mut shrunk = meta.clone();
    shrunk.height = meta.height.saturating_sub(40);
    DocParams::new(&shrunk, rng).render()
}

/// One image carries an empty alt text.
fn doc_with_r2(meta: &RecordMeta, rng: &mut ChaCha8Rng) -> String {
    let mut params = DocParams::new(meta, rng);
    let iw = rng.gen_range(12..=20) * 10;
    let ih = rng.gen_range(8..=12) * 10;
    params.image = Some((iw, ih, String::new()));
    params.render()
}

/// One childless auto-height container collapses to zero height.
fn doc_with_r3(meta: &RecordMeta, rng: &mut ChaCha8Rng) -> String {
    let mut params = DocParams::new(meta, rng);
    params.image = None;
    let doc = params.render();
    doc.replace("</body>", "<div class=\"spacer\"></div>\n</body>")
}

/// A single unshrinkable child extends past the declared height.
fn doc_with_r4(meta: &RecordMeta, rng: &mut ChaCha8Rng) -> String {
    let (background, _, text_color) = pick(rng, PALETTE);
    let text = sentence(rng, 6);
    format!(
        "<!DOCTYPE html>\n<html>\n<head>\n<style>\n\
         body {{ display: flex; flex-direction: column; width: {w}px; \
         height: {h}px; padding: 16px; background-color: {bg}; }}\n\
         p {{ margin: 0; font-size: 14px; color: {fg}; height: {th}px; \
         flex-shrink: 0; }}\n\
         </style>\n</head>\n<body>\n<p>{text}</p>\n</body>\n</html>\n",
        w = meta.width,
        h = meta.height,
        th = meta.height,
        bg = background,
        fg = text_color,
    )
}

/// Truncated source that fails to parse at all.
fn truncated_doc(meta: &RecordMeta) -> String {
    format!(
        "<!DOCTYPE html>\n<html>\n<head>\n<style>\nbody {{ display: flex; \
         width: {}px; height: {}px",
        meta.width, meta.height
    )
}

/// Deterministic source generator. Roughly 60% of ids come out clean;
/// the rest are split across the four cleaning rules and a parse failure.
#[derive(Debug, Clone)]
pub struct MockCodegen {
    pub seed: u64,
}

/// Which flaw, if any, [`MockCodegen`] plants for a given record id.
pub fn planted_flaw(seed: u64, id: &str) -> Option<ViolationCode> {
    match derive_seed(seed, id) % 10 {
        0 => Some(ViolationCode::R1),
        1 => Some(ViolationCode::R2),
        2 => Some(ViolationCode::R3),
        3 => Some(ViolationCode::R4),
        4 => Some(ViolationCode::D0),
        _ => None,
    }
}

impl CodegenClient for MockCodegen {
    fn generate(&self, meta: &RecordMeta) -> Result<String, ClientError> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed ^ 0x9e3779b9, &meta.id));
        Ok(match planted_flaw(self.seed, &meta.id) {
            Some(ViolationCode::R1) => doc_with_r1(meta, &mut rng),
            Some(ViolationCode::R2) => doc_with_r2(meta, &mut rng),
            Some(ViolationCode::R3) => doc_with_r3(meta, &mut rng),
            Some(ViolationCode::R4) => doc_with_r4(meta, &mut rng),
            Some(_) => truncated_doc(meta),
            None => clean_doc(meta, &mut rng),
        })
    }
}

/// Wraps a code generator so the first call for each id fails with a
/// retryable error. Under a retry budget of two or more, runs through
/// this wrapper match the inner generator exactly.
pub struct FlakyCodegen<C> {
    pub inner: C,
    seen: Mutex<HashSet<String>>,
}

impl<C> FlakyCodegen<C> {
    pub fn new(inner: C) -> Self {
        Self {
            inner,
            seen: Mutex::new(HashSet::new()),
        }
    }
}

impl<C: CodegenClient> CodegenClient for FlakyCodegen<C> {
    fn generate(&self, meta: &RecordMeta) -> Result<String, ClientError> {
        let mut seen = self.seen.lock().expect("mutex is never poisoned");
        if seen.insert(meta.id.clone()) {
            return Err(ClientError::Unavailable(format!(
                "simulated outage for {}",
                meta.id
            )));
        }
        drop(seen);
        self.inner.generate(meta)
    }
}

/// Deterministic annotator: answers with strict JSON keyed off a hash of
/// the screenshot bytes.
#[derive(Debug, Clone, Default)]
pub struct MockAnnotation;

fn fnv64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl AnnotationClient for MockAnnotation {
    fn annotate(&self, screenshot: &[u8]) -> Result<String, ClientError> {
        let h = fnv64(screenshot);
        Ok(format!(
            "{{\"intention\": \"present document {h:016x} clearly\", \
             \"description\": \"a single page with a title block and body \
             content, variant {h:016x}\"}}"
        ))
    }
}

/// Deterministic image generator: a solid-color PNG at the exact pixel
/// size, color derived from the alt text and the dimensions.
#[derive(Debug, Clone, Default)]
pub struct MockImagegen;

impl ImagegenClient for MockImagegen {
    fn generate(&self, alt: &str, width: u32, height: u32) -> Result<Vec<u8>, ClientError> {
        let w = width.max(1);
        let h = height.max(1);
        let hash = fnv64(format!("{alt}\u{1f}{w}x{h}").as_bytes());
        let rgb = [
            (hash >> 16) as u8,
            (hash >> 8) as u8,
            hash as u8,
        ];
        let mut bytes = Vec::new();
        {
            let mut encoder = png::Encoder::new(&mut bytes, w, h);
            encoder.set_color(png::ColorType::Rgb);
            encoder.set_depth(png::BitDepth::Eight);
            let mut writer = encoder
                .write_header()
                .map_err(|e| ClientError::Io(e.to_string()))?;
            let row: Vec<u8> = rgb.iter().copied().cycle().take(w as usize * 3).collect();
            let image: Vec<u8> = row
                .iter()
                .copied()
                .cycle()
                .take(w as usize * h as usize * 3)
                .collect();
            writer
                .write_image_data(&image)
                .map_err(|e| ClientError::Io(e.to_string()))?;
        }
        Ok(bytes)
    }
}

/// One document with its declared canvas and expected cleaning label.
/// `None` marks a clean document.
#[derive(Debug, Clone)]
pub struct LabeledDoc {
    pub html: String,
    pub width: u32,
    pub height: u32,
    pub expected: Option<ViolationCode>,
}

/// A labeled corpus for exercising the cleaning rules: ten documents per
/// rule, each violating exactly that one rule, plus twenty clean ones.
pub fn seeded_violation_corpus(seed: u64) -> Vec<LabeledDoc> {
    let mut docs = Vec::with_capacity(60);
    let mut idx = 0usize;
    let next_meta = |idx: usize| -> (RecordMeta, ChaCha8Rng) {
        let id = format!("corpus_{idx:02}");
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &id));
        let (width, height) = pick(&mut rng, CANVASES);
        let meta = RecordMeta {
            id,
            width,
            height,
            category: pick(&mut rng, CATEGORIES).to_string(),
            styles: vec![pick(&mut rng, STYLE_POOL).to_string()],
            intention: String::new(),
            description: String::new(),
        };
        (meta, rng)
    };
    for code in [
        ViolationCode::R1,
        ViolationCode::R2,
        ViolationCode::R3,
        ViolationCode::R4,
    ] {
        for _ in 0..10 {
            let (meta, mut rng) = next_meta(idx);
            idx += 1;
            let html = match code {
                ViolationCode::R1 => doc_with_r1(&meta, &mut rng),
                ViolationCode::R2 => doc_with_r2(&meta, &mut rng),
                ViolationCode::R3 => doc_with_r3(&meta, &mut rng),
                _ => doc_with_r4(&meta, &mut rng),
            };
            docs.push(LabeledDoc {
                html,
                width: meta.width,
                height: meta.height,
                expected: Some(code),
            });
        }
    }
    for _ in 0..20 {
        let (meta, mut rng) = next_meta(idx);
        idx += 1;
        docs.push(LabeledDoc {
            html: clean_doc(&meta, &mut rng),
            width: meta.width,
            height: meta.height,
            expected: None,
        });
    }
    docs
}
