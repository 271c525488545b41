//! Construction of the three training task shapes from dataset records,
//! plus the flat-coordinate ablation format and a seeded corpus splitter.
//!
//! I2D pairs design metadata with the document source; DD pairs a
//! screenshot reference with it; E2D pairs the document's own elements,
//! texts shuffled so their order leaks no layout information, with the
//! asset-substituted source.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::elements::extract_elements;
use crate::geometry::Rect;
use crate::parse::{parse_document, ParseError};
use crate::pipeline::{DatasetRecord, RecordStatus};
use crate::scalar::Scalar;
use crate::serialize::serialize_document;
use crate::validate::{substitute_assets, SubstituteError};
use crate::LaidDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TaskKind {
    #[serde(rename = "I2D")]
    I2d,
    #[serde(rename = "DD")]
    Dd,
    #[serde(rename = "E2D")]
    E2d,
}

impl std::str::FromStr for TaskKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "i2d" => Ok(TaskKind::I2d),
            "dd" => Ok(TaskKind::Dd),
            "e2d" => Ok(TaskKind::E2d),
            other => Err(format!("unknown task kind {other:?}, expected i2d, dd, or e2d")),
        }
    }
}

/// One input/output training pair. The input is task-shaped JSON; the
/// output is document source text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskPair {
    pub kind: TaskKind,
    pub input: Value,
    pub output: String,
    pub record_id: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screenshot_path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TaskError {
    #[error("record {id} has not been validated as kept")]
    UnvalidatedRecord { id: String },
    #[error("record {id} has no screenshot to derender")]
    MissingScreenshot { id: String },
    #[error("record html does not parse: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Substitute(#[from] SubstituteError),
}

/// Mixes a run seed with a record id into one 64-bit stream seed (FNV-1a).
pub fn derive_seed(seed: u64, record_id: &str) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for b in seed.to_le_bytes().iter().chain(record_id.as_bytes()) {
        h ^= u64::from(*b);
        h = h.wrapping_mul(PRIME);
    }
    h
}

/// Builds one task pair from a kept record. E2D shuffles the text list
/// with a stream seeded by (seed, record id), so the same seed always
/// reproduces the same permutation.
pub fn build_task(
    record: &DatasetRecord,
    kind: TaskKind,
    seed: u64,
) -> Result<TaskPair, TaskError> {
    if record.status != RecordStatus::Kept {
        return Err(TaskError::UnvalidatedRecord {
            id: record.id.clone(),
        });
    }
    let mut pair = TaskPair {
        kind,
        input: Value::Null,
        output: record.html.clone(),
        record_id: record.id.clone(),
        seed,
        screenshot_path: None,
    };
    match kind {
        TaskKind::I2d => {
            pair.input = json!({
                "width": record.width,
                "height": record.height,
                "category": record.category,
                "styles": record.styles,
                "intention": record.intention,
            });
        }
        TaskKind::Dd => {
            let Some(path) = record.screenshot_path.clone() else {
                return Err(TaskError::MissingScreenshot {
                    id: record.id.clone(),
                });
            };
            pair.input = json!({
                "width": record.width,
                "height": record.height,
                "screenshot": "<image>",
            });
            pair.screenshot_path = Some(path);
        }
        TaskKind::E2d => {
            let ast = parse_document(&record.html)?;
            let elements = extract_elements(&ast);
            let mut texts = elements.texts;
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &record.id));
            texts.shuffle(&mut rng);
            let images: serde_json::Map<String, Value> = (0..elements.images.len())
                .map(|k| (format!("image_{k}"), Value::from("<image>")))
                .collect();
            pair.input = json!({
                "width": record.width,
                "height": record.height,
                "texts": texts,
                "images": images,
            });
            let asset_ids: Vec<usize> = if record.assets.len() == elements.images.len() {
                record.assets.iter().map(|a| a.index).collect()
            } else {
                (0..elements.images.len()).collect()
            };
            let (substituted, _names) = substitute_assets(&ast, &asset_ids)?;
            pair.output = serialize_document(&substituted);
        }
    }
    Ok(pair)
}

/// Serializes task pairs as JSONL, one pair per line. Output is
/// byte-deterministic for the same pairs.
pub fn task_pairs_to_jsonl(pairs: &[TaskPair]) -> String {
    let mut out = String::new();
    for pair in pairs {
        out.push_str(&serde_json::to_string(pair).expect("task pairs serialize"));
        out.push('\n');
    }
    out
}

/// One leaf of the flat-coordinate representation. Coordinates are
/// absolute border-box rectangles on the canvas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FlatElement<S> {
    Text {
        content: String,
        left: S,
        top: S,
        width: S,
        height: S,
        font_size: S,
        color: String,
    },
    Image {
        asset: String,
        left: S,
        top: S,
        width: S,
        height: S,
    },
}

impl<S: Scalar> FlatElement<S> {
    pub fn rect(&self) -> Rect<S> {
        match *self {
            FlatElement::Text {
                left,
                top,
                width,
                height,
                ..
            }
            | FlatElement::Image {
                left,
                top,
                width,
                height,
                ..
            } => Rect::new(left, top, width, height),
        }
    }
}

/// A structure-free document: canvas plus absolutely positioned leaves in
/// document order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatLayout<S> {
    pub canvas: (S, S),
    pub elements: Vec<FlatElement<S>>,
}

/// Flattens a laid-out document: one element per content leaf, containers
/// dropped, geometry taken from border boxes.
pub fn to_flat<S: Scalar>(doc: &LaidDocument<S>) -> FlatLayout<S> {
    let nodes = doc.ast.nodes();
    let mut elements = Vec::new();
    for b in doc.tree.leaf_boxes() {
        let r = b.border_box;
        match b.tag.as_str() {
            "p" => {
                let style = &doc.styles.styles[b.node_index];
                elements.push(FlatElement::Text {
                    content: nodes[b.node_index]
                        .node
                        .text
                        .clone()
                        .unwrap_or_default(),
                    left: r.x,
                    top: r.y,
                    width: r.width,
                    height: r.height,
                    font_size: style.font_size,
                    color: style.color.to_hex(),
                });
            }
            "img" => {
                elements.push(FlatElement::Image {
                    asset: nodes[b.node_index]
                        .node
                        .attr("src")
                        .unwrap_or_default()
                        .to_string(),
                    left: r.x,
                    top: r.y,
                    width: r.width,
                    height: r.height,
                });
            }
            _ => {}
        }
    }
    FlatLayout {
        canvas: doc.tree.viewport,
        elements,
    }
}

/// Rendered height of a flat layout: the canvas height, or lower element
/// bottoms never shrink it, only overflow past the canvas grows it.
pub fn flat_height<S: Scalar>(flat: &FlatLayout<S>) -> S {
    flat.elements
        .iter()
        .map(|e| e.rect().bottom())
        .fold(flat.canvas.1, |acc, b| if b > acc { b } else { acc })
}

/// A seeded corpus split. Validation and test each take a tenth; the rest
/// trains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splits {
    pub train: Vec<String>,
    pub val: Vec<String>,
    pub test: Vec<String>,
}

pub fn split_ids(ids: &[String], seed: u64) -> Splits {
    let mut shuffled: Vec<String> = ids.to_vec();
    shuffled.sort();
    shuffled.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    shuffled.shuffle(&mut rng);
    let n = shuffled.len();
    let n_val = n / 10;
    let n_test = n / 10;
    let val = shuffled[..n_val].to_vec();
    let test = shuffled[n_val..n_val + n_test].to_vec();
    let train = shuffled[n_val + n_test..].to_vec();
    Splits { train, val, test }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::AssetRef;
    use crate::text::FontMetricModel;

    fn record() -> DatasetRecord {
        let html = "<html><head><style>\
            body { display: flex; flex-direction: column; width: 330px; height: 207px }\
            p { font-size: 10px }\
            </style></head><body>\
            <p>alpha beta</p>\
            <img src=\"https://picsum.photos/40/20\" alt=\"photo one\">\
            <p>gamma delta</p>\
            <img src=\"https://picsum.photos/30/10\" alt=\"photo two\">\
            </body></html>"
            .to_string();
        DatasetRecord {
            id: "rec_0042".into(),
            width: 330,
            height: 207,
            category: "planner".into(),
            styles: vec!["natural".into()],
            intention: "outline a course".into(),
            description: "a small planner".into(),
            html,
            assets: vec![
                AssetRef {
                    index: 0,
                    width: 40,
                    height: 20,
                    alt: "photo one".into(),
                    path: "image_0_40x20.png".into(),
                },
                AssetRef {
                    index: 1,
                    width: 30,
                    height: 10,
                    alt: "photo two".into(),
                    path: "image_1_30x10.png".into(),
                },
            ],
            screenshot_path: Some("screenshot.svg".into()),
            h_hat: Some(207.0),
            status: RecordStatus::Kept,
        }
    }

    #[test]
    fn i2d_input_carries_exactly_the_metadata_keys() {
        let pair = build_task(&record(), TaskKind::I2d, 7).unwrap();
        let obj = pair.input.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(keys, ["category", "height", "intention", "styles", "width"]);
        assert_eq!(obj["width"], 330);
        assert_eq!(obj["category"], "planner");
        assert!(pair.output.contains("picsum.photos"));
        assert!(pair.screenshot_path.is_none());
    }

    #[test]
    fn dd_input_references_the_screenshot() {
        let pair = build_task(&record(), TaskKind::Dd, 7).unwrap();
        let obj = pair.input.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(keys, ["height", "screenshot", "width"]);
        assert_eq!(obj["screenshot"], "<image>");
        assert_eq!(pair.screenshot_path.as_deref(), Some("screenshot.svg"));
    }

    #[test]
    fn dd_without_screenshot_is_an_error() {
        let mut r = record();
        r.screenshot_path = None;
        assert!(matches!(
            build_task(&r, TaskKind::Dd, 7),
            Err(TaskError::MissingScreenshot { .. })
        ));
    }

    #[test]
    fn unkept_records_are_rejected() {
        let mut r = record();
        r.status = RecordStatus::Rendered;
        assert!(matches!(
            build_task(&r, TaskKind::I2d, 7),
            Err(TaskError::UnvalidatedRecord { .. })
        ));
    }

    #[test]
    fn e2d_shuffles_texts_and_substitutes_assets() {
        let pair = build_task(&record(), TaskKind::E2d, 7).unwrap();
        let obj = pair.input.as_object().unwrap();
        let texts: Vec<&str> = obj["texts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap())
            .collect();
        let mut sorted = texts.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, ["alpha beta", "gamma delta"]);
        let images = obj["images"].as_object().unwrap();
        assert_eq!(images.len(), 2);
        assert_eq!(images["image_0"], "<image>");
        assert_eq!(images["image_1"], "<image>");
        assert!(pair.output.contains("image_0_40x20.png"));
        assert!(pair.output.contains("image_1_30x10.png"));
        assert!(!pair.output.contains("picsum.photos"));
    }

    #[test]
    fn e2d_texts_stay_a_permutation_of_the_output_document() {
        let pair = build_task(&record(), TaskKind::E2d, 123).unwrap();
        let output_ast = parse_document(&pair.output).unwrap();
        let mut output_texts = extract_elements(&output_ast).texts;
        let mut input_texts: Vec<String> = pair.input["texts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap().to_string())
            .collect();
        output_texts.sort();
        input_texts.sort();
        assert_eq!(input_texts, output_texts);
    }

    #[test]
    fn same_seed_reproduces_the_same_pair() {
        let a = build_task(&record(), TaskKind::E2d, 99).unwrap();
        let b = build_task(&record(), TaskKind::E2d, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn different_records_shuffle_independently_under_one_seed() {
        assert_ne!(derive_seed(7, "rec_0001"), derive_seed(7, "rec_0002"));
        assert_ne!(derive_seed(7, "rec_0001"), derive_seed(8, "rec_0001"));
    }

    #[test]
    fn jsonl_lines_parse_back_to_the_pairs() {
        let pairs = vec![
            build_task(&record(), TaskKind::I2d, 7).unwrap(),
            build_task(&record(), TaskKind::E2d, 7).unwrap(),
        ];
        let jsonl = task_pairs_to_jsonl(&pairs);
        let lines: Vec<&str> = jsonl.lines().collect();
        assert_eq!(lines.len(), 2);
        let back: TaskPair = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(back, pairs[0]);
        assert!(lines[0].contains("\"kind\":\"I2D\""));
        assert!(lines[1].contains("\"kind\":\"E2D\""));
    }

    #[test]
    fn flat_layout_keeps_leaves_and_drops_containers() {
        let html = "<html><head><style>\
            body { display: flex; flex-direction: column; width: 100px; height: 100px }\
            div { display: flex }\
            p { font-size: 10px; color: #336699 }\
            img { align-self: flex-start }\
            </style></head><body>\
            <div><p>alpha beta</p></div>\
            <img src=\"https://picsum.photos/40/20\" alt=\"a\">\
            </body></html>";
        let doc = crate::lay_out_source(html, (100.0, 100.0), &FontMetricModel::default())
            .unwrap();
        let flat = to_flat(&doc);
        assert_eq!(flat.canvas, (100.0, 100.0));
        assert_eq!(flat.elements.len(), 2);
        match &flat.elements[0] {
            FlatElement::Text {
                content,
                font_size,
                color,
                ..
            } => {
                assert_eq!(content, "alpha beta");
                assert_eq!(*font_size, 10.0);
                assert_eq!(color, "#336699");
            }
            other => panic!("expected text first, got {other:?}"),
        }
        match &flat.elements[1] {
            FlatElement::Image { asset, width, .. } => {
                assert_eq!(asset, "https://picsum.photos/40/20");
                assert_eq!(*width, 40.0);
            }
            other => panic!("expected image second, got {other:?}"),
        }
    }

    #[test]
    fn flat_height_is_canvas_height_unless_elements_overflow() {
        let contained = FlatLayout {
            canvas: (100.0, 100.0),
            elements: vec![FlatElement::Image {
                asset: "image_0_10x10.png".into(),
                left: 0.0,
                top: 0.0,
                width: 10.0,
                height: 10.0,
            }],
        };
        assert_eq!(flat_height(&contained), 100.0);
        let overflowing = FlatLayout {
            canvas: (100.0, 100.0),
            elements: vec![FlatElement::Image {
                asset: "image_0_10x10.png".into(),
                left: 0.0,
                top: 95.0,
                width: 10.0,
                height: 10.0,
            }],
        };
        assert_eq!(flat_height(&overflowing), 105.0);
    }

    #[test]
    fn splits_partition_ids_deterministically() {
        let ids: Vec<String> = (0..50).map(|i| format!("rec_{i:04}")).collect();
        let s1 = split_ids(&ids, 7);
        let s2 = split_ids(&ids, 7);
        assert_eq!(s1, s2);
        assert_eq!(s1.val.len(), 5);
        assert_eq!(s1.test.len(), 5);
        assert_eq!(s1.train.len(), 40);
        let mut all: Vec<String> = s1
            .train
            .iter()
            .chain(&s1.val)
            .chain(&s1.test)
            .cloned()
            .collect();
        all.sort();
        let mut expected = ids.clone();
        expected.sort();
        assert_eq!(all, expected);
        let s3 = split_ids(&ids, 8);
        assert_ne!(s1, s3);
    }

    #[test]
    fn split_is_independent_of_input_order() {
        let ids: Vec<String> = (0..30).map(|i| format!("rec_{i:04}")).collect();
        let mut reversed = ids.clone();
        reversed.reverse();
        assert_eq!(split_ids(&ids, 7), split_ids(&reversed, 7));
    }
}
