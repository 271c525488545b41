//! Dataset record types: the metadata a synthesis run starts from, the
//! record it produces, and the status lattice a record moves through.

use serde::{Deserialize, Serialize};

use crate::validate::ViolationCode;

/// One input row of a synthesis manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordMeta {
    pub id: String,
    pub width: u32,
    pub height: u32,
    pub category: String,
    pub styles: Vec<String>,
    pub intention: String,
    #[serde(default)]
    pub description: String,
}

/// One synthesized image asset of a record. `path` is relative to the
/// record directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetRef {
    pub index: usize,
    pub width: u32,
    pub height: u32,
    pub alt: String,
    pub path: String,
}

/// Pipeline stage whose external call failed for good.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageCode {
    Annotation,
    Codegen,
    Assets,
    Render,
}

/// Why a record was excluded: a cleaning or dialect violation, or a
/// pipeline stage that failed after retries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExclusionCode {
    Rule(ViolationCode),
    Stage(StageCode),
}

impl std::fmt::Display for ExclusionCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = serde_json::to_string(self).map_err(|_| std::fmt::Error)?;
        f.write_str(label.trim_matches('"'))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordStatus {
    Pending,
    Generated,
    Rendered,
    Kept,
    Excluded { codes: Vec<ExclusionCode> },
}

impl RecordStatus {
    /// Terminal records are final; a resumed run does not touch them.
    pub fn is_terminal(&self) -> bool {
        matches!(self, RecordStatus::Kept | RecordStatus::Excluded { .. })
    }
}

/// One fully tracked dataset record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub id: String,
    pub width: u32,
    pub height: u32,
    pub category: String,
    pub styles: Vec<String>,
    pub intention: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub html: String,
    #[serde(default)]
    pub assets: Vec<AssetRef>,
    #[serde(default)]
    pub screenshot_path: Option<String>,
    #[serde(default)]
    pub h_hat: Option<f64>,
    pub status: RecordStatus,
}

impl DatasetRecord {
    pub fn from_meta(meta: &RecordMeta) -> Self {
        Self {
            id: meta.id.clone(),
            width: meta.width,
            height: meta.height,
            category: meta.category.clone(),
            styles: meta.styles.clone(),
            intention: meta.intention.clone(),
            description: meta.description.clone(),
            html: String::new(),
            assets: Vec::new(),
            screenshot_path: None,
            h_hat: None,
            status: RecordStatus::Pending,
        }
    }
}
