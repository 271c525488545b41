//! Extraction of the visible content elements of a document: paragraph
//! texts and image references, both in document order.

use serde::{Deserialize, Serialize};

use crate::dom::DocumentAst;
use crate::layout::intrinsic_image_size;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageElement {
    /// Zero-based position among the document's images.
    pub index: usize,
    pub width: f64,
    pub height: f64,
    pub alt: String,
    /// The img src as written: a placeholder URL or a local asset name.
    pub asset: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ElementSet {
    pub texts: Vec<String>,
    pub images: Vec<ImageElement>,
}

/// Collects every p text and every img (with its declared or placeholder
/// dimensions) in document order.
pub fn extract_elements(ast: &DocumentAst) -> ElementSet {
    let mut set = ElementSet::default();
    for node_ref in ast.nodes() {
        match node_ref.node.tag.as_str() {
            "p" => set
                .texts
                .push(node_ref.node.text.clone().unwrap_or_default()),
            "img" => {
                let (width, height) = intrinsic_image_size(node_ref.node);
                set.images.push(ImageElement {
                    index: set.images.len(),
                    width,
                    height,
                    alt: node_ref.node.attr("alt").unwrap_or_default().to_string(),
                    asset: node_ref.node.attr("src").unwrap_or_default().to_string(),
                });
            }
            _ => {}
        }
    }
    set
}
