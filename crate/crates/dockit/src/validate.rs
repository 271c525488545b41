//! Document validation: placeholder URL handling, asset substitution, the
//! four cleaning rules, and dialect conformance checks.
//!
//! Cleaning rules (R-codes) look at measured geometry and placeholder
//! integrity; any hit excludes the document. Dialect checks (D-codes) flag
//! markup and style outside the restricted subset; on their own they
//! downgrade the verdict to a dialect warning, and exclude only in strict
//! mode. A document that does not parse at all is reported as D0 and always
//! excluded.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dom::{DocumentAst, Node};
use crate::layout::{layout, BoxTree};
use crate::scalar::Scalar;
use crate::style::{resolve_styles, Display, FlexWrap, Position, ResolvedStyles, StyleEnv};
use crate::text::FontMetricModel;

/// Parses `https://picsum.photos/W/H` into `(W, H)`.
///
/// Anything else, including already-substituted local asset paths such as
/// `image_6_200x200.png`, returns `None`.
pub fn parse_placeholder_url(url: &str) -> Option<(u32, u32)> {
    let rest = url.strip_prefix("https://picsum.photos/")?;
    let mut parts = rest.split('/');
    let w: u32 = parts.next()?.parse().ok()?;
    let h: u32 = parts.next()?.parse().ok()?;
    if parts.next().is_some() || w == 0 || h == 0 {
        return None;
    }
    Some((w, h))
}

/// Parses a substituted local asset name `image_<k>_<W>x<H>.png` into
/// `(k, W, H)`.
pub fn parse_asset_name(name: &str) -> Option<(usize, u32, u32)> {
    let rest = name.strip_prefix("image_")?.strip_suffix(".png")?;
    let (k, dims) = rest.split_once('_')?;
    let (w, h) = dims.split_once('x')?;
    let k: usize = k.parse().ok()?;
    let w: u32 = w.parse().ok()?;
    let h: u32 = h.parse().ok()?;
    if w == 0 || h == 0 {
        return None;
    }
    Some((k, w, h))
}

/// Replaces the k-th img's placeholder src with a local asset name
/// `image_<id>_<W>x<H>.png`, one asset id per img in document order.
///
/// Dimensions come from the placeholder URL, falling back to the img's
/// width/height attributes. Alt text and all other markup stay untouched.
/// Returns the rewritten document and the generated asset names.
pub fn substitute_assets(
    ast: &DocumentAst,
    asset_ids: &[usize],
) -> Result<(DocumentAst, Vec<String>), SubstituteError> {
    let img_count = ast.nodes().iter().filter(|r| r.node.tag == "img").count();
    if img_count != asset_ids.len() {
        return Err(SubstituteError::AssetCountMismatch {
            imgs: img_count,
            assets: asset_ids.len(),
        });
    }
    let mut out = ast.clone();
    let mut names = Vec::with_capacity(asset_ids.len());
    let mut k = 0usize;
    rewrite_imgs(&mut out.root, asset_ids, &mut k, &mut names);
    Ok((out, names))
}

fn rewrite_imgs(node: &mut Node, ids: &[usize], k: &mut usize, names: &mut Vec<String>) {
    if node.tag == "img" {
        let dims = node
            .attr("src")
            .and_then(parse_placeholder_url)
            .or_else(|| {
                let w: u32 = node.attr("width")?.trim().parse().ok()?;
                let h: u32 = node.attr("height")?.trim().parse().ok()?;
                Some((w, h))
            })
            .unwrap_or((0, 0));
        let name = format!("image_{}_{}x{}.png", ids[*k], dims.0, dims.1);
        node.set_attr("src", &name);
        names.push(name);
        *k += 1;
    }
    for child in &mut node.children {
        rewrite_imgs(child, ids, k, names);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubstituteError {
    #[error("document has {imgs} img elements but {assets} assets were provided")]
    AssetCountMismatch { imgs: usize, assets: usize },
}

/// Final classification of a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Keep,
    DialectWarning,
    Exclude,
}

/// Violation codes: R-codes are the cleaning rules, D-codes dialect checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ViolationCode {
    /// Body's resolved size differs from the declared document size.
    R1,
    /// An img lacks a valid placeholder (or substituted asset) or alt text.
    R2,
    /// An element inside the body has zero height.
    R3,
    /// Content overflows beyond the declared document bounds.
    R4,
    /// The source does not parse.
    D0,
    /// A tag outside the dialect.
    D1,
    /// A script or link element is present.
    D2,
    /// Absolute or fixed positioning.
    D3,
    /// flex-wrap other than nowrap.
    D4,
    /// A grid smaller than 2 columns by 2 rows.
    D5,
    /// A body or div without display: flex or grid.
    D6,
    /// Text content outside a p element.
    D7,
    /// A background-image url.
    D8,
    /// Reversed flex direction or explicit item ordering.
    D9,
}

impl ViolationCode {
    /// True for the cleaning rules R1..R4, which always exclude.
    pub fn is_cleaning_rule(&self) -> bool {
        matches!(self, Self::R1 | Self::R2 | Self::R3 | Self::R4)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measured<S> {
    pub h_hat: S,
    pub width: S,
    pub height: S,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport<S> {
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
    pub measured: Measured<S>,
}

impl<S: Scalar> ValidationReport<S> {
    pub fn has_code(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

/// Which form of img src counts as valid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AssetStage {
    /// Before substitution: src must be a placeholder URL.
    #[default]
    Placeholder,
    /// After substitution: src must be a local `image_k_WxH.png` asset.
    Substituted,
}

#[derive(Debug, Clone)]
pub struct ValidateOptions<S> {
    /// Overflow tolerance in px for R4.
    pub tau: S,
    pub stage: AssetStage,
    /// Exclude on D-codes instead of downgrading to a warning.
    pub strict: bool,
    /// Also treat horizontal overflow as R4.
    pub check_horizontal: bool,
    /// When set and the stage is Substituted, asset files must exist here.
    pub asset_dir: Option<PathBuf>,
}

impl<S: Scalar> Default for ValidateOptions<S> {
    fn default() -> Self {
        Self {
            tau: S::zero(),
            stage: AssetStage::Placeholder,
            strict: false,
            check_horizontal: true,
            asset_dir: None,
        }
    }
}

const SIZE_EPS: f64 = 1e-6;
const GEOM_EPS: f64 = 1e-9;

const STRUCTURAL_TAGS: &[&str] = &["html", "head", "body", "style", "title", "meta"];
const CONTENT_TAGS: &[&str] = &["div", "img", "p"];

/// Validates a parsed, styled, laid-out document against its declared size.
pub fn validate<S: Scalar>(
    ast: &DocumentAst,
    styles: &ResolvedStyles<S>,
    tree: &BoxTree<S>,
    declared: (S, S),
    opts: &ValidateOptions<S>,
) -> ValidationReport<S> {
    let mut violations = Vec::new();
    let nodes = ast.nodes();
    let (dw, dh) = declared;

    // R1: the body must resolve to exactly the declared document size.
    if let Some(body) = tree.boxes.first() {
        let bb = &body.border_box;
        if (bb.width - dw).as_f64().abs() > SIZE_EPS || (bb.height - dh).as_f64().abs() > SIZE_EPS
        {
            violations.push(Violation {
                code: ViolationCode::R1,
                path: nodes[body.node_index].path.clone(),
                message: format!(
                    "body resolves to {}x{}, declared {}x{}",
                    bb.width, bb.height, dw, dh
                ),
            });
        }
    }

    // R2: every img needs a valid src for the current stage and alt text.
    for r in &nodes {
        if r.node.tag != "img" {
            continue;
        }
        let src = r.node.attr("src").unwrap_or("");
        let src_ok = match opts.stage {
            AssetStage::Placeholder => parse_placeholder_url(src).is_some(),
            AssetStage::Substituted => {
                parse_asset_name(src).is_some()
                    && opts
                        .asset_dir
                        .as_ref()
                        .map(|dir| dir.join(src).is_file())
                        .unwrap_or(true)
            }
        };
        if !src_ok {
            let expected = match opts.stage {
                AssetStage::Placeholder => "a placeholder URL",
                AssetStage::Substituted => "a substituted local asset",
            };
            violations.push(Violation {
                code: ViolationCode::R2,
                path: r.path.clone(),
                message: format!("img src {src:?} is not {expected}"),
            });
        }
        if r.node.attr("alt").map(str::trim).unwrap_or("").is_empty() {
            violations.push(Violation {
                code: ViolationCode::R2,
                path: r.path.clone(),
                message: "img alt text is missing or empty".to_string(),
            });
        }
    }

    // R3: no element inside the body may have zero height.
    for b in tree.boxes.iter().skip(1) {
        if b.border_box.height.as_f64() < GEOM_EPS {
            violations.push(Violation {
                code: ViolationCode::R3,
                path: nodes[b.node_index].path.clone(),
                message: "element has zero height".to_string(),
            });
        }
    }

    // R4: no border box may extend beyond the declared bounds.
    let v_limit = (dh + opts.tau).as_f64() + GEOM_EPS;
    let h_limit = (dw + opts.tau).as_f64() + GEOM_EPS;
    for b in &tree.boxes {
        let bottom = b.border_box.bottom().as_f64();
        let right = b.border_box.right().as_f64();
        if bottom > v_limit {
            violations.push(Violation {
                code: ViolationCode::R4,
                path: nodes[b.node_index].path.clone(),
                message: format!("bottom {} exceeds document height {}", b.border_box.bottom(), dh),
            });
        }
        if opts.check_horizontal && right > h_limit {
            violations.push(Violation {
                code: ViolationCode::R4,
                path: nodes[b.node_index].path.clone(),
                message: format!("right {} exceeds document width {}", b.border_box.right(), dw),
            });
        }
    }

    violations.extend(dialect_scan(ast, styles));

    let verdict = verdict_for(&violations, opts.strict);
    ValidationReport {
        verdict,
        violations,
        measured: Measured {
            h_hat: tree.document_height(),
            width: dw,
            height: dh,
        },
    }
}

/// Structural dialect checks alone, with no geometry involved. Useful as a
/// pre-render gate before spending work on asset synthesis.
pub fn dialect_scan<S: Scalar>(
    ast: &DocumentAst,
    styles: &ResolvedStyles<S>,
) -> Vec<Violation> {
    let mut violations = Vec::new();
    for r in &ast.nodes() {
        let tag = r.node.tag.as_str();
        let style = &styles.styles[r.index];
        let in_body = tag == "body" || r.ancestors.iter().any(|a| a.tag == "body");

        if tag == "script" || tag == "link" {
            violations.push(Violation {
                code: ViolationCode::D2,
                path: r.path.clone(),
                message: format!("{tag} element is not allowed"),
            });
        } else if !STRUCTURAL_TAGS.contains(&tag) && !CONTENT_TAGS.contains(&tag) {
            violations.push(Violation {
                code: ViolationCode::D1,
                path: r.path.clone(),
                message: format!("tag {tag:?} is outside the dialect"),
            });
        }

        if matches!(style.position, Position::Absolute | Position::Fixed) {
            violations.push(Violation {
                code: ViolationCode::D3,
                path: r.path.clone(),
                message: "absolute positioning is not allowed".to_string(),
            });
        }

        if style.display == Display::Flex && style.flex_wrap != FlexWrap::Nowrap {
            violations.push(Violation {
                code: ViolationCode::D4,
                path: r.path.clone(),
                message: "flex-wrap must be nowrap".to_string(),
            });
        }

        if style.display == Display::Grid {
            let ncols = style.grid_template_columns.len().max(1);
            let items = r.node.children.len();
            let nrows = style.grid_template_rows.len().max(items.div_ceil(ncols));
            if ncols < 2 || nrows < 2 {
                violations.push(Violation {
                    code: ViolationCode::D5,
                    path: r.path.clone(),
                    message: format!("grid is {ncols}x{nrows}, at least 2x2 required"),
                });
            }
        }

        if matches!(tag, "body" | "div")
            && !matches!(style.declared_display.as_deref(), Some("flex") | Some("grid"))
        {
            violations.push(Violation {
                code: ViolationCode::D6,
                path: r.path.clone(),
                message: format!("{tag} must declare display: flex or grid"),
            });
        }

        if in_body && tag != "p" && r.node.text.as_deref().map(str::trim).unwrap_or("") != "" {
            violations.push(Violation {
                code: ViolationCode::D7,
                path: r.path.clone(),
                message: format!("text content outside a p element (in {tag})"),
            });
        }

        if style.background_image.is_some() {
            violations.push(Violation {
                code: ViolationCode::D8,
                path: r.path.clone(),
                message: "background-image urls are not allowed".to_string(),
            });
        }

        if style.flex_direction.is_reverse() || style.order_set {
            violations.push(Violation {
                code: ViolationCode::D9,
                path: r.path.clone(),
                message: "reversed or reordered flex items are not allowed".to_string(),
            });
        }
    }
    violations
}

fn verdict_for(violations: &[Violation], strict: bool) -> Verdict {
    if violations.iter().any(|v| v.code.is_cleaning_rule() || v.code == ViolationCode::D0) {
        Verdict::Exclude
    } else if violations.is_empty() {
        Verdict::Keep
    } else if strict {
        Verdict::Exclude
    } else {
        Verdict::DialectWarning
    }
}

/// Parses, styles, lays out, and validates raw source at a declared size.
/// A parse failure yields a D0 violation and an exclude verdict.
pub fn validate_source<S: Scalar>(
    html: &str,
    declared: (S, S),
    opts: &ValidateOptions<S>,
    model: &FontMetricModel<S>,
) -> ValidationReport<S> {
    let ast = match crate::parse::parse_document(html) {
        Ok(ast) => ast,
        Err(err) => {
            return ValidationReport {
                verdict: Verdict::Exclude,
                violations: vec![Violation {
                    code: ViolationCode::D0,
                    path: String::new(),
                    message: format!("parse failure: {err}"),
                }],
                measured: Measured {
                    h_hat: S::zero(),
                    width: declared.0,
                    height: declared.1,
                },
            };
        }
    };
    let env = StyleEnv {
        viewport: Some(declared),
        root_font_size: S::of(16.0),
    };
    let styles = resolve_styles(&ast, &env);
    let tree = layout(&ast, &styles, declared, model);
    validate(&ast, &styles, &tree, declared, opts)
}

#[cfg(test)]
mod placeholder_tests {
    use super::*;

    #[test]
    fn picsum_urls_parse() {
        assert_eq!(parse_placeholder_url("https://picsum.photos/200/300"), Some((200, 300)));
        assert_eq!(parse_placeholder_url("https://picsum.photos/200/200"), Some((200, 200)));
    }

    #[test]
    fn non_placeholder_rejected() {
        assert_eq!(parse_placeholder_url("https://example.com/a.png"), None);
        assert_eq!(parse_placeholder_url("image_6_200x200.png"), None);
        assert_eq!(parse_placeholder_url("https://picsum.photos/200"), None);
        assert_eq!(parse_placeholder_url("https://picsum.photos/0/200"), None);
        assert_eq!(parse_placeholder_url("https://picsum.photos/200/300/400"), None);
        assert_eq!(parse_placeholder_url("http://picsum.photos/200/300"), None);
    }

    #[test]
    fn asset_names_parse() {
        assert_eq!(parse_asset_name("image_6_200x200.png"), Some((6, 200, 200)));
        assert_eq!(parse_asset_name("image_0_1024x768.png"), Some((0, 1024, 768)));
        assert_eq!(parse_asset_name("image_200x200.png"), None);
        assert_eq!(parse_asset_name("picture_0_10x10.png"), None);
    }
}
