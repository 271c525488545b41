//! Deterministic box layout for the flex/grid dialect.
//!
//! Sizing follows the border-box model throughout: declared widths and
//! heights are border-box sizes, and auto sizes grow from content plus
//! padding and border. Children may overflow their parent; nothing clips.
//! Percentages resolve against the containing block's content box, with
//! margins, padding, and gaps resolving against its width. A percentage
//! whose basis is an auto-sized ancestor is a cycle: it resolves to zero
//! and the tree records a warning.

mod flex;
mod grid;

use serde::Serialize;

use crate::dom::{DocumentAst, NodeRef};
use crate::geometry::Rect;
use crate::scalar::Scalar;
use crate::style::{AlignItems, ComputedStyle, Display, Length, ResolvedStyles, TextAlign};
use crate::text::{measure_text, FontMetricModel};
use crate::validate::parse_placeholder_url;

/// One absolutely positioned text line inside a leaf box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TextLine<S> {
    pub text: String,
    pub x: S,
    pub y: S,
    pub width: S,
    pub height: S,
}

/// One laid-out element with its three box rectangles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutBox<S> {
    /// Preorder index of the element in the document tree.
    pub node_index: usize,
    pub tag: String,
    pub border_box: Rect<S>,
    pub content_box: Rect<S>,
    pub margin_box: Rect<S>,
    pub lines: Vec<TextLine<S>>,
    /// Indices into [`BoxTree::boxes`], in source order.
    pub children: Vec<usize>,
}

impl<S: Scalar> LayoutBox<S> {
    pub fn is_leaf_content(&self) -> bool {
        matches!(self.tag.as_str(), "p" | "img")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayoutWarningKind {
    /// A percentage needed the size of an ancestor that is itself sized by
    /// its content; the percentage resolved to zero.
    CyclicPercent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutWarning {
    pub kind: LayoutWarningKind,
    pub node_path: String,
    pub property: String,
}

/// The laid-out document: a box arena rooted at the body.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxTree<S> {
    /// Box 0 is the body; the rest follow in document preorder.
    pub boxes: Vec<LayoutBox<S>>,
    pub viewport: (S, S),
    pub warnings: Vec<LayoutWarning>,
}

impl<S: Scalar> BoxTree<S> {
    /// Rendered document height: the body's border-box height or the lowest
    /// descendant border-box bottom, whichever is larger. Matches the
    /// scroll-height notion a browser reports for overflowing content.
    pub fn document_height(&self) -> S {
        let Some(body) = self.boxes.first() else {
            return S::zero();
        };
        self.boxes[1..]
            .iter()
            .map(|b| b.border_box.bottom())
            .fold(body.border_box.height, |acc, b| if b > acc { b } else { acc })
    }

    /// The box for a given document preorder index, if the element was laid out.
    pub fn by_node_index(&self, node_index: usize) -> Option<&LayoutBox<S>> {
        self.boxes.iter().find(|b| b.node_index == node_index)
    }

    /// Leaf content boxes (p and img), the unit of the layout metrics.
    pub fn leaf_boxes(&self) -> Vec<&LayoutBox<S>> {
        self.boxes.iter().filter(|b| b.is_leaf_content()).collect()
    }
}

/// Rendered document height of a laid-out tree.
pub fn document_height<S: Scalar>(tree: &BoxTree<S>) -> S {
    tree.document_height()
}

/// Resolved margin, padding, and border widths in px, TRBL order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Frame<S> {
    pub margin: [S; 4],
    pub padding: [S; 4],
    pub border: [S; 4],
}

impl<S: Scalar> Frame<S> {
    pub fn h_margins(&self) -> S {
        self.margin[1] + self.margin[3]
    }

    pub fn v_margins(&self) -> S {
        self.margin[0] + self.margin[2]
    }

    /// Left border + padding: x offset of the content box.
    pub fn left_inner(&self) -> S {
        self.border[3] + self.padding[3]
    }

    /// Top border + padding: y offset of the content box.
    pub fn top_inner(&self) -> S {
        self.border[0] + self.padding[0]
    }

    /// Total horizontal border + padding.
    pub fn h_inner(&self) -> S {
        self.border[1] + self.border[3] + self.padding[1] + self.padding[3]
    }

    /// Total vertical border + padding.
    pub fn v_inner(&self) -> S {
        self.border[0] + self.border[2] + self.padding[0] + self.padding[2]
    }
}

/// A laid-out subtree in local coordinates: the border box sits at (0, 0)
/// and children carry offsets relative to it.
#[derive(Debug, Clone)]
pub(crate) struct Laid<S> {
    pub node_index: usize,
    pub tag: String,
    /// Border-box size.
    pub width: S,
    pub height: S,
    pub frame: Frame<S>,
    pub children: Vec<PlacedChild<S>>,
    pub lines: Vec<PlacedLine<S>>,
}

#[derive(Debug, Clone)]
pub(crate) struct PlacedChild<S> {
    /// Border-box offset relative to the parent border-box origin.
    pub dx: S,
    pub dy: S,
    pub laid: Laid<S>,
}

#[derive(Debug, Clone)]
pub(crate) struct PlacedLine<S> {
    pub dx: S,
    pub dy: S,
    pub width: S,
    pub height: S,
    pub text: String,
}

pub(crate) struct Ctx<'a, S: Scalar> {
    pub nodes: &'a [NodeRef<'a>],
    pub kids: &'a [Vec<usize>],
    pub styles: &'a ResolvedStyles<S>,
    pub model: &'a FontMetricModel<S>,
}

impl<'a, S: Scalar> Ctx<'a, S> {
    pub fn style(&self, index: usize) -> &ComputedStyle<S> {
        &self.styles.styles[index]
    }
}

pub(crate) fn clamp0<S: Scalar>(v: S) -> S {
    if v < S::zero() {
        S::zero()
    } else {
        v
    }
}

/// Child preorder indices for every node, in source order.
fn child_table(nodes: &[NodeRef<'_>]) -> Vec<Vec<usize>> {
    let mut table = vec![Vec::new(); nodes.len()];
    for (i, r) in nodes.iter().enumerate() {
        let mut c = i + 1;
        for _ in 0..r.node.children.len() {
            table[i].push(c);
            c += nodes[c].node.subtree_len();
        }
    }
    table
}

pub(crate) fn resolve_frame<S: Scalar>(style: &ComputedStyle<S>, cb_width: Option<S>) -> Frame<S> {
    let side = |l: &Length<S>| l.resolve_opt(cb_width).unwrap_or_else(S::zero);
    Frame {
        margin: [
            side(&style.margin[0]),
            side(&style.margin[1]),
            side(&style.margin[2]),
            side(&style.margin[3]),
        ],
        padding: [
            side(&style.padding[0]),
            side(&style.padding[1]),
            side(&style.padding[2]),
            side(&style.padding[3]),
        ],
        border: style.border_width,
    }
}

/// Resolves a length whose percentage basis may be unknown. Outside measure
/// passes an unknown basis is a cycle: the value becomes 0 and a warning is
/// recorded.
pub(crate) fn resolve_or_cyclic<S: Scalar>(
    ctx: &Ctx<'_, S>,
    warnings: &mut Vec<LayoutWarning>,
    len: &Length<S>,
    basis: Option<S>,
    measuring: bool,
    node_index: usize,
    property: &str,
) -> Option<S> {
    match len {
        Length::Auto => None,
        Length::Px(v) => Some(*v),
        Length::Percent(_) => match basis {
            Some(b) => len.resolve(b),
            None if measuring => None,
            None => {
                warnings.push(LayoutWarning {
                    kind: LayoutWarningKind::CyclicPercent,
                    node_path: ctx.nodes[node_index].path.clone(),
                    property: property.to_string(),
                });
                Some(S::zero())
            }
        },
    }
}

/// A gap or similar spacing value: percentages against an unknown basis
/// collapse to zero without a warning.
pub(crate) fn resolve_or_zero<S: Scalar>(len: &Length<S>, basis: Option<S>) -> S {
    len.resolve_opt(basis).unwrap_or_else(S::zero)
}

/// Lays out a styled document against a viewport, producing absolute boxes.
pub fn layout<'a, S: Scalar>(
    ast: &'a DocumentAst,
    styles: &ResolvedStyles<S>,
    viewport: (S, S),
    model: &FontMetricModel<S>,
) -> BoxTree<S> {
    let nodes = ast.nodes();
    let kids = child_table(&nodes);
    let ctx = Ctx {
        nodes: &nodes,
        kids: &kids,
        styles,
        model,
    };
    let mut warnings = Vec::new();
    let Some(body_index) = nodes.iter().position(|r| r.node.tag == "body") else {
        return BoxTree {
            boxes: Vec::new(),
            viewport,
            warnings,
        };
    };

    let (vw, vh) = viewport;
    let style = ctx.style(body_index);
    let frame = resolve_frame(style, Some(vw));
    let width = style
        .width
        .resolve(vw)
        .unwrap_or_else(|| clamp0(vw - frame.h_margins()));
    let height = style.height.resolve(vh);
    let laid = layout_box(&ctx, &mut warnings, body_index, Some(width), height, Some(vw), false);

    let mut boxes = Vec::new();
    emit(&laid, frame.margin[3], frame.margin[0], &mut boxes);
    BoxTree {
        boxes,
        viewport,
        warnings,
    }
}

/// Lays out one element subtree in local coordinates.
///
/// `width`/`height` are definite border-box sizes when known; `None` means
/// auto. `cb_width` is the containing block content width for percentage
/// margins and padding. `measuring` marks max-content probes, where
/// unresolvable percentages fall back to auto instead of warning.
pub(crate) fn layout_box<S: Scalar>(
    ctx: &Ctx<'_, S>,
    warnings: &mut Vec<LayoutWarning>,
    index: usize,
    width: Option<S>,
    height: Option<S>,
    cb_width: Option<S>,
    measuring: bool,
) -> Laid<S> {
    let node = ctx.nodes[index].node;
    let style = ctx.style(index);
    let frame = resolve_frame(style, cb_width);

    if node.tag == "img" {
        return layout_img(ctx, index, frame, width, height);
    }
    if !style.is_container() {
        return layout_text_leaf(ctx, index, frame, width, height);
    }

    let content_w = width.map(|w| clamp0(w - frame.h_inner()));
    let content_h = height.map(|h| clamp0(h - frame.v_inner()));
    let (content, children) = match style.display {
        Display::Grid => grid::layout_grid(ctx, warnings, index, content_w, content_h, measuring),
        _ => flex::layout_flex(ctx, warnings, index, content_w, content_h, measuring),
    };
    let width = width.unwrap_or(content.0 + frame.h_inner());
    let height = height.unwrap_or(content.1 + frame.v_inner());
    let children = children
        .into_iter()
        .map(|mut c| {
            c.dx = c.dx + frame.left_inner();
            c.dy = c.dy + frame.top_inner();
            c
        })
        .collect();
    Laid {
        node_index: index,
        tag: node.tag.clone(),
        width,
        height,
        frame,
        children,
        lines: Vec::new(),
    }
}

fn layout_img<S: Scalar>(
    ctx: &Ctx<'_, S>,
    index: usize,
    frame: Frame<S>,
    width: Option<S>,
    height: Option<S>,
) -> Laid<S> {
    let node = ctx.nodes[index].node;
    let (iw, ih) = intrinsic_image_size(node);
    Laid {
        node_index: index,
        tag: node.tag.clone(),
        width: clamp0(width.unwrap_or(S::of(iw) + frame.h_inner())),
        height: clamp0(height.unwrap_or(S::of(ih) + frame.v_inner())),
        frame,
        children: Vec::new(),
        lines: Vec::new(),
    }
}

/// Intrinsic image content size from width/height attributes, falling back
/// to the dimensions encoded in the src (placeholder URL or substituted
/// asset name), then zero. Both src forms carry the same dimensions, so a
/// document lays out identically before and after asset substitution.
pub fn intrinsic_image_size(node: &crate::dom::Node) -> (f64, f64) {
    let attr_dim = |name: &str| -> Option<f64> {
        let raw = node.attr(name)?;
        let raw = raw.trim().trim_end_matches("px");
        let v: f64 = raw.trim().parse().ok()?;
        (v.is_finite() && v >= 0.0).then_some(v)
    };
    let url_dims = node.attr("src").and_then(|src| {
        parse_placeholder_url(src)
            .or_else(|| crate::validate::parse_asset_name(src).map(|(_, w, h)| (w, h)))
    });
    let w = attr_dim("width")
        .or(url_dims.map(|(w, _)| w as f64))
        .unwrap_or(0.0);
    let h = attr_dim("height")
        .or(url_dims.map(|(_, h)| h as f64))
        .unwrap_or(0.0);
    (w, h)
}

fn layout_text_leaf<S: Scalar>(
    ctx: &Ctx<'_, S>,
    index: usize,
    frame: Frame<S>,
    width: Option<S>,
    height: Option<S>,
) -> Laid<S> {
    let node = ctx.nodes[index].node;
    let style = ctx.style(index);
    let text = node.text.as_deref().unwrap_or("");
    // The wrap limit gets a hair of tolerance so a box sized to its own
    // max-content width keeps its text on one line despite the strict
    // less-than fit rule of measure_text.
    let wrap_limit = width.map(|w| {
        let inner = clamp0(w - frame.h_inner());
        inner + inner * S::of(1e-9) + S::of(1e-9)
    });
    let metrics = measure_text(text, style.font_size, style.line_height, wrap_limit, ctx.model);

    let width = width.unwrap_or(metrics.width + frame.h_inner());
    let height = height.unwrap_or(metrics.height + frame.v_inner());
    let inner_w = clamp0(width - frame.h_inner());
    let line_h = style.line_height_px();
    let lines = metrics
        .lines
        .into_iter()
        .enumerate()
        .map(|(i, line)| {
            let align = match style.text_align {
                TextAlign::Left => S::zero(),
                TextAlign::Center => (inner_w - line.width).half(),
                TextAlign::Right => inner_w - line.width,
            };
            PlacedLine {
                dx: frame.left_inner() + align,
                dy: frame.top_inner() + S::from_usize_lossy(i) * line_h,
                width: line.width,
                height: line_h,
                text: line.text,
            }
        })
        .collect();
    Laid {
        node_index: index,
        tag: node.tag.clone(),
        width,
        height,
        frame,
        children: Vec::new(),
        lines,
    }
}

/// Effective cross-axis alignment for a child inside a container.
pub(crate) fn align_of<S: Scalar>(container: &ComputedStyle<S>, child: &ComputedStyle<S>) -> AlignItems {
    child.align_self.unwrap_or(container.align_items)
}

/// Cross-axis offset of a child's margin box inside a line of size `line_cross`.
pub(crate) fn cross_offset<S: Scalar>(align: AlignItems, line_cross: S, outer: S) -> S {
    match align {
        AlignItems::Stretch | AlignItems::FlexStart => S::zero(),
        AlignItems::Center => (line_cross - outer).half(),
        AlignItems::FlexEnd => line_cross - outer,
    }
}

/// Converts a local-coordinate subtree into absolute boxes, preorder.
fn emit<S: Scalar>(laid: &Laid<S>, x: S, y: S, boxes: &mut Vec<LayoutBox<S>>) -> usize {
    let f = &laid.frame;
    let border_box = Rect::new(x, y, laid.width, laid.height);
    let content_box = Rect::new(
        x + f.left_inner(),
        y + f.top_inner(),
        clamp0(laid.width - f.h_inner()),
        clamp0(laid.height - f.v_inner()),
    );
    let margin_box = Rect::new(
        x - f.margin[3],
        y - f.margin[0],
        laid.width + f.h_margins(),
        laid.height + f.v_margins(),
    );
    let lines = laid
        .lines
        .iter()
        .map(|l| TextLine {
            text: l.text.clone(),
            x: x + l.dx,
            y: y + l.dy,
            width: l.width,
            height: l.height,
        })
        .collect();
    let slot = boxes.len();
    boxes.push(LayoutBox {
        node_index: laid.node_index,
        tag: laid.tag.clone(),
        border_box,
        content_box,
        margin_box,
        lines,
        children: Vec::new(),
    });
    let mut child_slots = Vec::with_capacity(laid.children.len());
    for child in &laid.children {
        child_slots.push(emit(&child.laid, x + child.dx, y + child.dy, boxes));
    }
    boxes[slot].children = child_slots;
    slot
}

#[cfg(test)]
mod tests;
