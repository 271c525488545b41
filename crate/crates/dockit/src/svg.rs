//! SVG rendering of a laid-out document, 1:1 with px coordinates.
//!
//! Boxes paint in arena order (parents before children): background fill,
//! then border strips, then image or text content. Images whose src is
//! still a remote placeholder render as gray rectangles; substituted local
//! assets are referenced by name.

use crate::dom::DocumentAst;
use crate::layout::BoxTree;
use crate::scalar::Scalar;
use crate::style::{ResolvedStyles, Rgb};
use crate::validate::parse_placeholder_url;

const PLACEHOLDER_FILL: &str = "#c0c0c0";

/// Renders the box tree as an SVG document.
///
/// The canvas is the viewport width by the rendered document height (so
/// overflowing content stays visible), painted white before any boxes.
pub fn render_svg<S: Scalar>(
    ast: &DocumentAst,
    styles: &ResolvedStyles<S>,
    tree: &BoxTree<S>,
) -> String {
    let (vw, vh) = tree.viewport;
    let doc_h = tree.document_height();
    let height = if doc_h > vh { doc_h } else { vh };
    let nodes = ast.nodes();

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        fmt(vw),
        fmt(height),
        fmt(vw),
        fmt(height)
    ));
    out.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
        fmt(vw),
        fmt(height)
    ));

    for b in &tree.boxes {
        let style = &styles.styles[b.node_index];
        let bb = &b.border_box;

        if style.background.is_visible() {
            push_rect(&mut out, bb.x, bb.y, bb.width, bb.height, style.background);
        }

        let bw = style.border_width;
        if style.border_color.is_visible() {
            let color = style.border_color;
            let zero = S::zero();
            if bw[0] > zero {
                push_rect(&mut out, bb.x, bb.y, bb.width, bw[0], color);
            }
            if bw[2] > zero {
                push_rect(&mut out, bb.x, bb.bottom() - bw[2], bb.width, bw[2], color);
            }
            if bw[3] > zero {
                push_rect(&mut out, bb.x, bb.y, bw[3], bb.height, color);
            }
            if bw[1] > zero {
                push_rect(&mut out, bb.right() - bw[1], bb.y, bw[1], bb.height, color);
            }
        }

        if b.tag == "img" {
            let cb = &b.content_box;
            let src = nodes[b.node_index].node.attr("src").unwrap_or("");
            if src.is_empty() || parse_placeholder_url(src).is_some() {
                out.push_str(&format!(
                    "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                    fmt(cb.x),
                    fmt(cb.y),
                    fmt(cb.width),
                    fmt(cb.height),
                    PLACEHOLDER_FILL
                ));
            } else {
                out.push_str(&format!(
                    "  <image x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" href=\"{}\" preserveAspectRatio=\"none\"/>\n",
                    fmt(cb.x),
                    fmt(cb.y),
                    fmt(cb.width),
                    fmt(cb.height),
                    escape(src)
                ));
            }
        }

        for line in &b.lines {
            if line.text.is_empty() {
                continue;
            }
            let fs = style.font_size;
            let baseline = line.y + (line.height - fs).half() + S::of(0.8) * fs;
            out.push_str(&format!(
                "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"{}\" fill=\"{}\" textLength=\"{}\" lengthAdjust=\"spacingAndGlyphs\">{}</text>\n",
                fmt(line.x),
                fmt(baseline),
                fmt(fs),
                style.color.to_hex(),
                fmt(line.width),
                escape(&line.text)
            ));
        }
    }

    out.push_str("</svg>\n");
    out
}

fn push_rect<S: Scalar>(out: &mut String, x: S, y: S, w: S, h: S, color: Rgb) {
    out.push_str(&format!(
        "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"",
        fmt(x),
        fmt(y),
        fmt(w),
        fmt(h),
        color.to_hex()
    ));
    if color.a < 1.0 {
        out.push_str(&format!(" fill-opacity=\"{}\"", color.a));
    }
    out.push_str("/>\n");
}

fn fmt<S: Scalar>(v: S) -> String {
    let f = v.as_f64();
    if f == f.trunc() && f.abs() < 1e15 {
        format!("{}", f as i64)
    } else {
        format!("{f}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
