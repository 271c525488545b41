//! Canonical document serialization.
//!
//! Output is two-space indented with one rule per line inside `<style>`.
//! Reparsing serialized output yields a structurally equal document, so
//! parse and serialize form a round trip on well-formed input.

use crate::dom::{DocumentAst, Node, Rule, RuleSet};

pub fn serialize_document(ast: &DocumentAst) -> String {
    let mut out = String::from("<!DOCTYPE html>\n");
    let mut style_emitted = false;
    write_node(&ast.root, &ast.stylesheet, 0, &mut out, &mut style_emitted);
    out
}

fn write_node(
    node: &Node,
    sheet: &RuleSet,
    depth: usize,
    out: &mut String,
    style_emitted: &mut bool,
) {
    let pad = "  ".repeat(depth);
    out.push_str(&pad);
    out.push('<');
    out.push_str(&node.tag);
    for (name, value) in &node.attrs {
        out.push(' ');
        out.push_str(name);
        out.push_str("=\"");
        out.push_str(&escape_attr(value));
        out.push('"');
    }
    out.push('>');

    if node.tag == "style" {
        // All rules are merged into one stylesheet at parse time, so the
        // first style element carries everything and any later ones stay
        // empty to avoid duplicating rules.
        out.push('\n');
        if !*style_emitted {
            *style_emitted = true;
            for rule in &sheet.rules {
                out.push_str(&"  ".repeat(depth + 1));
                out.push_str(&serialize_rule(rule));
                out.push('\n');
            }
        }
        out.push_str(&pad);
        out.push_str("</style>\n");
        return;
    }
    if is_void(&node.tag) {
        out.push('\n');
        return;
    }
    if node.children.is_empty() {
        if let Some(text) = &node.text {
            out.push_str(&escape_text(text));
        }
        out.push_str(&format!("</{}>\n", node.tag));
        return;
    }

    out.push('\n');
    if let Some(text) = &node.text {
        out.push_str(&"  ".repeat(depth + 1));
        out.push_str(&escape_text(text));
        out.push('\n');
    }
    for child in &node.children {
        write_node(child, sheet, depth + 1, out, style_emitted);
    }
    out.push_str(&pad);
    out.push_str(&format!("</{}>\n", node.tag));
}

pub fn serialize_rule(rule: &Rule) -> String {
    let decls: Vec<String> = rule
        .declarations
        .iter()
        .map(|d| format!("{}: {};", d.name, d.value))
        .collect();
    format!("{} {{ {} }}", rule.selector.raw, decls.join(" "))
}

fn is_void(tag: &str) -> bool {
    matches!(
        tag,
        "img" | "br" | "hr" | "meta" | "link" | "input" | "source" | "track" | "wbr" | "area"
            | "base" | "col" | "embed"
    )
}

fn escape_text(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn escape_attr(s: &str) -> String {
    s.replace('&', "&amp;").replace('"', "&quot;").replace('<', "&lt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_document;

    const SKELETON: &str = "<!DOCTYPE html>\n<html>\n<head>\n<title>Doc</title>\n\
        <style>\nbody { display: flex; flex-direction: column; }\n.row { display: flex; }\n</style>\n\
        </head>\n<body>\n<div class=\"row\">\n<p>Hello &amp; welcome</p>\n\
        <img src=\"https://picsum.photos/200/200\" width=\"200\" height=\"200\" alt=\"logo\">\n\
        </div>\n</body>\n</html>\n";

    #[test]
    fn round_trip_is_structurally_stable() {
        let a = parse_document(SKELETON).unwrap();
        let text = serialize_document(&a);
        let b = parse_document(&text).unwrap();
        assert!(a.structurally_equal(&b), "reparse changed the tree:\n{text}");
    }

    #[test]
    fn serialization_is_a_fixpoint() {
        let a = parse_document(SKELETON).unwrap();
        let once = serialize_document(&a);
        let twice = serialize_document(&parse_document(&once).unwrap());
        assert_eq!(once, twice);
    }

    #[test]
    fn rewritten_img_src_survives() {
        let mut ast = parse_document(SKELETON).unwrap();
        let img = &mut ast.root.children[1].children[0].children[1];
        img.set_attr("src", "image_6_200x200.png");
        let text = serialize_document(&ast);
        assert!(text.contains("src=\"image_6_200x200.png\""));
    }

    #[test]
    fn doctype_and_indentation_shape() {
        let ast = parse_document("<html><head></head><body></body></html>").unwrap();
        let text = serialize_document(&ast);
        assert!(text.starts_with("<!DOCTYPE html>\n<html>\n"));
        assert!(text.contains("  <head></head>\n"));
        assert!(text.contains("  <body></body>\n"));
    }

    #[test]
    fn attr_escaping_round_trips() {
        let src = "<html><head></head><body><p class=\"a&quot;b\">x &lt; y</p></body></html>";
        let a = parse_document(src).unwrap();
        let b = parse_document(&serialize_document(&a)).unwrap();
        assert!(a.structurally_equal(&b));
        let p = &b.root.children[1].children[0];
        assert_eq!(p.attr("class"), Some("a\"b"));
        assert_eq!(p.text.as_deref(), Some("x < y"));
    }
}
