//! Document object model for the restricted HTML dialect.
//!
//! A parsed document is an element tree plus one stylesheet collected from
//! every `<style>` element in source order. Nodes are plain values: equality
//! is structural, and per-node side data (source spans, computed styles,
//! layout boxes) is keyed by preorder index instead of node identity.

use serde::{Deserialize, Serialize};

/// One element. Text content is the concatenation of the node's direct text
/// chunks with whitespace runs collapsed to single spaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub tag: String,
    /// Attributes in source order; a duplicated name keeps its first value.
    pub attrs: Vec<(String, String)>,
    pub children: Vec<Node>,
    pub text: Option<String>,
}

impl Node {
    pub fn new(tag: &str) -> Node {
        Node {
            tag: tag.to_string(),
            attrs: Vec::new(),
            children: Vec::new(),
            text: None,
        }
    }

    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    pub fn set_attr(&mut self, name: &str, value: &str) {
        match self.attrs.iter_mut().find(|(n, _)| n == name) {
            Some((_, v)) => *v = value.to_string(),
            None => self.attrs.push((name.to_string(), value.to_string())),
        }
    }

    /// Space-separated class list from the `class` attribute.
    pub fn classes(&self) -> impl Iterator<Item = &str> {
        self.attr("class").unwrap_or("").split_whitespace()
    }

    /// Number of nodes in this subtree, including self.
    pub fn subtree_len(&self) -> usize {
        1 + self.children.iter().map(Node::subtree_len).sum::<usize>()
    }
}

/// Byte range of a node in the original source, with the 1-based line and
/// column of its opening `<`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

/// One component of a selector chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectorPart {
    Universal,
    Tag(String),
    Class(String),
    Id(String),
}

/// A supported selector: a single part or a whitespace descendant chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selector {
    pub parts: Vec<SelectorPart>,
    /// Normalized source text (parts joined by single spaces).
    pub raw: String,
}

impl Selector {
    /// True when the final part matches `node` and the preceding parts match
    /// some strictly-ascending subsequence of `ancestors` (outermost first).
    pub fn matches(&self, node: &Node, ancestors: &[&Node]) -> bool {
        let Some((last, prefix)) = self.parts.split_last() else {
            return false;
        };
        if !part_matches(last, node) {
            return false;
        }
        let mut need = prefix.iter();
        let mut current = need.next();
        for anc in ancestors {
            match current {
                None => return true,
                Some(part) => {
                    if part_matches(part, anc) {
                        current = need.next();
                    }
                }
            }
        }
        current.is_none()
    }
}

fn part_matches(part: &SelectorPart, node: &Node) -> bool {
    match part {
        SelectorPart::Universal => true,
        SelectorPart::Tag(t) => node.tag == *t,
        SelectorPart::Class(c) => node.classes().any(|k| k == c),
        SelectorPart::Id(i) => node.attr("id") == Some(i.as_str()),
    }
}

/// One style rule: selector plus its declarations in source order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub selector: Selector,
    pub declarations: Vec<Declaration>,
}

/// A raw `name: value` declaration. Values keep their source text; they are
/// interpreted by the style resolver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Declaration {
    pub name: String,
    pub value: String,
}

/// Problems the CSS parser tolerates and records instead of failing on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssWarning {
    pub kind: CssWarningKind,
    pub detail: String,
    pub offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CssWarningKind {
    UnsupportedSelector,
    MalformedDeclaration,
    ImportantStripped,
    AtRuleSkipped,
}

/// Stylesheet: retained rules plus warnings for everything dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
    pub warnings: Vec<CssWarning>,
}

impl RuleSet {
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// A fully parsed document: element tree, merged stylesheet, and per-node
/// source spans indexed by preorder position.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DocumentAst {
    pub root: Node,
    pub stylesheet: RuleSet,
    pub spans: Vec<Span>,
}

impl DocumentAst {
    /// Tree and retained-rule equality, ignoring source spans and warnings.
    pub fn structurally_equal(&self, other: &DocumentAst) -> bool {
        self.root == other.root && self.stylesheet.rules == other.stylesheet.rules
    }

    /// Preorder traversal with stable indices and human-readable paths like
    /// `html/body[1]/div[0]/p[2]` (the bracketed number is the child's
    /// position under its parent).
    pub fn nodes(&self) -> Vec<NodeRef<'_>> {
        let mut out = Vec::with_capacity(self.root.subtree_len());
        walk(&self.root, "html".to_string(), &mut Vec::new(), &mut out);
        out
    }

    /// The `body` element with its preorder index and path.
    pub fn body(&self) -> Option<NodeRef<'_>> {
        self.nodes().into_iter().find(|r| r.node.tag == "body")
    }
}

/// A node seen during traversal, with its preorder index, its path, and the
/// chain of ancestors (outermost first).
pub struct NodeRef<'a> {
    pub index: usize,
    pub path: String,
    pub node: &'a Node,
    pub ancestors: Vec<&'a Node>,
}

fn walk<'a>(
    node: &'a Node,
    path: String,
    ancestors: &mut Vec<&'a Node>,
    out: &mut Vec<NodeRef<'a>>,
) {
    out.push(NodeRef {
        index: out.len(),
        path: path.clone(),
        node,
        ancestors: ancestors.clone(),
    });
    ancestors.push(node);
    for (i, child) in node.children.iter().enumerate() {
        let child_path = format!("{}/{}[{}]", path, child.tag, i);
        walk(child, child_path, ancestors, out);
    }
    ancestors.pop();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc_with(body_children: Vec<Node>) -> DocumentAst {
        let mut body = Node::new("body");
        body.children = body_children;
        let mut html = Node::new("html");
        html.children = vec![Node::new("head"), body];
        DocumentAst {
            root: html,
            stylesheet: RuleSet::default(),
            spans: Vec::new(),
        }
    }

    #[test]
    fn preorder_paths_and_indices() {
        let mut div = Node::new("div");
        div.children = vec![Node::new("p"), Node::new("img")];
        let ast = doc_with(vec![div]);
        let nodes = ast.nodes();
        let paths: Vec<&str> = nodes.iter().map(|r| r.path.as_str()).collect();
        assert_eq!(
            paths,
            vec![
                "html",
                "html/head[0]",
                "html/body[1]",
                "html/body[1]/div[0]",
                "html/body[1]/div[0]/p[0]",
                "html/body[1]/div[0]/img[1]",
            ]
        );
        for (i, r) in nodes.iter().enumerate() {
            assert_eq!(r.index, i);
        }
        assert_eq!(nodes[5].ancestors.len(), 3);
    }

    #[test]
    fn duplicate_attr_lookup_returns_first() {
        let mut n = Node::new("div");
        n.attrs.push(("class".into(), "a b".into()));
        assert_eq!(n.attr("class"), Some("a b"));
        assert!(n.classes().any(|c| c == "b"));
        assert_eq!(n.attr("id"), None);
    }

    #[test]
    fn descendant_selector_matching() {
        let sel = Selector {
            parts: vec![
                SelectorPart::Tag("div".into()),
                SelectorPart::Class("logo".into()),
                SelectorPart::Tag("p".into()),
            ],
            raw: "div .logo p".into(),
        };
        let p = Node::new("p");
        let mut logo = Node::new("div");
        logo.attrs.push(("class".into(), "logo".into()));
        let outer = Node::new("div");
        let body = Node::new("body");
        assert!(sel.matches(&p, &[&body, &outer, &logo]));
        assert!(!sel.matches(&p, &[&body, &logo]));
        assert!(!sel.matches(&logo, &[&body, &outer]));
    }

    #[test]
    fn universal_selector_matches_everything() {
        let sel = Selector {
            parts: vec![SelectorPart::Universal],
            raw: "*".into(),
        };
        assert!(sel.matches(&Node::new("p"), &[]));
        assert!(sel.matches(&Node::new("div"), &[&Node::new("body")]));
    }
}
