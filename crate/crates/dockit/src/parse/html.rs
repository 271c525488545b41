//! Recursive-descent HTML parser for the dialect.
//!
//! Accepted shape: optional DOCTYPE and comments, then a single `html`
//! element containing exactly one `head` followed by one `body`. Tag names
//! and attribute names are lowercased; text is entity-decoded and
//! whitespace-collapsed. `<style>` content is handed to the CSS parser and
//! the merged stylesheet is attached to the returned document.

use crate::dom::{DocumentAst, Node, RuleSet, Span};
use crate::parse::{css, line_col, ParseError};

const VOID_TAGS: &[&str] = &[
    "img", "br", "hr", "meta", "link", "input", "source", "track", "wbr", "area", "base", "col",
    "embed",
];

/// Elements whose content is raw text up to the matching close tag.
const RAW_TEXT_TAGS: &[&str] = &["style", "script"];

pub fn parse_document(source: &str) -> Result<DocumentAst, ParseError> {
    let mut p = Parser {
        src: source,
        bytes: source.as_bytes(),
        pos: 0,
        css_chunks: Vec::new(),
    };
    p.skip_prolog();
    let start = p.pos;
    if !p.starts_with("<") {
        return Err(p.invalid("expected <html> document", start));
    }
    let root = p.parse_element()?;
    p.skip_misc();
    if p.pos < p.bytes.len() {
        return Err(p.invalid("trailing content after </html>", p.pos));
    }
    if root.node.tag != "html" {
        return Err(p.invalid("root element must be <html>", start));
    }
    let elems: Vec<&str> = root.children.iter().map(|c| c.node.tag.as_str()).collect();
    if elems != ["head", "body"] {
        return Err(p.invalid("<html> must contain exactly <head> then <body>", start));
    }

    let mut stylesheet = RuleSet::default();
    for (chunk, offset) in &p.css_chunks {
        let mut sheet = css::parse_stylesheet(chunk).map_err(|e| shift_css_error(e, *offset, source))?;
        stylesheet.rules.append(&mut sheet.rules);
        for mut w in sheet.warnings {
            w.offset += offset;
            stylesheet.warnings.push(w);
        }
    }

    let mut spans = Vec::new();
    let root = flatten(root, &mut spans);
    Ok(DocumentAst {
        root,
        stylesheet,
        spans,
    })
}

/// Rebase a CSS error's position from stylesheet-relative to document-relative.
fn shift_css_error(e: ParseError, base: usize, doc: &str) -> ParseError {
    match e {
        ParseError::UnbalancedBraces { offset, .. } => {
            let abs = base + offset;
            let (line, column) = line_col(doc, abs);
            ParseError::UnbalancedBraces {
                offset: abs,
                line,
                column,
            }
        }
        other => other,
    }
}

struct Parsed {
    node: Node,
    span: Span,
    children: Vec<Parsed>,
}

/// Convert the spanned parse tree to a plain node tree, collecting spans in
/// preorder so they line up with [`DocumentAst::nodes`] indices.
fn flatten(p: Parsed, spans: &mut Vec<Span>) -> Node {
    let mut node = p.node;
    spans.push(p.span);
    node.children = p.children.into_iter().map(|c| flatten(c, spans)).collect();
    node
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    css_chunks: Vec<(String, usize)>,
}

impl<'a> Parser<'a> {
    fn starts_with(&self, s: &str) -> bool {
        self.src[self.pos..].starts_with(s)
    }

    fn starts_with_ci(&self, s: &str) -> bool {
        self.src[self.pos..]
            .get(..s.len())
            .is_some_and(|head| head.eq_ignore_ascii_case(s))
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_whitespace(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn skip_comment(&mut self) -> Result<bool, ParseError> {
        if !self.starts_with("<!--") {
            return Ok(false);
        }
        let start = self.pos;
        match self.src[self.pos + 4..].find("-->") {
            Some(rel) => {
                self.pos += 4 + rel + 3;
                Ok(true)
            }
            None => Err(self.invalid("unterminated comment", start)),
        }
    }

    /// Whitespace, comments, and an optional DOCTYPE before the root element.
    fn skip_prolog(&mut self) {
        loop {
            self.skip_whitespace();
            if self.starts_with("<!--") {
                if self.skip_comment().is_err() {
                    return;
                }
                continue;
            }
            if self.starts_with_ci("<!doctype") {
                match self.src[self.pos..].find('>') {
                    Some(rel) => self.pos += rel + 1,
                    None => return,
                }
                continue;
            }
            return;
        }
    }

    /// Whitespace and comments after the root element.
    fn skip_misc(&mut self) {
        loop {
            self.skip_whitespace();
            if self.starts_with("<!--") {
                if self.skip_comment() != Ok(true) {
                    return;
                }
                continue;
            }
            return;
        }
    }

    fn invalid(&self, detail: &str, offset: usize) -> ParseError {
        let (line, column) = line_col(self.src, offset);
        ParseError::InvalidStructure {
            detail: detail.to_string(),
            offset,
            line,
            column,
        }
    }

    fn malformed(&self, detail: &str, offset: usize) -> ParseError {
        let (line, column) = line_col(self.src, offset);
        ParseError::MalformedAttribute {
            detail: detail.to_string(),
            offset,
            line,
            column,
        }
    }

    fn read_name(&mut self) -> Option<String> {
        let start = self.pos;
        let first = self.peek()?;
        if !(first.is_ascii_alphabetic() || first == b'_') {
            return None;
        }
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_' | b':'))
        {
            self.pos += 1;
        }
        Some(self.src[start..self.pos].to_ascii_lowercase())
    }

    /// Parse one element starting at `<`. Returns the element with its span.
    fn parse_element(&mut self) -> Result<Parsed, ParseError> {
        let start = self.pos;
        debug_assert_eq!(self.peek(), Some(b'<'));
        self.pos += 1;
        let tag = self
            .read_name()
            .ok_or_else(|| self.invalid("expected tag name after <", start))?;
        let mut node = Node::new(&tag);
        let self_closing = self.parse_attributes(&mut node, start)?;

        let is_void = VOID_TAGS.contains(&tag.as_str());
        if self_closing || is_void {
            return Ok(Parsed {
                node,
                span: self.span(start, self.pos),
                children: Vec::new(),
            });
        }

        if RAW_TEXT_TAGS.contains(&tag.as_str()) {
            let content_start = self.pos;
            let close = format!("</{}", tag);
            let rel = self.src[self.pos..]
                .to_ascii_lowercase()
                .find(&close)
                .ok_or_else(|| self.unclosed(&tag, start))?;
            let content = &self.src[content_start..content_start + rel];
            if tag == "style" {
                self.css_chunks.push((content.to_string(), content_start));
            } else {
                let trimmed = collapse_whitespace(content);
                if !trimmed.is_empty() {
                    node.text = Some(trimmed);
                }
            }
            self.pos = content_start + rel;
            self.consume_close_tag(&tag)?;
            return Ok(Parsed {
                node,
                span: self.span(start, self.pos),
                children: Vec::new(),
            });
        }

        let mut children = Vec::new();
        let mut text = String::new();
        loop {
            if self.pos >= self.bytes.len() {
                return Err(self.unclosed(&tag, start));
            }
            if self.starts_with("<!--") {
                self.skip_comment()?;
                continue;
            }
            if self.starts_with("</") {
                self.consume_close_tag(&tag)?;
                break;
            }
            if self.peek() == Some(b'<') {
                children.push(self.parse_element()?);
                continue;
            }
            let chunk_start = self.pos;
            while self.pos < self.bytes.len() && self.peek() != Some(b'<') {
                self.pos += 1;
            }
            text.push_str(&self.src[chunk_start..self.pos]);
        }
        let text = collapse_whitespace(&decode_entities(&text));
        if !text.is_empty() {
            node.text = Some(text);
        }
        Ok(Parsed {
            node,
            span: self.span(start, self.pos),
            children,
        })
    }

    /// Attributes up to and including the closing `>`. Returns true for `/>`.
    fn parse_attributes(&mut self, node: &mut Node, tag_start: usize) -> Result<bool, ParseError> {
        loop {
            self.skip_whitespace();
            match self.peek() {
                None => return Err(self.unclosed(&node.tag, tag_start)),
                Some(b'>') => {
                    self.pos += 1;
                    return Ok(false);
                }
                Some(b'/') => {
                    if self.src[self.pos..].starts_with("/>") {
                        self.pos += 2;
                        return Ok(true);
                    }
                    return Err(self.malformed("stray / in tag", self.pos));
                }
                Some(_) => {
                    let attr_start = self.pos;
                    let name = self
                        .read_name()
                        .ok_or_else(|| self.malformed("expected attribute name", attr_start))?;
                    self.skip_whitespace();
                    let value = if self.peek() == Some(b'=') {
                        self.pos += 1;
                        self.skip_whitespace();
                        self.parse_attr_value(attr_start)?
                    } else {
                        String::new()
                    };
                    if node.attr(&name).is_none() {
                        node.attrs.push((name, value));
                    }
                }
            }
        }
    }

    fn parse_attr_value(&mut self, attr_start: usize) -> Result<String, ParseError> {
        match self.peek() {
            Some(q @ (b'"' | b'\'')) => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos] != q {
                    self.pos += 1;
                }
                if self.pos >= self.bytes.len() {
                    return Err(self.malformed("unterminated quoted value", attr_start));
                }
                let raw = &self.src[start..self.pos];
                self.pos += 1;
                Ok(decode_entities(raw))
            }
            Some(b) if !b.is_ascii_whitespace() && b != b'>' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|b| !b.is_ascii_whitespace() && b != b'>')
                {
                    if matches!(self.peek(), Some(b'"' | b'\'' | b'<' | b'=')) {
                        return Err(self.malformed("bad character in unquoted value", self.pos));
                    }
                    self.pos += 1;
                }
                Ok(decode_entities(&self.src[start..self.pos]))
            }
            _ => Err(self.malformed("missing attribute value after =", attr_start)),
        }
    }

    fn consume_close_tag(&mut self, open: &str) -> Result<(), ParseError> {
        let close_start = self.pos;
        debug_assert!(self.starts_with("</"));
        self.pos += 2;
        let name = self
            .read_name()
            .ok_or_else(|| self.invalid("expected tag name after </", close_start))?;
        self.skip_whitespace();
        if self.peek() != Some(b'>') {
            return Err(self.invalid("expected > to end close tag", self.pos));
        }
        self.pos += 1;
        if name != open {
            let (line, column) = line_col(self.src, close_start);
            return Err(ParseError::MismatchedTag {
                expected: open.to_string(),
                found: name,
                offset: close_start,
                line,
                column,
            });
        }
        Ok(())
    }

    fn unclosed(&self, tag: &str, offset: usize) -> ParseError {
        let (line, column) = line_col(self.src, offset);
        ParseError::UnclosedTag {
            tag: tag.to_string(),
            offset,
            line,
            column,
        }
    }

    fn span(&self, start: usize, end: usize) -> Span {
        let (line, column) = line_col(self.src, start);
        Span {
            start,
            end,
            line,
            column,
        }
    }
}

/// Decode the named entities the dialect uses plus numeric references.
pub(crate) fn decode_entities(s: &str) -> String {
    if !s.contains('&') {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        rest = &rest[amp..];
        let Some(semi) = rest[..rest.len().min(12)].find(';') else {
            out.push('&');
            rest = &rest[1..];
            continue;
        };
        let name = &rest[1..semi];
        let decoded = match name {
            "amp" => Some('&'),
            "lt" => Some('<'),
            "gt" => Some('>'),
            "quot" => Some('"'),
            "apos" => Some('\''),
            "nbsp" => Some('\u{a0}'),
            _ => decode_numeric_entity(name),
        };
        match decoded {
            Some(c) => {
                out.push(c);
                rest = &rest[semi + 1..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn decode_numeric_entity(name: &str) -> Option<char> {
    let digits = name.strip_prefix('#')?;
    let code = if let Some(hex) = digits.strip_prefix('x').or_else(|| digits.strip_prefix('X')) {
        u32::from_str_radix(hex, 16).ok()?
    } else {
        digits.parse().ok()?
    };
    char::from_u32(code)
}

/// Collapse ASCII whitespace runs to single spaces and trim the ends.
pub(crate) fn collapse_whitespace(s: &str) -> String {
    s.split_ascii_whitespace().collect::<Vec<_>>().join(" ")
}
