//! Stylesheet parser for the dialect's CSS subset.
//!
//! Rules with supported selectors (universal, tag, class, id, and whitespace
//! descendant chains of those) are retained; everything else is recorded as
//! a warning and skipped. Declaration values stay raw strings here; the
//! style resolver interprets them.

use crate::dom::{CssWarning, CssWarningKind, Declaration, Rule, RuleSet, Selector, SelectorPart};
use crate::parse::{line_col, ParseError};

pub fn parse_stylesheet(css: &str) -> Result<RuleSet, ParseError> {
    let src = blank_comments(css);
    let bytes = src.as_bytes();
    let mut sheet = RuleSet::default();
    let mut pos = 0;

    while pos < bytes.len() {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] == b'}' {
            return Err(unbalanced(css, pos));
        }
        if bytes[pos] == b'@' {
            pos = skip_at_rule(&src, pos, css, &mut sheet.warnings)?;
            continue;
        }

        let sel_start = pos;
        let brace = match src[pos..].find('{') {
            Some(rel) => pos + rel,
            None => return Err(unbalanced(css, pos)),
        };
        let selector_text = &src[sel_start..brace];
        let close = match src[brace + 1..].find(|c| c == '{' || c == '}') {
            Some(rel) if bytes[brace + 1 + rel] == b'}' => brace + 1 + rel,
            Some(rel) => return Err(unbalanced(css, brace + 1 + rel)),
            None => return Err(unbalanced(css, brace)),
        };
        let declarations = parse_declaration_block(
            &src[brace + 1..close],
            brace + 1,
            &mut sheet.warnings,
        );

        for part in selector_text.split(',') {
            let raw = part.trim();
            if raw.is_empty() {
                continue;
            }
            match parse_selector(raw) {
                Some(selector) => sheet.rules.push(Rule {
                    selector,
                    declarations: declarations.clone(),
                }),
                None => sheet.warnings.push(CssWarning {
                    kind: CssWarningKind::UnsupportedSelector,
                    detail: raw.to_string(),
                    offset: sel_start,
                }),
            }
        }
        pos = close + 1;
    }
    Ok(sheet)
}

/// Parse a supported selector, or None when it uses anything outside the
/// dialect (combinators, pseudo-classes, compound parts, attributes).
pub fn parse_selector(raw: &str) -> Option<Selector> {
    let mut parts = Vec::new();
    for token in raw.split_ascii_whitespace() {
        parts.push(parse_selector_part(token)?);
    }
    if parts.is_empty() {
        return None;
    }
    let raw = raw.split_ascii_whitespace().collect::<Vec<_>>().join(" ");
    Some(Selector { parts, raw })
}

fn parse_selector_part(token: &str) -> Option<SelectorPart> {
    if token == "*" {
        return Some(SelectorPart::Universal);
    }
    let (kind, name): (fn(String) -> SelectorPart, &str) = match token.as_bytes().first()? {
        b'.' => (SelectorPart::Class, &token[1..]),
        b'#' => (SelectorPart::Id, &token[1..]),
        _ => (SelectorPart::Tag, token),
    };
    if name.is_empty()
        || !name
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_')
    {
        return None;
    }
    let name = if matches!(token.as_bytes()[0], b'.' | b'#') {
        name.to_string()
    } else {
        name.to_ascii_lowercase()
    };
    Some(kind(name))
}

/// Parse a `;`-separated declaration list, e.g. the value of an inline
/// `style` attribute. Malformed entries are skipped.
pub fn parse_declarations(text: &str) -> Vec<Declaration> {
    let mut warnings = Vec::new();
    parse_declaration_block(text, 0, &mut warnings)
}

fn parse_declaration_block(
    text: &str,
    base_offset: usize,
    warnings: &mut Vec<CssWarning>,
) -> Vec<Declaration> {
    let mut out = Vec::new();
    for (chunk, chunk_offset) in split_outside_parens(text, b';') {
        let trimmed = chunk.trim();
        if trimmed.is_empty() {
            continue;
        }
        let Some(colon) = trimmed.find(':') else {
            warnings.push(CssWarning {
                kind: CssWarningKind::MalformedDeclaration,
                detail: trimmed.to_string(),
                offset: base_offset + chunk_offset,
            });
            continue;
        };
        let name = trimmed[..colon].trim().to_ascii_lowercase();
        let mut value = trimmed[colon + 1..].trim().to_string();
        if name.is_empty() || value.is_empty() {
            warnings.push(CssWarning {
                kind: CssWarningKind::MalformedDeclaration,
                detail: trimmed.to_string(),
                offset: base_offset + chunk_offset,
            });
            continue;
        }
        if let Some(stripped) = value.to_ascii_lowercase().strip_suffix("!important") {
            let keep = stripped.len();
            value = value[..keep].trim_end().to_string();
            warnings.push(CssWarning {
                kind: CssWarningKind::ImportantStripped,
                detail: name.clone(),
                offset: base_offset + chunk_offset,
            });
            if value.is_empty() {
                continue;
            }
        }
        out.push(Declaration { name, value });
    }
    out
}

/// Split on `sep` at paren depth zero, keeping each chunk's byte offset.
fn split_outside_parens(text: &str, sep: u8) -> Vec<(&str, usize)> {
    let bytes = text.as_bytes();
    let mut chunks = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            _ if b == sep && depth == 0 => {
                chunks.push((&text[start..i], start));
                start = i + 1;
            }
            _ => {}
        }
    }
    chunks.push((&text[start..], start));
    chunks
}

/// Skip an at-rule (either `@x ...;` or `@x ... { ... }` with nesting).
fn skip_at_rule(
    src: &str,
    start: usize,
    original: &str,
    warnings: &mut Vec<CssWarning>,
) -> Result<usize, ParseError> {
    let bytes = src.as_bytes();
    let mut pos = start;
    while pos < bytes.len() && bytes[pos] != b'{' && bytes[pos] != b';' {
        pos += 1;
    }
    let end = if pos < bytes.len() && bytes[pos] == b';' {
        pos + 1
    } else if pos < bytes.len() {
        let mut depth = 0usize;
        loop {
            if pos >= bytes.len() {
                return Err(unbalanced(original, start));
            }
            match bytes[pos] {
                b'{' => depth += 1,
                b'}' => {
                    depth -= 1;
                    if depth == 0 {
                        pos += 1;
                        break;
                    }
                }
                _ => {}
            }
            pos += 1;
        }
        pos
    } else {
        return Err(unbalanced(original, start));
    };
    warnings.push(CssWarning {
        kind: CssWarningKind::AtRuleSkipped,
        detail: src[start..end].chars().take(40).collect(),
        offset: start,
    });
    Ok(end)
}

/// Replace comment bodies with spaces so byte offsets stay aligned with the
/// original text.
fn blank_comments(css: &str) -> String {
    let mut out = css.as_bytes().to_vec();
    let mut i = 0;
    while i + 1 < out.len() {
        if out[i] == b'/' && out[i + 1] == b'*' {
            let mut j = i + 2;
            while j + 1 < out.len() && !(out[j] == b'*' && out[j + 1] == b'/') {
                j += 1;
            }
            let end = (j + 2).min(out.len());
            for b in &mut out[i..end] {
                if *b != b'\n' {
                    *b = b' ';
                }
            }
            i = end;
        } else {
            i += 1;
        }
    }
    String::from_utf8(out).expect("comment blanking preserves UTF-8")
}

fn unbalanced(src: &str, offset: usize) -> ParseError {
    let (line, column) = line_col(src, offset);
    ParseError::UnbalancedBraces {
        offset,
        line,
        column,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universal_rule_with_two_declarations() {
        let sheet = parse_stylesheet("* { box-sizing: border-box; margin: 0; }").unwrap();
        assert_eq!(sheet.rules.len(), 1);
        assert_eq!(sheet.rules[0].selector.parts, vec![SelectorPart::Universal]);
        assert_eq!(
            sheet.rules[0].declarations,
            vec![
                Declaration {
                    name: "box-sizing".into(),
                    value: "border-box".into()
                },
                Declaration {
                    name: "margin".into(),
                    value: "0".into()
                },
            ]
        );
        assert!(sheet.warnings.is_empty());
    }

    #[test]
    fn class_rule() {
        let sheet = parse_stylesheet(".header { display: flex; }").unwrap();
        assert_eq!(sheet.rules.len(), 1);
        assert_eq!(
            sheet.rules[0].selector.parts,
            vec![SelectorPart::Class("header".into())]
        );
    }

    #[test]
    fn child_combinator_is_unsupported() {
        let sheet = parse_stylesheet("div > p { color: red }").unwrap();
        assert!(sheet.rules.is_empty());
        assert_eq!(sheet.warnings.len(), 1);
        assert_eq!(sheet.warnings[0].kind, CssWarningKind::UnsupportedSelector);
        assert_eq!(sheet.warnings[0].detail, "div > p");
    }

    #[test]
    fn descendant_chain_and_comma_list() {
        let sheet = parse_stylesheet("div .logo p, .x { margin: 0 }").unwrap();
        assert_eq!(sheet.rules.len(), 2);
        assert_eq!(sheet.rules[0].selector.raw, "div .logo p");
        assert_eq!(sheet.rules[0].selector.parts.len(), 3);
        assert_eq!(sheet.rules[1].selector.raw, ".x");
        assert_eq!(sheet.rules[0].declarations, sheet.rules[1].declarations);
    }

    #[test]
    fn missing_close_brace_is_unbalanced() {
        let err = parse_stylesheet(".a { color: red").unwrap_err();
        assert!(matches!(err, ParseError::UnbalancedBraces { .. }));
    }

    #[test]
    fn stray_close_brace_is_unbalanced() {
        let err = parse_stylesheet("} .a { color: red }").unwrap_err();
        match err {
            ParseError::UnbalancedBraces { offset, .. } => assert_eq!(offset, 0),
            other => panic!("wrong error: {other:?}"),
        }
    }

    #[test]
    fn at_rules_are_skipped_with_warning() {
        let sheet =
            parse_stylesheet("@media (max-width: 100px) { .a { color: red } } .b { margin: 0 }")
                .unwrap();
        assert_eq!(sheet.rules.len(), 1);
        assert_eq!(sheet.rules[0].selector.raw, ".b");
        assert_eq!(sheet.warnings[0].kind, CssWarningKind::AtRuleSkipped);
    }

    #[test]
    fn comments_are_ignored_but_offsets_kept() {
        let sheet = parse_stylesheet("/* note */ .a { /* x */ color: red; }").unwrap();
        assert_eq!(sheet.rules.len(), 1);
        assert_eq!(sheet.rules[0].declarations[0].value, "red");
    }

    #[test]
    fn important_is_stripped_with_warning() {
        let sheet = parse_stylesheet(".a { width: 50% !important; }").unwrap();
        assert_eq!(sheet.rules[0].declarations[0].value, "50%");
        assert_eq!(sheet.warnings[0].kind, CssWarningKind::ImportantStripped);
    }

    #[test]
    fn rgb_values_with_semicolons_inside_parens_survive() {
        let decls = parse_declarations("color: rgb(10, 20, 30); background: #fff");
        assert_eq!(decls.len(), 2);
        assert_eq!(decls[0].value, "rgb(10, 20, 30)");
    }

    #[test]
    fn declaration_without_colon_warns() {
        let sheet = parse_stylesheet(".a { nonsense }").unwrap();
        assert!(sheet.rules[0].declarations.is_empty());
        assert_eq!(sheet.warnings[0].kind, CssWarningKind::MalformedDeclaration);
    }

    #[test]
    fn compound_selector_is_unsupported() {
        let sheet = parse_stylesheet("div.header { margin: 0 }").unwrap();
        assert!(sheet.rules.is_empty());
        assert_eq!(sheet.warnings[0].kind, CssWarningKind::UnsupportedSelector);
    }

    #[test]
    fn missing_final_semicolon_is_fine() {
        let sheet = parse_stylesheet("body { display: flex; height: 20px }").unwrap();
        assert_eq!(sheet.rules[0].declarations.len(), 2);
        assert_eq!(sheet.rules[0].declarations[1].value, "20px");
    }
}
