//! The cascade: match rules to nodes, order by specificity and source
//! position, fold in inline styles, and inherit typographic properties.

use serde::Serialize;

use crate::dom::{Declaration, DocumentAst, Node, Selector, SelectorPart};
use crate::parse::parse_declarations;
use crate::scalar::Scalar;
use crate::style::value::{
    parse_color, parse_length, parse_number, parse_track_list, Length, LengthContext, Rgb, Track,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Display {
    Flex,
    Grid,
    Leaf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlexDirection {
    Row,
    RowReverse,
    Column,
    ColumnReverse,
}

impl FlexDirection {
    pub fn is_column(&self) -> bool {
        matches!(self, FlexDirection::Column | FlexDirection::ColumnReverse)
    }

    pub fn is_reverse(&self) -> bool {
        matches!(self, FlexDirection::RowReverse | FlexDirection::ColumnReverse)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlexWrap {
    Nowrap,
    Wrap,
    WrapReverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum JustifyContent {
    FlexStart,
    Center,
    FlexEnd,
    SpaceBetween,
    SpaceAround,
    SpaceEvenly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlignItems {
    Stretch,
    FlexStart,
    Center,
    FlexEnd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TextAlign {
    Left,
    Center,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Position {
    Static,
    Relative,
    Absolute,
    Fixed,
    Sticky,
}

/// Everything layout and validation need to know about one node.
#[derive(Debug, Clone, Serialize)]
pub struct ComputedStyle<S> {
    pub display: Display,
    /// Raw value of the winning `display` declaration, if any. Used by the
    /// validator: body and div must declare flex or grid.
    pub declared_display: Option<String>,
    pub flex_direction: FlexDirection,
    pub flex_wrap: FlexWrap,
    pub justify_content: JustifyContent,
    pub align_items: AlignItems,
    pub align_self: Option<AlignItems>,
    pub row_gap: Length<S>,
    pub column_gap: Length<S>,
    pub flex_basis: Length<S>,
    pub flex_grow: S,
    pub flex_shrink: S,
    pub grid_template_columns: Vec<Track<S>>,
    pub grid_template_rows: Vec<Track<S>>,
    pub width: Length<S>,
    pub height: Length<S>,
    /// Top, right, bottom, left.
    pub margin: [Length<S>; 4],
    pub padding: [Length<S>; 4],
    pub border_width: [S; 4],
    pub border_color: Rgb,
    pub font_size: S,
    /// Multiplier over font size.
    pub line_height: S,
    pub color: Rgb,
    pub background: Rgb,
    pub background_image: Option<String>,
    pub text_align: TextAlign,
    pub position: Position,
    /// An `order` declaration was present (forbidden: items keep source order).
    pub order_set: bool,
}

impl<S: Scalar> ComputedStyle<S> {
    fn root_default(env: &StyleEnv<S>) -> ComputedStyle<S> {
        ComputedStyle {
            display: Display::Leaf,
            declared_display: None,
            flex_direction: FlexDirection::Row,
            flex_wrap: FlexWrap::Nowrap,
            justify_content: JustifyContent::FlexStart,
            align_items: AlignItems::Stretch,
            align_self: None,
            row_gap: Length::zero(),
            column_gap: Length::zero(),
            flex_basis: Length::Auto,
            flex_grow: S::zero(),
            flex_shrink: S::one(),
            grid_template_columns: Vec::new(),
            grid_template_rows: Vec::new(),
            width: Length::Auto,
            height: Length::Auto,
            margin: [Length::zero(); 4],
            padding: [Length::zero(); 4],
            border_width: [S::zero(); 4],
            border_color: Rgb::BLACK,
            font_size: env.root_font_size,
            line_height: S::of(1.2),
            color: Rgb::BLACK,
            background: Rgb::TRANSPARENT,
            background_image: None,
            text_align: TextAlign::Left,
            position: Position::Static,
            order_set: false,
        }
    }

    fn inheriting(parent: &ComputedStyle<S>, env: &StyleEnv<S>) -> ComputedStyle<S> {
        ComputedStyle {
            font_size: parent.font_size,
            line_height: parent.line_height,
            color: parent.color,
            text_align: parent.text_align,
            ..ComputedStyle::root_default(env)
        }
    }

    pub fn is_container(&self) -> bool {
        matches!(self.display, Display::Flex | Display::Grid)
    }

    /// Line box height in px.
    pub fn line_height_px(&self) -> S {
        self.line_height * self.font_size
    }
}

/// Inputs that relative units resolve against.
#[derive(Debug, Clone, Copy)]
pub struct StyleEnv<S> {
    /// Declared document dimensions, used by `vw`/`vh`.
    pub viewport: Option<(S, S)>,
    pub root_font_size: S,
}

impl<S: Scalar> Default for StyleEnv<S> {
    fn default() -> Self {
        StyleEnv {
            viewport: None,
            root_font_size: S::of(16.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StyleWarning {
    pub kind: StyleWarningKind,
    pub node_path: String,
    pub property: String,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StyleWarningKind {
    UnknownProperty,
    /// Recognized but deliberately outside the supported subset.
    UnsupportedProperty,
    BadValue,
}

/// Resolution output: one style per preorder node index, plus warnings.
#[derive(Debug, Clone)]
pub struct ResolvedStyles<S> {
    pub styles: Vec<ComputedStyle<S>>,
    pub warnings: Vec<StyleWarning>,
}

impl<S> ResolvedStyles<S> {
    pub fn get(&self, preorder_index: usize) -> &ComputedStyle<S> {
        &self.styles[preorder_index]
    }
}

/// Standard CSS specificity restricted to the dialect's selector kinds:
/// (id count, class count, tag count). The universal part counts nothing.
pub fn specificity(selector: &Selector) -> (u32, u32, u32) {
    let mut s = (0, 0, 0);
    for part in &selector.parts {
        match part {
            SelectorPart::Universal => {}
            SelectorPart::Tag(_) => s.2 += 1,
            SelectorPart::Class(_) => s.1 += 1,
            SelectorPart::Id(_) => s.0 += 1,
        }
    }
    s
}

/// Parse and resolve one CSS length token against a basis dimension and a
/// font size (for `em`). Returns `None` for auto or unparseable input.
pub fn resolve_length<S: Scalar>(token: &str, basis: S, font_size: S) -> Option<S> {
    let ctx = LengthContext {
        font_size,
        root_font_size: S::of(16.0),
        viewport: None,
    };
    parse_length(token, &ctx)?.resolve(basis)
}

/// Apply the cascade over the whole document. Output is indexed by preorder
/// node position (the same order as [`DocumentAst::nodes`]).
pub fn resolve_styles<S: Scalar>(ast: &DocumentAst, env: &StyleEnv<S>) -> ResolvedStyles<S> {
    let mut out = ResolvedStyles {
        styles: Vec::with_capacity(ast.root.subtree_len()),
        warnings: Vec::new(),
    };
    let mut ancestors: Vec<&Node> = Vec::new();
    resolve_node(
        &ast.root,
        "html".to_string(),
        &mut ancestors,
        None,
        ast,
        env,
        &mut out,
    );
    out
}

fn resolve_node<'a, S: Scalar>(
    node: &'a Node,
    path: String,
    ancestors: &mut Vec<&'a Node>,
    parent: Option<&ComputedStyle<S>>,
    ast: &DocumentAst,
    env: &StyleEnv<S>,
    out: &mut ResolvedStyles<S>,
) {
    let mut style = match parent {
        Some(p) => ComputedStyle::inheriting(p, env),
        None => ComputedStyle::root_default(env),
    };

    // Matching declarations in cascade order: specificity breaks ties by
    // source position, inline style comes last.
    let mut matched: Vec<(u32, u32, u32, usize)> = Vec::new();
    for (i, rule) in ast.stylesheet.rules.iter().enumerate() {
        if rule.selector.matches(node, ancestors) {
            let (a, b, c) = specificity(&rule.selector);
            matched.push((a, b, c, i));
        }
    }
    matched.sort();
    let inline: Vec<Declaration> = node
        .attr("style")
        .map(parse_declarations)
        .unwrap_or_default();
    let ordered: Vec<&Declaration> = matched
        .iter()
        .flat_map(|&(_, _, _, i)| ast.stylesheet.rules[i].declarations.iter())
        .chain(inline.iter())
        .collect();

    // font-size first so em lengths in the same element resolve against the
    // element's own size, like a browser.
    let parent_font = parent.map_or(env.root_font_size, |p| p.font_size);
    for decl in &ordered {
        if decl.name == "font-size" {
            apply_font_size(&mut style, decl, parent_font, env, &path, &mut out.warnings);
        }
    }
    let ctx = LengthContext {
        font_size: style.font_size,
        root_font_size: env.root_font_size,
        viewport: env.viewport,
    };
    for decl in &ordered {
        if decl.name != "font-size" {
            apply_declaration(&mut style, decl, &ctx, &path, &mut out.warnings);
        }
    }
    finalize_display(&mut style, node);

    out.styles.push(style);
    let parent_index = out.styles.len() - 1;
    ancestors.push(node);
    for (i, child) in node.children.iter().enumerate() {
        let child_path = format!("{}/{}[{}]", path, child.tag, i);
        let parent_style = out.styles[parent_index].clone();
        resolve_node(
            child,
            child_path,
            ancestors,
            Some(&parent_style),
            ast,
            env,
            out,
        );
    }
    ancestors.pop();
}

/// Decide the final display mode. Containers (body, div) that fail to
/// declare flex or grid still need some layout, so they fall back to a
/// column flex, which stacks children like block layout; the validator
/// flags the missing declaration separately.
fn finalize_display<S: Scalar>(style: &mut ComputedStyle<S>, node: &Node) {
    let is_container_tag = matches!(node.tag.as_str(), "body" | "div");
    style.display = match style.declared_display.as_deref() {
        Some("flex") if is_container_tag => Display::Flex,
        Some("grid") if is_container_tag => Display::Grid,
        _ if is_container_tag => {
            if style.declared_display.is_none() {
                style.flex_direction = FlexDirection::Column;
            }
            Display::Flex
        }
        _ => Display::Leaf,
    };
}

fn apply_font_size<S: Scalar>(
    style: &mut ComputedStyle<S>,
    decl: &Declaration,
    parent_font: S,
    env: &StyleEnv<S>,
    path: &str,
    warnings: &mut Vec<StyleWarning>,
) {
    let ctx = LengthContext {
        font_size: parent_font,
        root_font_size: env.root_font_size,
        viewport: env.viewport,
    };
    match parse_length(&decl.value, &ctx) {
        Some(Length::Px(v)) => style.font_size = v,
        Some(Length::Percent(p)) => style.font_size = p / S::of(100.0) * parent_font,
        _ => warn(warnings, StyleWarningKind::BadValue, path, decl),
    }
}

fn apply_declaration<S: Scalar>(
    style: &mut ComputedStyle<S>,
    decl: &Declaration,
    ctx: &LengthContext<S>,
    path: &str,
    warnings: &mut Vec<StyleWarning>,
) {
    let value = decl.value.trim();
    let lower = value.to_ascii_lowercase();
    match decl.name.as_str() {
        "display" => style.declared_display = Some(lower),
        "flex-direction" => match parse_direction(&lower) {
            Some(d) => style.flex_direction = d,
            None => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "flex-wrap" => match parse_wrap(&lower) {
            Some(w) => style.flex_wrap = w,
            None => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "flex-flow" => {
            for token in lower.split_whitespace() {
                if let Some(d) = parse_direction(token) {
                    style.flex_direction = d;
                } else if let Some(w) = parse_wrap(token) {
                    style.flex_wrap = w;
                } else {
                    warn(warnings, StyleWarningKind::BadValue, path, decl);
                }
            }
        }
        "justify-content" => match lower.as_str() {
            "flex-start" | "start" | "left" => style.justify_content = JustifyContent::FlexStart,
            "center" => style.justify_content = JustifyContent::Center,
            "flex-end" | "end" | "right" => style.justify_content = JustifyContent::FlexEnd,
            "space-between" => style.justify_content = JustifyContent::SpaceBetween,
            "space-around" => style.justify_content = JustifyContent::SpaceAround,
            "space-evenly" => style.justify_content = JustifyContent::SpaceEvenly,
            _ => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "align-items" => match parse_align(&lower) {
            Some(a) => style.align_items = a,
            None => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "align-self" => match lower.as_str() {
            "auto" => style.align_self = None,
            _ => match parse_align(&lower) {
                Some(a) => style.align_self = Some(a),
                None => warn(warnings, StyleWarningKind::BadValue, path, decl),
            },
        },
        "gap" | "grid-gap" => {
            let parts: Vec<&str> = value.split_whitespace().collect();
            match parts.as_slice() {
                [one] => match parse_length(one, ctx) {
                    Some(l) => {
                        style.row_gap = l;
                        style.column_gap = l;
                    }
                    None => warn(warnings, StyleWarningKind::BadValue, path, decl),
                },
                [row, col] => match (parse_length(row, ctx), parse_length(col, ctx)) {
                    (Some(r), Some(c)) => {
                        style.row_gap = r;
                        style.column_gap = c;
                    }
                    _ => warn(warnings, StyleWarningKind::BadValue, path, decl),
                },
                _ => warn(warnings, StyleWarningKind::BadValue, path, decl),
            }
        }
        "row-gap" | "grid-row-gap" => {
            apply_length(&mut style.row_gap, value, ctx, path, decl, warnings)
        }
        "column-gap" | "grid-column-gap" => {
            apply_length(&mut style.column_gap, value, ctx, path, decl, warnings)
        }
        "flex" => apply_flex_shorthand(style, &lower, ctx, path, decl, warnings),
        "flex-grow" => match parse_number(value) {
            Some(n) => style.flex_grow = n,
            None => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "flex-shrink" => match parse_number(value) {
            Some(n) => style.flex_shrink = n,
            None => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "flex-basis" => {
            if lower == "content" {
                style.flex_basis = Length::Auto;
            } else {
                apply_length(&mut style.flex_basis, value, ctx, path, decl, warnings)
            }
        }
        "grid-template-columns" => match parse_track_list(value, ctx) {
            Some(t) => style.grid_template_columns = t,
            None => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "grid-template-rows" => match parse_track_list(value, ctx) {
            Some(t) => style.grid_template_rows = t,
            None => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "width" => apply_length(&mut style.width, value, ctx, path, decl, warnings),
        "height" => apply_length(&mut style.height, value, ctx, path, decl, warnings),
        "margin" => apply_sides(&mut style.margin, value, ctx, path, decl, warnings),
        "margin-top" => apply_length(&mut style.margin[0], value, ctx, path, decl, warnings),
        "margin-right" => apply_length(&mut style.margin[1], value, ctx, path, decl, warnings),
        "margin-bottom" => apply_length(&mut style.margin[2], value, ctx, path, decl, warnings),
        "margin-left" => apply_length(&mut style.margin[3], value, ctx, path, decl, warnings),
        "padding" => apply_sides(&mut style.padding, value, ctx, path, decl, warnings),
        "padding-top" => apply_length(&mut style.padding[0], value, ctx, path, decl, warnings),
        "padding-right" => apply_length(&mut style.padding[1], value, ctx, path, decl, warnings),
        "padding-bottom" => apply_length(&mut style.padding[2], value, ctx, path, decl, warnings),
        "padding-left" => apply_length(&mut style.padding[3], value, ctx, path, decl, warnings),
        "border" => apply_border_shorthand(style, [true; 4], value, ctx, path, decl, warnings),
        "border-top" => {
            apply_border_shorthand(style, [true, false, false, false], value, ctx, path, decl, warnings)
        }
        "border-right" => {
            apply_border_shorthand(style, [false, true, false, false], value, ctx, path, decl, warnings)
        }
        "border-bottom" => {
            apply_border_shorthand(style, [false, false, true, false], value, ctx, path, decl, warnings)
        }
        "border-left" => {
            apply_border_shorthand(style, [false, false, false, true], value, ctx, path, decl, warnings)
        }
        "border-width" => {
            let mut sides = [Length::zero(); 4];
            apply_sides(&mut sides, value, ctx, path, decl, warnings);
            for (i, side) in sides.iter().enumerate() {
                if let Some(px) = side.resolve_opt(None) {
                    style.border_width[i] = px;
                }
            }
        }
        "border-top-width" => apply_border_width(&mut style.border_width[0], value, ctx, path, decl, warnings),
        "border-right-width" => apply_border_width(&mut style.border_width[1], value, ctx, path, decl, warnings),
        "border-bottom-width" => apply_border_width(&mut style.border_width[2], value, ctx, path, decl, warnings),
        "border-left-width" => apply_border_width(&mut style.border_width[3], value, ctx, path, decl, warnings),
        "border-color" => match parse_color(value) {
            Some(c) => style.border_color = c,
            None => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "line-height" => apply_line_height(style, &lower, ctx, path, decl, warnings),
        "color" => match parse_color(value) {
            Some(c) => style.color = c,
            None => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "background-color" => match parse_color(value) {
            Some(c) => style.background = c,
            None => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "background" => {
            if let Some(url) = extract_url(value) {
                style.background_image = Some(url);
            }
            if let Some(color) = value
                .split_whitespace()
                .find_map(parse_color)
            {
                style.background = color;
            } else if extract_url(value).is_none() {
                warn(warnings, StyleWarningKind::BadValue, path, decl);
            }
        }
        "background-image" => match extract_url(value) {
            Some(url) => style.background_image = Some(url),
            None if lower == "none" => style.background_image = None,
            None => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "text-align" => match lower.as_str() {
            "left" | "start" | "justify" => style.text_align = TextAlign::Left,
            "center" => style.text_align = TextAlign::Center,
            "right" | "end" => style.text_align = TextAlign::Right,
            _ => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "position" => match lower.as_str() {
            "static" => style.position = Position::Static,
            "relative" => style.position = Position::Relative,
            "absolute" => style.position = Position::Absolute,
            "fixed" => style.position = Position::Fixed,
            "sticky" => style.position = Position::Sticky,
            _ => warn(warnings, StyleWarningKind::BadValue, path, decl),
        },
        "order" => style.order_set = true,
        "box-sizing" => {} // always border-box in this dialect
        name if COSMETIC_PROPERTIES.contains(&name) => {}
        name if UNSUPPORTED_PROPERTIES.contains(&name) => {
            warn(warnings, StyleWarningKind::UnsupportedProperty, path, decl)
        }
        _ => warn(warnings, StyleWarningKind::UnknownProperty, path, decl),
    }
}

/// Properties with no effect on this box model, accepted silently.
const COSMETIC_PROPERTIES: &[&str] = &[
    "font-family",
    "font-weight",
    "font-style",
    "border-radius",
    "border-style",
    "border-top-style",
    "border-right-style",
    "border-bottom-style",
    "border-left-style",
    "box-shadow",
    "text-decoration",
    "text-transform",
    "letter-spacing",
    "word-spacing",
    "list-style",
    "list-style-type",
    "cursor",
    "outline",
    "overflow",
    "overflow-x",
    "overflow-y",
    "object-fit",
    "object-position",
    "opacity",
    "z-index",
    "vertical-align",
    "white-space",
    "transition",
    "animation",
    "filter",
];

/// Properties that would change layout but sit outside the supported subset;
/// ignoring them is surfaced as a warning so divergence is visible.
const UNSUPPORTED_PROPERTIES: &[&str] = &[
    "min-width",
    "min-height",
    "max-width",
    "max-height",
    "font",
    "grid-auto-rows",
    "grid-auto-columns",
    "grid-auto-flow",
    "grid-column",
    "grid-row",
    "grid-area",
    "place-items",
    "place-content",
    "justify-items",
    "justify-self",
    "align-content",
    "transform",
    "float",
    "top",
    "right",
    "bottom",
    "left",
    "inset",
];

fn parse_direction(token: &str) -> Option<FlexDirection> {
    match token {
        "row" => Some(FlexDirection::Row),
        "row-reverse" => Some(FlexDirection::RowReverse),
        "column" => Some(FlexDirection::Column),
        "column-reverse" => Some(FlexDirection::ColumnReverse),
        _ => None,
    }
}

fn parse_wrap(token: &str) -> Option<FlexWrap> {
    match token {
        "nowrap" => Some(FlexWrap::Nowrap),
        "wrap" => Some(FlexWrap::Wrap),
        "wrap-reverse" => Some(FlexWrap::WrapReverse),
        _ => None,
    }
}

fn parse_align(token: &str) -> Option<AlignItems> {
    match token {
        "stretch" => Some(AlignItems::Stretch),
        "flex-start" | "start" => Some(AlignItems::FlexStart),
        "center" => Some(AlignItems::Center),
        "flex-end" | "end" => Some(AlignItems::FlexEnd),
        _ => None,
    }
}

/// CSS `flex` shorthand: `none`, `auto`, a bare grow factor, or
/// `grow shrink? basis?`. A bare `flex: N` means basis 0, not auto.
fn apply_flex_shorthand<S: Scalar>(
    style: &mut ComputedStyle<S>,
    lower: &str,
    ctx: &LengthContext<S>,
    path: &str,
    decl: &Declaration,
    warnings: &mut Vec<StyleWarning>,
) {
    match lower {
        "none" => {
            style.flex_grow = S::zero();
            style.flex_shrink = S::zero();
            style.flex_basis = Length::Auto;
            return;
        }
        "auto" => {
            style.flex_grow = S::one();
            style.flex_shrink = S::one();
            style.flex_basis = Length::Auto;
            return;
        }
        "initial" => {
            style.flex_grow = S::zero();
            style.flex_shrink = S::one();
            style.flex_basis = Length::Auto;
            return;
        }
        _ => {}
    }
    let parts: Vec<&str> = lower.split_whitespace().collect();
    let grow = match parts.first().and_then(|p| parse_number::<S>(p)) {
        Some(g) => g,
        None => {
            warn(warnings, StyleWarningKind::BadValue, path, decl);
            return;
        }
    };
    style.flex_grow = grow;
    style.flex_shrink = S::one();
    style.flex_basis = Length::zero();
    match parts.len() {
        1 => {}
        2 => {
            // Either `grow shrink` or `grow basis`.
            if let Some(shrink) = parse_number::<S>(parts[1]) {
                if parts[1].chars().all(|c| c.is_ascii_digit() || c == '.') {
                    style.flex_shrink = shrink;
                    return;
                }
            }
            match parse_length(parts[1], ctx) {
                Some(b) => style.flex_basis = b,
                None => warn(warnings, StyleWarningKind::BadValue, path, decl),
            }
        }
        3 => {
            match parse_number::<S>(parts[1]) {
                Some(s) => style.flex_shrink = s,
                None => warn(warnings, StyleWarningKind::BadValue, path, decl),
            }
            match parse_length(parts[2], ctx) {
                Some(b) => style.flex_basis = b,
                None => warn(warnings, StyleWarningKind::BadValue, path, decl),
            }
        }
        _ => warn(warnings, StyleWarningKind::BadValue, path, decl),
    }
}

fn apply_border_shorthand<S: Scalar>(
    style: &mut ComputedStyle<S>,
    sides: [bool; 4],
    value: &str,
    ctx: &LengthContext<S>,
    path: &str,
    decl: &Declaration,
    warnings: &mut Vec<StyleWarning>,
) {
    if value.trim().eq_ignore_ascii_case("none") {
        for (i, apply) in sides.iter().enumerate() {
            if *apply {
                style.border_width[i] = S::zero();
            }
        }
        return;
    }
    let mut width: Option<S> = None;
    let mut color: Option<Rgb> = None;
    let mut recognized = false;
    for token in value.split_whitespace() {
        if let Some(Length::Px(w)) = parse_length(token, ctx) {
            width = Some(w);
            recognized = true;
        } else if let Some(c) = parse_color(token) {
            color = Some(c);
            recognized = true;
        } else if matches!(
            token.to_ascii_lowercase().as_str(),
            "solid" | "dashed" | "dotted" | "double" | "groove" | "ridge" | "inset" | "outset"
        ) {
            recognized = true;
        }
    }
    if !recognized {
        warn(warnings, StyleWarningKind::BadValue, path, decl);
        return;
    }
    // A border shorthand without an explicit width still draws at the
    // browser "medium" width; 3px matches that convention.
    let w = width.unwrap_or_else(|| S::of(3.0));
    for (i, apply) in sides.iter().enumerate() {
        if *apply {
            style.border_width[i] = w;
        }
    }
    if let Some(c) = color {
        style.border_color = c;
    }
}

fn apply_border_width<S: Scalar>(
    slot: &mut S,
    value: &str,
    ctx: &LengthContext<S>,
    path: &str,
    decl: &Declaration,
    warnings: &mut Vec<StyleWarning>,
) {
    match parse_length(value, ctx) {
        Some(Length::Px(w)) => *slot = w,
        _ => warn(warnings, StyleWarningKind::BadValue, path, decl),
    }
}

fn apply_line_height<S: Scalar>(
    style: &mut ComputedStyle<S>,
    lower: &str,
    ctx: &LengthContext<S>,
    path: &str,
    decl: &Declaration,
    warnings: &mut Vec<StyleWarning>,
) {
    if lower == "normal" {
        style.line_height = S::of(1.2);
        return;
    }
    if let Ok(n) = lower.parse::<f64>() {
        if n.is_finite() && n >= 0.0 {
            style.line_height = S::of(n);
            return;
        }
    }
    match parse_length(lower, ctx) {
        Some(Length::Px(px)) if style.font_size > S::zero() => {
            style.line_height = px / style.font_size;
        }
        Some(Length::Percent(p)) => style.line_height = p / S::of(100.0),
        _ => warn(warnings, StyleWarningKind::BadValue, path, decl),
    }
}

fn apply_length<S: Scalar>(
    slot: &mut Length<S>,
    value: &str,
    ctx: &LengthContext<S>,
    path: &str,
    decl: &Declaration,
    warnings: &mut Vec<StyleWarning>,
) {
    match parse_length(value, ctx) {
        Some(l) => *slot = l,
        None => warn(warnings, StyleWarningKind::BadValue, path, decl),
    }
}

/// Shorthand expansion for margin/padding: 1 to 4 values in TRBL order.
fn apply_sides<S: Scalar>(
    sides: &mut [Length<S>; 4],
    value: &str,
    ctx: &LengthContext<S>,
    path: &str,
    decl: &Declaration,
    warnings: &mut Vec<StyleWarning>,
) {
    let parsed: Option<Vec<Length<S>>> = value
        .split_whitespace()
        .map(|t| parse_length(t, ctx))
        .collect();
    let Some(values) = parsed.filter(|v| (1..=4).contains(&v.len())) else {
        warn(warnings, StyleWarningKind::BadValue, path, decl);
        return;
    };
    *sides = match values.as_slice() {
        [a] => [*a; 4],
        [v, h] => [*v, *h, *v, *h],
        [t, h, b] => [*t, *h, *b, *h],
        [t, r, b, l] => [*t, *r, *b, *l],
        _ => unreachable!(),
    };
}

fn extract_url(value: &str) -> Option<String> {
    let lower = value.to_ascii_lowercase();
    let start = lower.find("url(")?;
    let rest = &value[start + 4..];
    let end = rest.find(')')?;
    let url = rest[..end].trim().trim_matches(|c| c == '"' || c == '\'');
    Some(url.to_string())
}

fn warn(warnings: &mut Vec<StyleWarning>, kind: StyleWarningKind, path: &str, decl: &Declaration) {
    warnings.push(StyleWarning {
        kind,
        node_path: path.to_string(),
        property: decl.name.clone(),
        detail: decl.value.clone(),
    });
}
