#!/usr/bin/env python3
"""Reference layout for the restricted flex/grid document dialect.

A from-scratch implementation of the dialect's box model, kept independent
of the Rust engine so the two can be checked against each other. It parses
a document, resolves styles, lays out the body subtree, and reports every
border box plus the rendered document height.

Usage: layout_oracle.py DOC.html WIDTH HEIGHT
"""

import json
import math
import sys

VOID_TAGS = {"img", "meta", "br", "hr"}
RAW_TEXT_TAGS = {"style", "title"}

CHAR_ADVANCE_RATIO = 0.6
ROOT_FONT_SIZE = 16.0

AUTO = ("auto",)


class Node:
    def __init__(self, tag):
        self.tag = tag
        self.attrs = {}
        self.children = []
        self.text = ""
        self._parts = []


def decode_entities(text):
    for entity, char in (
        ("&lt;", "<"),
        ("&gt;", ">"),
        ("&quot;", '"'),
        ("&#39;", "'"),
        ("&amp;", "&"),
    ):
        text = text.replace(entity, char)
    return text


def collapse_whitespace(text):
    return " ".join(text.split())


def parse_tag_interior(inner):
    i = 0
    n = len(inner)
    while i < n and not inner[i].isspace():
        i += 1
    tag = inner[:i].lower()
    attrs = {}
    while i < n:
        while i < n and inner[i].isspace():
            i += 1
        if i >= n:
            break
        start = i
        while i < n and inner[i] not in "=" and not inner[i].isspace():
            i += 1
        name = inner[start:i].lower()
        while i < n and inner[i].isspace():
            i += 1
        value = ""
        if i < n and inner[i] == "=":
            i += 1
            while i < n and inner[i].isspace():
                i += 1
            if i < n and inner[i] in "\"'":
                quote = inner[i]
                i += 1
                start = i
                while i < n and inner[i] != quote:
                    i += 1
                value = inner[start:i]
                i += 1
            else:
                start = i
                while i < n and not inner[i].isspace():
                    i += 1
                value = inner[start:i]
        if name:
            attrs.setdefault(name, decode_entities(value))
    return tag, attrs


def parse_html(src):
    """Returns the root element and the concatenated style text."""
    pos = 0
    n = len(src)
    root = None
    stack = []
    styles = []

    def finish(node):
        node.text = collapse_whitespace(decode_entities("".join(node._parts)))

    def append_text(chunk):
        if stack:
            stack[-1]._parts.append(chunk)

    while pos < n:
        lt = src.find("<", pos)
        if lt < 0:
            append_text(src[pos:])
            break
        if lt > pos:
            append_text(src[pos:lt])
        if src.startswith("<!--", lt):
            end = src.find("-->", lt + 4)
            pos = n if end < 0 else end + 3
            continue
        if src.startswith("<!", lt):
            end = src.find(">", lt)
            pos = n if end < 0 else end + 1
            continue
        if src.startswith("</", lt):
            end = src.find(">", lt)
            closing = src[lt + 2 : end].strip().lower()
            while stack:
                top = stack.pop()
                finish(top)
                if top.tag == closing:
                    break
            pos = end + 1
            continue
        end = src.find(">", lt)
        inner = src[lt + 1 : end].strip()
        self_closing = inner.endswith("/")
        if self_closing:
            inner = inner[:-1].rstrip()
        tag, attrs = parse_tag_interior(inner)
        node = Node(tag)
        node.attrs = attrs
        if stack:
            stack[-1].children.append(node)
        elif root is None:
            root = node
        pos = end + 1
        if tag in RAW_TEXT_TAGS and not self_closing:
            close = src.find("</" + tag, pos)
            raw = src[pos:close] if close >= 0 else src[pos:]
            if tag == "style":
                styles.append(raw)
            node.text = collapse_whitespace(raw)
            if close < 0:
                break
            gt = src.find(">", close)
            pos = n if gt < 0 else gt + 1
            continue
        if tag in VOID_TAGS or self_closing:
            finish(node)
            continue
        stack.append(node)
    while stack:
        finish(stack.pop())
    return root, "\n".join(styles)


def blank_css_comments(css):
    out = []
    i = 0
    n = len(css)
    while i < n:
        if css.startswith("/*", i):
            end = css.find("*/", i + 2)
            end = n if end < 0 else end + 2
            out.append(" " * (end - i))
            i = end
        else:
            out.append(css[i])
            i += 1
    return "".join(out)


def split_outside_parens(text, sep):
    chunks = []
    depth = 0
    start = 0
    for i, c in enumerate(text):
        if c == "(":
            depth += 1
        elif c == ")":
            depth = max(0, depth - 1)
        elif c == sep and depth == 0:
            chunks.append(text[start:i])
            start = i + 1
    chunks.append(text[start:])
    return chunks


def parse_declarations(text):
    decls = []
    for chunk in split_outside_parens(text, ";"):
        chunk = chunk.strip()
        if not chunk or ":" not in chunk:
            continue
        name, _, value = chunk.partition(":")
        name = name.strip().lower()
        value = value.strip()
        if value.lower().endswith("!important"):
            value = value[: -len("!important")].rstrip()
        if name and value:
            decls.append((name, value))
    return decls


def parse_selector_part(token):
    if token == "*":
        return ("*", "")
    kind = "tag"
    name = token
    if token.startswith("."):
        kind, name = "class", token[1:]
    elif token.startswith("#"):
        kind, name = "id", token[1:]
    if not name or not all(c.isalnum() or c in "-_" for c in name):
        return None
    return (kind, name if kind != "tag" else name.lower())


def parse_selector(raw):
    parts = []
    for token in raw.split():
        part = parse_selector_part(token)
        if part is None:
            return None
        parts.append(part)
    return parts or None


def parse_stylesheet(css):
    """Returns (selector_parts, order, declarations) triples."""
    src = blank_css_comments(css)
    rules = []
    pos = 0
    order = 0
    n = len(src)
    while pos < n:
        while pos < n and src[pos].isspace():
            pos += 1
        if pos >= n:
            break
        if src[pos] == "@":
            semi = src.find(";", pos)
            brace = src.find("{", pos)
            if brace < 0 or (0 <= semi < brace):
                pos = n if semi < 0 else semi + 1
                continue
            depth = 0
            while pos < n:
                if src[pos] == "{":
                    depth += 1
                elif src[pos] == "}":
                    depth -= 1
                    if depth == 0:
                        pos += 1
                        break
                pos += 1
            continue
        brace = src.find("{", pos)
        if brace < 0:
            break
        close = src.find("}", brace + 1)
        if close < 0:
            break
        decls = parse_declarations(src[brace + 1 : close])
        for raw in src[pos:brace].split(","):
            raw = raw.strip()
            if not raw:
                continue
            parts = parse_selector(raw)
            if parts is not None:
                rules.append((parts, order, decls))
                order += 1
        pos = close + 1
    return rules


def part_matches(part, node):
    kind, name = part
    if kind == "*":
        return True
    if kind == "tag":
        return node.tag == name
    if kind == "class":
        return name in node.attrs.get("class", "").split()
    return node.attrs.get("id") == name


def selector_matches(parts, node, ancestors):
    if not part_matches(parts[-1], node):
        return False
    need = list(parts[:-1])
    i = 0
    for anc in ancestors:
        if i >= len(need):
            return True
        if part_matches(need[i], anc):
            i += 1
    return i >= len(need)


def specificity(parts):
    ids = sum(1 for k, _ in parts if k == "id")
    classes = sum(1 for k, _ in parts if k == "class")
    tags = sum(1 for k, _ in parts if k == "tag")
    return (ids, classes, tags)


def parse_float(token):
    try:
        v = float(token)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def split_number_unit(token):
    i = 0
    n = len(token)
    while i < n and (token[i].isdigit() or token[i] == "." or (i == 0 and token[i] in "+-")):
        i += 1
    if i == 0:
        return None
    value = parse_float(token[:i])
    if value is None:
        return None
    return value, token[i:].strip().lower()


def parse_length(token, font_size, viewport):
    t = token.strip()
    if t.lower() == "auto":
        return AUTO
    split = split_number_unit(t)
    if split is None:
        return None
    value, unit = split
    if value < 0:
        return None
    if unit in ("px", ""):
        return ("px", value)
    if unit == "%":
        return ("%", value)
    if unit == "em":
        return ("px", value * font_size)
    if unit == "rem":
        return ("px", value * ROOT_FONT_SIZE)
    if unit == "vw" and viewport:
        return ("px", value / 100.0 * viewport[0])
    if unit == "vh" and viewport:
        return ("px", value / 100.0 * viewport[1])
    return None


def length_resolve(length, basis):
    if length[0] == "px":
        return length[1]
    if length[0] == "%":
        return length[1] / 100.0 * basis
    return None


def length_resolve_opt(length, basis):
    if length[0] == "px":
        return length[1]
    if length[0] == "%" and basis is not None:
        return length[1] / 100.0 * basis
    return None


def split_track_tokens(value):
    tokens = []
    current = []
    depth = 0
    for c in value:
        if c == "(":
            depth += 1
            current.append(c)
        elif c == ")":
            depth = max(0, depth - 1)
            current.append(c)
        elif c.isspace() and depth == 0:
            if current:
                tokens.append("".join(current))
                current = []
        else:
            current.append(c)
    if current:
        tokens.append("".join(current))
    return tokens


def parse_track(token, font_size, viewport):
    t = token.strip()
    if t.lower() == "auto":
        return ("auto",)
    split = split_number_unit(t)
    if split is not None and split[1] == "fr":
        return None if split[0] < 0 else ("fr", split[0])
    length = parse_length(t, font_size, viewport)
    if length is None:
        return None
    if length == AUTO:
        return ("auto",)
    return length


def parse_track_list(value, font_size, viewport):
    tracks = []
    for token in split_track_tokens(value):
        if token.startswith("repeat(") and token.endswith(")"):
            body = token[len("repeat(") : -1]
            count, _, rest = body.partition(",")
            try:
                count = int(count.strip())
            except ValueError:
                return None
            if count <= 0 or count > 1000:
                return None
            inner = [parse_track(t, font_size, viewport) for t in split_track_tokens(rest)]
            if not inner or any(t is None for t in inner):
                return None
            tracks.extend(inner * count)
        else:
            track = parse_track(token, font_size, viewport)
            if track is None:
                return None
            tracks.append(track)
    return tracks or None


class Style:
    def __init__(self):
        self.declared_display = None
        self.display = "leaf"
        self.flex_direction = "row"
        self.justify = "flex-start"
        self.align_items = "stretch"
        self.align_self = None
        self.row_gap = ("px", 0.0)
        self.column_gap = ("px", 0.0)
        self.flex_basis = AUTO
        self.flex_grow = 0.0
        self.flex_shrink = 1.0
        self.grid_cols = []
        self.grid_rows = []
        self.width = AUTO
        self.height = AUTO
        self.margin = [("px", 0.0)] * 4
        self.padding = [("px", 0.0)] * 4
        self.border = [0.0] * 4
        self.font_size = ROOT_FONT_SIZE
        self.line_height = 1.2

    def inherit_from(self, parent):
        self.font_size = parent.font_size
        self.line_height = parent.line_height


JUSTIFY_KEYWORDS = {
    "flex-start": "flex-start",
    "start": "flex-start",
    "left": "flex-start",
    "center": "center",
    "flex-end": "flex-end",
    "end": "flex-end",
    "right": "flex-end",
    "space-between": "space-between",
    "space-around": "space-around",
    "space-evenly": "space-evenly",
}

ALIGN_KEYWORDS = {
    "stretch": "stretch",
    "flex-start": "flex-start",
    "start": "flex-start",
    "center": "center",
    "flex-end": "flex-end",
    "end": "flex-end",
}

DIRECTIONS = {"row", "row-reverse", "column", "column-reverse"}

BORDER_STYLE_WORDS = {
    "solid", "dashed", "dotted", "double", "groove", "ridge", "inset", "outset",
}


def expand_sides(values):
    if len(values) == 1:
        a = values[0]
        return [a, a, a, a]
    if len(values) == 2:
        v, h = values
        return [v, h, v, h]
    if len(values) == 3:
        t, h, b = values
        return [t, h, b, h]
    return list(values)


def apply_declaration(style, name, value, viewport):
    lower = value.strip().lower()
    fs = style.font_size

    def length(token):
        return parse_length(token, fs, viewport)

    if name == "display":
        style.declared_display = lower
    elif name == "flex-direction":
        if lower in DIRECTIONS:
            style.flex_direction = lower
    elif name == "flex-flow":
        for token in lower.split():
            if token in DIRECTIONS:
                style.flex_direction = token
    elif name == "justify-content":
        if lower in JUSTIFY_KEYWORDS:
            style.justify = JUSTIFY_KEYWORDS[lower]
    elif name == "align-items":
        if lower in ALIGN_KEYWORDS:
            style.align_items = ALIGN_KEYWORDS[lower]
    elif name == "align-self":
        if lower == "auto":
            style.align_self = None
        elif lower in ALIGN_KEYWORDS:
            style.align_self = ALIGN_KEYWORDS[lower]
    elif name in ("gap", "grid-gap"):
        parts = [length(t) for t in value.split()]
        if len(parts) == 1 and parts[0] not in (None, AUTO):
            style.row_gap = style.column_gap = parts[0]
        elif len(parts) == 2 and all(p not in (None, AUTO) for p in parts):
            style.row_gap, style.column_gap = parts
    elif name in ("row-gap", "grid-row-gap"):
        parsed = length(value)
        if parsed is not None:
            style.row_gap = parsed
    elif name in ("column-gap", "grid-column-gap"):
        parsed = length(value)
        if parsed is not None:
            style.column_gap = parsed
    elif name == "flex":
        apply_flex_shorthand(style, lower, fs, viewport)
    elif name == "flex-grow":
        v = parse_float(lower)
        if v is not None and v >= 0:
            style.flex_grow = v
    elif name == "flex-shrink":
        v = parse_float(lower)
        if v is not None and v >= 0:
            style.flex_shrink = v
    elif name == "flex-basis":
        if lower == "content":
            style.flex_basis = AUTO
        else:
            parsed = length(value)
            if parsed is not None:
                style.flex_basis = parsed
    elif name == "grid-template-columns":
        tracks = parse_track_list(value, fs, viewport)
        if tracks:
            style.grid_cols = tracks
    elif name == "grid-template-rows":
        tracks = parse_track_list(value, fs, viewport)
        if tracks:
            style.grid_rows = tracks
    elif name == "width":
        parsed = length(value)
        if parsed is not None:
            style.width = parsed
    elif name == "height":
        parsed = length(value)
        if parsed is not None:
            style.height = parsed
    elif name in ("margin", "padding"):
        parts = [length(t) for t in value.split()]
        if 1 <= len(parts) <= 4 and all(p is not None for p in parts):
            setattr(style, name, expand_sides(parts))
    elif name.startswith("margin-") or name.startswith("padding-"):
        prop, _, side = name.partition("-")
        index = {"top": 0, "right": 1, "bottom": 2, "left": 3}.get(side)
        parsed = length(value)
        if index is not None and parsed is not None:
            getattr(style, prop)[index] = parsed
    elif name in ("border", "border-top", "border-right", "border-bottom", "border-left"):
        sides = [True] * 4
        if name != "border":
            side = name[len("border-") :]
            index = {"top": 0, "right": 1, "bottom": 2, "left": 3}[side]
            sides = [i == index for i in range(4)]
        apply_border_shorthand(style, sides, value, fs, viewport)
    elif name == "border-width":
        parts = [length(t) for t in value.split()]
        if 1 <= len(parts) <= 4 and all(p is not None for p in parts):
            for i, p in enumerate(expand_sides(parts)):
                if p[0] == "px":
                    style.border[i] = p[1]
    elif name.startswith("border-") and name.endswith("-width"):
        side = name[len("border-") : -len("-width")]
        index = {"top": 0, "right": 1, "bottom": 2, "left": 3}.get(side)
        parsed = length(value)
        if index is not None and parsed is not None and parsed[0] == "px":
            style.border[index] = parsed[1]
    elif name == "line-height":
        if lower == "normal":
            style.line_height = 1.2
            return
        bare = parse_float(lower)
        if bare is not None and bare >= 0:
            style.line_height = bare
            return
        parsed = length(lower)
        if parsed is not None and parsed[0] == "px" and style.font_size > 0:
            style.line_height = parsed[1] / style.font_size
        elif parsed is not None and parsed[0] == "%":
            style.line_height = parsed[1] / 100.0


def apply_flex_shorthand(style, lower, fs, viewport):
    presets = {
        "none": (0.0, 0.0, AUTO),
        "auto": (1.0, 1.0, AUTO),
        "initial": (0.0, 1.0, AUTO),
    }
    if lower in presets:
        style.flex_grow, style.flex_shrink, style.flex_basis = presets[lower]
        return
    parts = lower.split()
    grow = parse_float(parts[0]) if parts else None
    if grow is None or grow < 0:
        return
    style.flex_grow = grow
    style.flex_shrink = 1.0
    style.flex_basis = ("px", 0.0)
    if len(parts) == 2:
        second = parse_float(parts[1])
        if second is not None and all(c.isdigit() or c == "." for c in parts[1]):
            style.flex_shrink = second
            return
        parsed = parse_length(parts[1], fs, viewport)
        if parsed is not None:
            style.flex_basis = parsed
    elif len(parts) == 3:
        shrink = parse_float(parts[1])
        if shrink is not None and shrink >= 0:
            style.flex_shrink = shrink
        parsed = parse_length(parts[2], fs, viewport)
        if parsed is not None:
            style.flex_basis = parsed


def apply_border_shorthand(style, sides, value, fs, viewport):
    if value.strip().lower() == "none":
        for i, apply in enumerate(sides):
            if apply:
                style.border[i] = 0.0
        return
    width = None
    recognized = False
    for token in value.split():
        parsed = parse_length(token, fs, viewport)
        if parsed is not None and parsed != AUTO and parsed[0] == "px":
            width = parsed[1]
            recognized = True
        elif token.lower() in BORDER_STYLE_WORDS or token.startswith("#") or token.isalpha():
            recognized = True
    if not recognized:
        return
    w = 3.0 if width is None else width
    for i, apply in enumerate(sides):
        if apply:
            style.border[i] = w


def finalize_display(style, node):
    container = node.tag in ("body", "div")
    declared = style.declared_display
    if container and declared == "flex":
        style.display = "flex"
    elif container and declared == "grid":
        style.display = "grid"
    elif container:
        if declared is None:
            style.flex_direction = "column"
        style.display = "flex"
    else:
        style.display = "leaf"


def flatten(root):
    """Preorder nodes with paths and ancestor chains, matching the engine."""
    nodes = []

    def walk(node, path, ancestors):
        nodes.append((node, path, list(ancestors)))
        ancestors.append(node)
        for i, child in enumerate(node.children):
            walk(child, "%s/%s[%d]" % (path, child.tag, i), ancestors)
        ancestors.pop()

    walk(root, "html", [])
    return nodes


def resolve_styles(flat, rules, viewport):
    styles = []
    index_of = {id(node): i for i, (node, _, _) in enumerate(flat)}
    for node, _path, ancestors in flat:
        style = Style()
        if ancestors:
            style.inherit_from(styles[index_of[id(ancestors[-1])]])
        matched = []
        for parts, order, decls in rules:
            if selector_matches(parts, node, ancestors):
                matched.append((specificity(parts), order, decls))
        matched.sort(key=lambda m: (m[0], m[1]))
        ordered = [d for _, _, decls in matched for d in decls]
        ordered += parse_declarations(node.attrs.get("style", ""))

        parent_font = styles[index_of[id(ancestors[-1])]].font_size if ancestors else ROOT_FONT_SIZE
        for name, value in ordered:
            if name == "font-size":
                parsed = parse_length(value, parent_font, viewport)
                if parsed is None or parsed == AUTO:
                    continue
                if parsed[0] == "px":
                    style.font_size = parsed[1]
                else:
                    style.font_size = parsed[1] / 100.0 * parent_font
        for name, value in ordered:
            if name != "font-size":
                apply_declaration(style, name, value, viewport)
        finalize_display(style, node)
        styles.append(style)
    return styles


def clamp0(v):
    return v if v > 0 else 0.0


class Frame:
    def __init__(self, margin, padding, border):
        self.margin = margin
        self.padding = padding
        self.border = border

    def h_margins(self):
        return self.margin[1] + self.margin[3]

    def v_margins(self):
        return self.margin[0] + self.margin[2]

    def left_inner(self):
        return self.border[3] + self.padding[3]

    def top_inner(self):
        return self.border[0] + self.padding[0]

    def h_inner(self):
        return self.border[1] + self.border[3] + self.padding[1] + self.padding[3]

    def v_inner(self):
        return self.border[0] + self.border[2] + self.padding[0] + self.padding[2]


class Laid:
    def __init__(self, index, tag, width, height, frame, children):
        self.index = index
        self.tag = tag
        self.width = width
        self.height = height
        self.frame = frame
        self.children = children


class Engine:
    def __init__(self, flat, styles, viewport):
        self.flat = flat
        self.styles = styles
        self.viewport = viewport
        index_of = {id(node): i for i, (node, _, _) in enumerate(flat)}
        self.kids = [
            [index_of[id(child)] for child in node.children] for node, _, _ in flat
        ]

    def node(self, i):
        return self.flat[i][0]

    def style(self, i):
        return self.styles[i]

    def frame(self, i, cb_width):
        style = self.style(i)

        def side(length):
            v = length_resolve_opt(length, cb_width)
            return 0.0 if v is None else v

        return Frame(
            [side(m) for m in style.margin],
            [side(p) for p in style.padding],
            list(style.border),
        )

    def resolve_or_cyclic(self, length, basis, measuring):
        """Percent against an unknown basis: auto while measuring, else 0."""
        if length == AUTO:
            return None
        if length[0] == "px":
            return length[1]
        if basis is not None:
            return length[1] / 100.0 * basis
        return None if measuring else 0.0

    def measure_text(self, text, font_size, line_height, max_width):
        words = text.split()
        if not words:
            return 0.0, 0.0

        def width_of(line):
            return len(line) * CHAR_ADVANCE_RATIO * font_size

        lines = []
        current = words[0]
        for word in words[1:]:
            candidate = current + " " + word
            if max_width is None or width_of(candidate) < max_width:
                current = candidate
            else:
                lines.append(current)
                current = word
        lines.append(current)
        widest = max(width_of(line) for line in lines)
        return widest, len(lines) * line_height * font_size

    def intrinsic_image_size(self, node):
        def attr_dim(name):
            raw = node.attrs.get(name)
            if raw is None:
                return None
            raw = raw.strip()
            if raw.endswith("px"):
                raw = raw[:-2].strip()
            v = parse_float(raw)
            return v if v is not None and v >= 0 else None

        src = node.attrs.get("src", "")
        url_dims = None
        if src.startswith("https://picsum.photos/"):
            parts = src[len("https://picsum.photos/") :].split("/")
            if len(parts) == 2 and parts[0].isdigit() and parts[1].isdigit():
                w, h = int(parts[0]), int(parts[1])
                if w > 0 and h > 0:
                    url_dims = (float(w), float(h))
        elif src.startswith("image_") and src.endswith(".png"):
            bits = src[len("image_") : -len(".png")].split("_")
            if len(bits) == 2 and "x" in bits[1]:
                w, _, h = bits[1].partition("x")
                if bits[0].isdigit() and w.isdigit() and h.isdigit() and int(w) > 0 and int(h) > 0:
                    url_dims = (float(w), float(h))
        w = attr_dim("width")
        h = attr_dim("height")
        if w is None:
            w = url_dims[0] if url_dims else 0.0
        if h is None:
            h = url_dims[1] if url_dims else 0.0
        return w, h

    def layout_box(self, i, width, height, cb_width, measuring):
        node = self.node(i)
        style = self.style(i)
        frame = self.frame(i, cb_width)

        if node.tag == "img":
            iw, ih = self.intrinsic_image_size(node)
            return Laid(
                i,
                node.tag,
                clamp0(width if width is not None else iw + frame.h_inner()),
                clamp0(height if height is not None else ih + frame.v_inner()),
                frame,
                [],
            )
        if style.display == "leaf":
            return self.layout_text_leaf(i, frame, width, height)

        content_w = None if width is None else clamp0(width - frame.h_inner())
        content_h = None if height is None else clamp0(height - frame.v_inner())
        if style.display == "grid":
            dims, children = self.layout_grid(i, content_w, content_h, measuring)
        else:
            dims, children = self.layout_flex(i, content_w, content_h, measuring)
        width = width if width is not None else dims[0] + frame.h_inner()
        height = height if height is not None else dims[1] + frame.v_inner()
        children = [
            (dx + frame.left_inner(), dy + frame.top_inner(), laid)
            for dx, dy, laid in children
        ]
        return Laid(i, node.tag, width, height, frame, children)

    def layout_text_leaf(self, i, frame, width, height):
        node = self.node(i)
        style = self.style(i)
        wrap_limit = None
        if width is not None:
            inner = clamp0(width - frame.h_inner())
            wrap_limit = inner + inner * 1e-9 + 1e-9
        mw, mh = self.measure_text(node.text, style.font_size, style.line_height, wrap_limit)
        width = width if width is not None else mw + frame.h_inner()
        height = height if height is not None else mh + frame.v_inner()
        return Laid(i, node.tag, width, height, frame, [])

    def align_of(self, container_style, child_style):
        return child_style.align_self or container_style.align_items

    def cross_offset(self, align, line_cross, outer):
        if align == "center":
            return (line_cross - outer) / 2.0
        if align == "flex-end":
            return line_cross - outer
        return 0.0

    def layout_flex(self, i, content_w, content_h, measuring):
        style = self.style(i)
        kids = self.kids[i]
        row = style.flex_direction in ("row", "row-reverse")
        main_avail, cross_avail = (
            (content_w, content_h) if row else (content_h, content_w)
        )
        gap_len = style.column_gap if row else style.row_gap
        gap = length_resolve_opt(gap_len, content_w) or 0.0

        if not kids:
            return (content_w or 0.0, content_h or 0.0), []

        items = []
        for ci in kids:
            cs = self.style(ci)
            frame = self.frame(ci, content_w)
            m = frame.margin
            margin_main = (m[3], m[1]) if row else (m[0], m[2])
            margin_cross = (m[0], m[2]) if row else (m[3], m[1])

            basis = None
            if cs.flex_basis != AUTO:
                basis = self.resolve_or_cyclic(cs.flex_basis, main_avail, measuring)
            main_prop = cs.width if row else cs.height
            declared = basis
            if declared is None:
                declared = self.resolve_or_cyclic(main_prop, main_avail, measuring)

            cross_prop = cs.height if row else cs.width
            cross_def = self.resolve_or_cyclic(cross_prop, cross_avail, measuring)
            if (
                not row
                and cross_def is None
                and self.align_of(style, cs) == "stretch"
                and content_w is not None
            ):
                cross_def = clamp0(content_w - (m[3] + m[1]))

            if declared is not None:
                base = declared
            elif row:
                base = self.layout_box(ci, None, None, None, True).width
            else:
                base = self.layout_box(ci, cross_def, None, content_w, measuring).height

            items.append(
                {
                    "idx": ci,
                    "margin_main": margin_main,
                    "margin_cross": margin_cross,
                    "grow": cs.flex_grow,
                    "shrink": cs.flex_shrink,
                    "base": base,
                    "main": base,
                    "cross_def": cross_def,
                    "laid": None,
                }
            )

        n = len(items)
        gaps_total = gap * (n - 1)
        total_outer = sum(
            it["base"] + it["margin_main"][0] + it["margin_main"][1] for it in items
        ) + gaps_total

        leftover = 0.0
        if main_avail is not None:
            free = main_avail - total_outer
            sum_grow = sum(it["grow"] for it in items)
            if free > 0 and sum_grow > 0:
                for it in items:
                    it["main"] = it["base"] + free * it["grow"] / sum_grow
            elif free < 0:
                sum_scaled = sum(it["shrink"] * it["base"] for it in items)
                if sum_scaled > 0:
                    for it in items:
                        it["main"] = clamp0(
                            it["base"] + free * (it["shrink"] * it["base"]) / sum_scaled
                        )
            used = sum(
                it["main"] + it["margin_main"][0] + it["margin_main"][1] for it in items
            ) + gaps_total
            leftover = main_avail - used

        for it in items:
            if row:
                it["laid"] = self.layout_box(
                    it["idx"], it["main"], it["cross_def"], content_w, measuring
                )
            else:
                it["laid"] = self.layout_box(
                    it["idx"], it["cross_def"], it["main"], content_w, measuring
                )

        def laid_cross(it):
            return it["laid"].height if row else it["laid"].width

        def laid_main(it):
            return it["laid"].width if row else it["laid"].height

        def cross_margins(it):
            return it["margin_cross"][0] + it["margin_cross"][1]

        if cross_avail is not None:
            line_cross = cross_avail
        else:
            line_cross = max(laid_cross(it) + cross_margins(it) for it in items)

        if row:
            for it in items:
                cs = self.style(it["idx"])
                if (
                    it["cross_def"] is None
                    and cs.height == AUTO
                    and self.align_of(style, cs) == "stretch"
                ):
                    target = clamp0(line_cross - cross_margins(it))
                    if target != laid_cross(it):
                        it["laid"] = self.layout_box(
                            it["idx"], it["main"], target, content_w, measuring
                        )

        if main_avail is not None:
            main_size = main_avail
        else:
            main_size = sum(
                it["main"] + it["margin_main"][0] + it["margin_main"][1] for it in items
            ) + gaps_total

        lead, extra = self.justify_spacing(style.justify, leftover, n)
        reverse = style.flex_direction.endswith("-reverse")
        cursor = lead
        placed = []
        for it in items:
            cs = self.style(it["idx"])
            main_sz = laid_main(it)
            cross_outer = laid_cross(it) + cross_margins(it)
            main_pos = cursor + it["margin_main"][0]
            if reverse:
                main_pos = main_size - (main_pos + main_sz)
            off = (
                self.cross_offset(self.align_of(style, cs), line_cross, cross_outer)
                + it["margin_cross"][0]
            )
            dx, dy = (main_pos, off) if row else (off, main_pos)
            cursor += main_sz + it["margin_main"][0] + it["margin_main"][1] + gap + extra
            placed.append((dx, dy, it["laid"]))

        dims = (main_size, line_cross) if row else (line_cross, main_size)
        return dims, placed

    def justify_spacing(self, justify, leftover, n):
        if n == 0:
            return 0.0, 0.0
        positive = leftover > 0
        if justify == "center":
            return leftover / 2.0, 0.0
        if justify == "flex-end":
            return leftover, 0.0
        if justify == "space-between":
            if positive and n > 1:
                return 0.0, leftover / (n - 1)
            return 0.0, 0.0
        if justify == "space-around":
            if positive:
                return leftover / (2 * n), leftover / n
            return leftover / 2.0, 0.0
        if justify == "space-evenly":
            if positive:
                return leftover / (n + 1), leftover / (n + 1)
            return leftover / 2.0, 0.0
        return 0.0, 0.0

    def classify_track(self, track, axis_size, measuring):
        if track[0] == "px":
            return ("fixed", track[1])
        if track[0] == "fr":
            return ("fr", track[1])
        if track == ("auto",):
            return ("auto",)
        if axis_size is not None:
            return ("fixed", track[1] / 100.0 * axis_size)
        return ("auto",) if measuring else ("fixed", 0.0)

    def size_tracks(self, specs, content_max, axis_size, gap):
        sizes = [
            spec[1] if spec[0] == "fixed" else (content_max[i] if spec[0] == "auto" else 0.0)
            for i, spec in enumerate(specs)
        ]
        fr_total = sum(spec[1] for spec in specs if spec[0] == "fr")
        if fr_total > 0:
            if axis_size is not None:
                gaps = gap * max(0, len(specs) - 1)
                used = sum(sizes) + gaps
                leftover = clamp0(axis_size - used)
                for i, spec in enumerate(specs):
                    if spec[0] == "fr":
                        sizes[i] = leftover * spec[1] / fr_total
            else:
                for i, spec in enumerate(specs):
                    if spec[0] == "fr":
                        sizes[i] = content_max[i]
        return sizes

    def track_positions(self, sizes, gap):
        positions = []
        cursor = 0.0
        for i, size in enumerate(sizes):
            if i > 0:
                cursor += gap
            positions.append(cursor)
            cursor += size
        return positions

    def layout_grid(self, i, content_w, content_h, measuring):
        style = self.style(i)
        kids = self.kids[i]
        n = len(kids)

        cols_template = style.grid_cols or [("auto",)]
        ncols = len(cols_template)
        nrows = max(len(style.grid_rows), (n + ncols - 1) // ncols)
        rows_template = list(style.grid_rows)
        while len(rows_template) < nrows:
            rows_template.append(("auto",))

        col_gap = length_resolve_opt(style.column_gap, content_w) or 0.0
        row_gap = length_resolve_opt(style.row_gap, content_w) or 0.0

        col_specs = [self.classify_track(t, content_w, measuring) for t in cols_template]
        row_specs = [self.classify_track(t, content_h, measuring) for t in rows_template]

        col_max = [0.0] * ncols
        for k, ci in enumerate(kids):
            c = k % ncols
            needs_content = col_specs[c][0] == "auto" or (
                col_specs[c][0] == "fr" and content_w is None
            )
            if not needs_content:
                continue
            frame = self.frame(ci, content_w)
            probe = self.layout_box(ci, None, None, None, True)
            outer = probe.width + frame.margin[1] + frame.margin[3]
            if outer > col_max[c]:
                col_max[c] = outer
        col_sizes = self.size_tracks(col_specs, col_max, content_w, col_gap)

        cells = []
        for k, ci in enumerate(kids):
            col = k % ncols
            rowi = k // ncols
            cs = self.style(ci)
            frame = self.frame(ci, content_w)
            h_margins = frame.margin[1] + frame.margin[3]
            v_margins = frame.margin[0] + frame.margin[2]
            w_def = self.resolve_or_cyclic(cs.width, content_w, measuring)
            item_w = w_def if w_def is not None else clamp0(col_sizes[col] - h_margins)
            h_def = self.resolve_or_cyclic(cs.height, content_h, measuring)
            laid = self.layout_box(ci, item_w, h_def, content_w, measuring)
            cells.append(
                {
                    "idx": ci,
                    "col": col,
                    "row": rowi,
                    "v_margins": v_margins,
                    "margin_left": frame.margin[3],
                    "margin_top": frame.margin[0],
                    "height_auto": h_def is None and cs.height == AUTO,
                    "stretch": self.align_of(style, cs) == "stretch",
                    "laid": laid,
                    "item_w": item_w,
                }
            )

        row_max = [0.0] * nrows
        for cell in cells:
            outer = cell["laid"].height + cell["v_margins"]
            if outer > row_max[cell["row"]]:
                row_max[cell["row"]] = outer
        row_sizes = self.size_tracks(row_specs, row_max, content_h, row_gap)

        for cell in cells:
            if cell["height_auto"] and cell["stretch"]:
                target = clamp0(row_sizes[cell["row"]] - cell["v_margins"])
                if target != cell["laid"].height:
                    cell["laid"] = self.layout_box(
                        cell["idx"], cell["item_w"], target, content_w, measuring
                    )

        col_pos = self.track_positions(col_sizes, col_gap)
        row_pos = self.track_positions(row_sizes, row_gap)
        placed = []
        for cell in cells:
            cs = self.style(cell["idx"])
            outer_h = cell["laid"].height + cell["v_margins"]
            dy = (
                row_pos[cell["row"]]
                + self.cross_offset(
                    self.align_of(style, cs), row_sizes[cell["row"]], outer_h
                )
                + cell["margin_top"]
            )
            dx = col_pos[cell["col"]] + cell["margin_left"]
            placed.append((dx, dy, cell["laid"]))

        def axis_extent(sizes, gap):
            return sum(sizes) + gap * max(0, len(sizes) - 1)

        dims = (
            content_w if content_w is not None else axis_extent(col_sizes, col_gap),
            content_h if content_h is not None else axis_extent(row_sizes, row_gap),
        )
        return dims, placed


def lay_out(src, vw, vh):
    root, css = parse_html(src)
    if root is None:
        raise ValueError("no root element")
    rules = parse_stylesheet(css)
    flat = flatten(root)
    styles = resolve_styles(flat, rules, (vw, vh))
    engine = Engine(flat, styles, (vw, vh))

    body_index = next(
        (i for i, (node, _, _) in enumerate(flat) if node.tag == "body"), None
    )
    if body_index is None:
        raise ValueError("no body element")

    style = styles[body_index]
    frame = engine.frame(body_index, vw)
    width = length_resolve(style.width, vw)
    if width is None:
        width = clamp0(vw - frame.h_margins())
    height = length_resolve(style.height, vh)
    laid = engine.layout_box(body_index, width, height, vw, False)

    boxes = []

    def emit(laid, x, y):
        boxes.append(
            {
                "path": flat[laid.index][1],
                "tag": laid.tag,
                "x": x,
                "y": y,
                "width": laid.width,
                "height": laid.height,
            }
        )
        for dx, dy, child in laid.children:
            emit(child, x + dx, y + dy)

    emit(laid, frame.margin[3], frame.margin[0])

    doc_height = boxes[0]["height"]
    for box in boxes[1:]:
        bottom = box["y"] + box["height"]
        if bottom > doc_height:
            doc_height = bottom

    return {
        "viewport": [vw, vh],
        "document_height": doc_height,
        "boxes": boxes,
    }


def main():
    if len(sys.argv) != 4:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    with open(sys.argv[1], encoding="utf-8") as f:
        src = f.read()
    result = lay_out(src, float(sys.argv[2]), float(sys.argv[3]))
    json.dump(result, sys.stdout, indent=2)
    print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
