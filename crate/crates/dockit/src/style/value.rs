//! CSS value types and parsers for the dialect's property vocabulary.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A resolved length. Relative units (em, rem, vw, vh) are folded into px at
/// style-resolution time, so only px, percent, and auto survive to layout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Length<S> {
    Px(S),
    Percent(S),
    Auto,
}

impl<S: Scalar> Length<S> {
    pub fn zero() -> Self {
        Length::Px(S::zero())
    }

    /// Resolve against a basis dimension; `None` for auto.
    pub fn resolve(&self, basis: S) -> Option<S> {
        match self {
            Length::Px(v) => Some(*v),
            Length::Percent(v) => Some(*v / S::of(100.0) * basis),
            Length::Auto => None,
        }
    }

    /// Resolve against a basis that may itself be unknown. A percent against
    /// an unknown basis resolves to `None` (the caller records the cycle).
    pub fn resolve_opt(&self, basis: Option<S>) -> Option<S> {
        match self {
            Length::Px(v) => Some(*v),
            Length::Percent(v) => basis.map(|b| *v / S::of(100.0) * b),
            Length::Auto => None,
        }
    }

    pub fn is_auto(&self) -> bool {
        matches!(self, Length::Auto)
    }

    pub fn is_percent(&self) -> bool {
        matches!(self, Length::Percent(_))
    }
}

/// One grid track size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Track<S> {
    Px(S),
    Percent(S),
    Fr(S),
    Auto,
}

/// Color with 0-255 channels and 0-1 alpha.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
    pub a: f64,
}

impl Rgb {
    pub const BLACK: Rgb = Rgb { r: 0, g: 0, b: 0, a: 1.0 };
    pub const WHITE: Rgb = Rgb {
        r: 255,
        g: 255,
        b: 255,
        a: 1.0,
    };
    pub const TRANSPARENT: Rgb = Rgb { r: 0, g: 0, b: 0, a: 0.0 };

    pub fn opaque(r: u8, g: u8, b: u8) -> Rgb {
        Rgb { r, g, b, a: 1.0 }
    }

    pub fn is_visible(&self) -> bool {
        self.a > 0.0
    }

    pub fn to_hex(&self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.r, self.g, self.b)
    }
}

/// Context for folding relative units into px.
#[derive(Debug, Clone, Copy)]
pub struct LengthContext<S> {
    /// The element's own font size (for `em`); for the `font-size` property
    /// itself callers pass the parent's size.
    pub font_size: S,
    pub root_font_size: S,
    /// Declared document dimensions for `vw`/`vh`, when known.
    pub viewport: Option<(S, S)>,
}

/// Parse a single CSS length token. Returns `None` for values outside the
/// supported grammar (the caller records a warning). Negative lengths are
/// rejected here because no dialect property accepts them.
pub fn parse_length<S: Scalar>(token: &str, ctx: &LengthContext<S>) -> Option<Length<S>> {
    let t = token.trim();
    if t.eq_ignore_ascii_case("auto") {
        return Some(Length::Auto);
    }
    let (value, unit) = split_number_unit(t)?;
    if value < 0.0 {
        return None;
    }
    let v = S::of(value);
    match unit.as_str() {
        "px" | "" => Some(Length::Px(v)),
        "%" => Some(Length::Percent(v)),
        "em" => Some(Length::Px(v * ctx.font_size)),
        "rem" => Some(Length::Px(v * ctx.root_font_size)),
        "vw" => ctx
            .viewport
            .map(|(w, _)| Length::Px(v / S::of(100.0) * w)),
        "vh" => ctx
            .viewport
            .map(|(_, h)| Length::Px(v / S::of(100.0) * h)),
        _ => None,
    }
}

/// Parse a grid track token (px/%/fr/auto plus the length units above).
pub fn parse_track<S: Scalar>(token: &str, ctx: &LengthContext<S>) -> Option<Track<S>> {
    let t = token.trim();
    if t.eq_ignore_ascii_case("auto") {
        return Some(Track::Auto);
    }
    if let Some((value, unit)) = split_number_unit(t) {
        if unit == "fr" {
            if value < 0.0 {
                return None;
            }
            return Some(Track::Fr(S::of(value)));
        }
    }
    match parse_length(t, ctx)? {
        Length::Px(v) => Some(Track::Px(v)),
        Length::Percent(v) => Some(Track::Percent(v)),
        Length::Auto => Some(Track::Auto),
    }
}

/// Parse a `grid-template-columns`/`rows` value, expanding `repeat(N, ...)`.
pub fn parse_track_list<S: Scalar>(value: &str, ctx: &LengthContext<S>) -> Option<Vec<Track<S>>> {
    let mut tracks = Vec::new();
    for token in split_track_tokens(value) {
        if let Some(body) = token
            .strip_prefix("repeat(")
            .and_then(|s| s.strip_suffix(')'))
        {
            let (count, list) = body.split_once(',')?;
            let count: usize = count.trim().parse().ok()?;
            if count == 0 || count > 1000 {
                return None;
            }
            let inner: Vec<Track<S>> = split_track_tokens(list)
                .iter()
                .map(|t| parse_track(t, ctx))
                .collect::<Option<_>>()?;
            if inner.is_empty() {
                return None;
            }
            for _ in 0..count {
                tracks.extend_from_slice(&inner);
            }
        } else {
            tracks.push(parse_track(&token, ctx)?);
        }
    }
    if tracks.is_empty() {
        None
    } else {
        Some(tracks)
    }
}

/// Split a track list on whitespace, keeping `repeat(...)` groups intact.
fn split_track_tokens(value: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut depth = 0usize;
    for c in value.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(c);
            }
            c if c.is_ascii_whitespace() && depth == 0 => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c => current.push(c),
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

fn split_number_unit(t: &str) -> Option<(f64, String)> {
    let end = t
        .char_indices()
        .take_while(|(i, c)| {
            c.is_ascii_digit() || *c == '.' || (*i == 0 && (*c == '-' || *c == '+'))
        })
        .map(|(i, c)| i + c.len_utf8())
        .last()?;
    let value: f64 = t[..end].parse().ok()?;
    if !value.is_finite() {
        return None;
    }
    Some((value, t[end..].trim().to_ascii_lowercase()))
}

/// Parse a CSS color: `#rgb`, `#rrggbb`, `#rrggbbaa`, `rgb()`, `rgba()`, the
/// CSS2.1 named colors, or `transparent`.
pub fn parse_color(value: &str) -> Option<Rgb> {
    let v = value.trim();
    if let Some(hex) = v.strip_prefix('#') {
        return parse_hex_color(hex);
    }
    let lower = v.to_ascii_lowercase();
    if let Some(args) = lower
        .strip_prefix("rgba(")
        .or_else(|| lower.strip_prefix("rgb("))
        .and_then(|s| s.strip_suffix(')'))
    {
        return parse_rgb_args(args);
    }
    named_color(&lower)
}

fn parse_hex_color(hex: &str) -> Option<Rgb> {
    let h = hex.trim();
    let nibble = |c: u8| (c as char).to_digit(16).map(|d| d as u8);
    match h.len() {
        3 => {
            let b = h.as_bytes();
            let r = nibble(b[0])?;
            let g = nibble(b[1])?;
            let bl = nibble(b[2])?;
            Some(Rgb::opaque(r * 17, g * 17, bl * 17))
        }
        6 | 8 => {
            let r = u8::from_str_radix(&h[0..2], 16).ok()?;
            let g = u8::from_str_radix(&h[2..4], 16).ok()?;
            let b = u8::from_str_radix(&h[4..6], 16).ok()?;
            let a = if h.len() == 8 {
                u8::from_str_radix(&h[6..8], 16).ok()? as f64 / 255.0
            } else {
                1.0
            };
            Some(Rgb { r, g, b, a })
        }
        _ => None,
    }
}

fn parse_rgb_args(args: &str) -> Option<Rgb> {
    let parts: Vec<&str> = if args.contains(',') {
        args.split(',').map(str::trim).collect()
    } else {
        args.split_whitespace().collect()
    };
    if parts.len() < 3 || parts.len() > 4 {
        return None;
    }
    let channel = |s: &str| -> Option<u8> {
        let f: f64 = s.parse().ok()?;
        Some(f.round().clamp(0.0, 255.0) as u8)
    };
    let r = channel(parts[0])?;
    let g = channel(parts[1])?;
    let b = channel(parts[2])?;
    let a = if parts.len() == 4 {
        parts[3].parse::<f64>().ok()?.clamp(0.0, 1.0)
    } else {
        1.0
    };
    Some(Rgb { r, g, b, a })
}

fn named_color(name: &str) -> Option<Rgb> {
    let (r, g, b) = match name {
        "black" => (0, 0, 0),
        "silver" => (192, 192, 192),
        "gray" | "grey" => (128, 128, 128),
        "white" => (255, 255, 255),
        "maroon" => (128, 0, 0),
        "red" => (255, 0, 0),
        "purple" => (128, 0, 128),
        "fuchsia" => (255, 0, 255),
        "green" => (0, 128, 0),
        "lime" => (0, 255, 0),
        "olive" => (128, 128, 0),
        "yellow" => (255, 255, 0),
        "navy" => (0, 0, 128),
        "blue" => (0, 0, 255),
        "teal" => (0, 128, 128),
        "aqua" => (0, 255, 255),
        "orange" => (255, 165, 0),
        "transparent" => return Some(Rgb::TRANSPARENT),
        _ => return None,
    };
    Some(Rgb::opaque(r, g, b))
}

/// Parse a bare non-negative number (flex-grow, flex-shrink, fr counts).
pub fn parse_number<S: Scalar>(value: &str) -> Option<S> {
    let f: f64 = value.trim().parse().ok()?;
    if f.is_finite() && f >= 0.0 {
        Some(S::of(f))
    } else {
        None
    }
}
