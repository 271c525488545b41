//! Deterministic text measurement.
//!
//! Every glyph advances by the same fraction of the font size, so line
//! widths are exact multiples of `char_advance_ratio * font_size`. Wrapping
//! is greedy on word boundaries: a word moves to the next line as soon as
//! appending it would make the line reach `max_width`.

use serde::Serialize;

use crate::scalar::Scalar;

/// Fixed-advance font model used by layout and rendering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FontMetricModel<S> {
    /// Horizontal advance of any glyph as a fraction of the font size.
    pub char_advance_ratio: S,
    /// Line height multiplier applied when a style does not set one.
    pub line_height_default: S,
}

impl<S: Scalar> Default for FontMetricModel<S> {
    fn default() -> Self {
        Self {
            char_advance_ratio: S::of(0.6),
            line_height_default: S::of(1.2),
        }
    }
}

impl<S: Scalar> FontMetricModel<S> {
    /// Width of `text` set at `font_size`, without wrapping.
    pub fn text_width(&self, text: &str, font_size: S) -> S {
        let chars = S::from_usize_lossy(text.chars().count());
        chars * self.char_advance_ratio * font_size
    }
}

/// One wrapped line with its measured width.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasuredLine<S> {
    pub text: String,
    pub width: S,
}

/// Result of measuring a text run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TextMetrics<S> {
    /// Width of the widest line.
    pub width: S,
    /// `line_count * line_height * font_size`.
    pub height: S,
    pub lines: Vec<MeasuredLine<S>>,
}

impl<S: Scalar> TextMetrics<S> {
    pub fn empty() -> Self {
        Self {
            width: S::zero(),
            height: S::zero(),
            lines: Vec::new(),
        }
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }
}

/// Measures `text` at `font_size` with greedy word wrap.
///
/// `line_height` is a multiplier. `max_width` of `None` means unconstrained;
/// a word that alone reaches `max_width` still occupies its own line and
/// overflows rather than breaking mid-word. Whitespace-only input measures
/// as zero lines.
pub fn measure_text<S: Scalar>(
    text: &str,
    font_size: S,
    line_height: S,
    max_width: Option<S>,
    model: &FontMetricModel<S>,
) -> TextMetrics<S> {
    let words: Vec<&str> = text.split_whitespace().collect();
    if words.is_empty() {
        return TextMetrics::empty();
    }

    let mut lines: Vec<String> = Vec::new();
    let mut current = String::new();
    for word in words {
        if current.is_empty() {
            current.push_str(word);
            continue;
        }
        let mut candidate = String::with_capacity(current.len() + 1 + word.len());
        candidate.push_str(&current);
        candidate.push(' ');
        candidate.push_str(word);
        let fits = match max_width {
            Some(limit) => model.text_width(&candidate, font_size) < limit,
            None => true,
        };
        if fits {
            current = candidate;
        } else {
            lines.push(std::mem::take(&mut current));
            current.push_str(word);
        }
    }
    lines.push(current);

    let measured: Vec<MeasuredLine<S>> = lines
        .into_iter()
        .map(|text| {
            let width = model.text_width(&text, font_size);
            MeasuredLine { text, width }
        })
        .collect();
    let width = measured
        .iter()
        .map(|l| l.width)
        .fold(S::zero(), |a, b| if b > a { b } else { a });
    let height = S::from_usize_lossy(measured.len()) * line_height * font_size;
    TextMetrics {
        width,
        height,
        lines: measured,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> FontMetricModel<f64> {
        FontMetricModel::default()
    }

    #[test]
    fn single_line_unconstrained() {
        let m = measure_text("ab", 10.0, 1.2, None, &model());
        assert_eq!(m.width, 12.0);
        assert_eq!(m.height, 12.0);
        assert_eq!(m.line_count(), 1);
        assert_eq!(m.lines[0].text, "ab");
    }

    #[test]
    fn wraps_when_line_would_reach_limit() {
        let m = measure_text("aa aa", 10.0, 1.2, Some(30.0), &model());
        assert_eq!(m.line_count(), 2);
        assert_eq!(m.height, 24.0);
        assert_eq!(m.width, 12.0);
        assert_eq!(m.lines[0].text, "aa");
        assert_eq!(m.lines[1].text, "aa");
    }

    #[test]
    fn stays_on_one_line_below_limit() {
        let m = measure_text("aa aa", 10.0, 1.2, Some(30.1), &model());
        assert_eq!(m.line_count(), 1);
        assert_eq!(m.width, 30.0);
    }

    #[test]
    fn empty_text_measures_zero() {
        let m = measure_text("", 16.0, 1.2, Some(100.0), &model());
        assert_eq!(m, TextMetrics::empty());
        let ws = measure_text("   ", 16.0, 1.2, None, &model());
        assert_eq!(ws, TextMetrics::empty());
    }

    #[test]
    fn long_word_overflows_its_line() {
        let m = measure_text("abcdefghij x", 10.0, 1.0, Some(30.0), &model());
        assert_eq!(m.line_count(), 2);
        assert_eq!(m.lines[0].text, "abcdefghij");
        assert_eq!(m.width, 60.0);
        assert_eq!(m.height, 20.0);
    }

    #[test]
    fn multiple_spaces_collapse() {
        let a = measure_text("a   b", 10.0, 1.2, None, &model());
        let b = measure_text("a b", 10.0, 1.2, None, &model());
        assert_eq!(a, b);
    }

    #[test]
    fn line_height_scales_height_only() {
        let m = measure_text("hello", 20.0, 1.5, None, &model());
        assert_eq!(m.height, 30.0);
        assert_eq!(m.width, 5.0 * 0.6 * 20.0);
    }

    #[test]
    fn width_counts_chars_not_bytes() {
        let m = measure_text("héllo", 10.0, 1.2, None, &model());
        assert_eq!(m.width, 30.0);
    }
}
