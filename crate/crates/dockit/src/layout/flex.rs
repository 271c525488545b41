//! Single-line flex layout: base sizes from flex-basis or the main size
//! property, one-pass grow/shrink distribution of free space, justify-content
//! spacing of any leftover, and align-items on the cross axis.

use super::{
    align_of, clamp0, cross_offset, layout_box, resolve_frame, resolve_or_cyclic, resolve_or_zero,
    Ctx, Laid, LayoutWarning, PlacedChild,
};
use crate::scalar::Scalar;
use crate::style::{AlignItems, JustifyContent};

struct Item<S> {
    idx: usize,
    /// Margins along the main axis (start, end) and cross axis (start, end).
    margin_main: (S, S),
    margin_cross: (S, S),
    grow: S,
    shrink: S,
    /// Hypothetical border-box main size.
    base: S,
    /// Final border-box main size after grow/shrink.
    main: S,
    /// Definite border-box cross size, if any, before stretching.
    cross_def: Option<S>,
    laid: Option<Laid<S>>,
}

impl<S: Scalar> Item<S> {
    fn outer_main(&self) -> S {
        self.main + self.margin_main.0 + self.margin_main.1
    }

    fn cross_margins(&self) -> S {
        self.margin_cross.0 + self.margin_cross.1
    }

    fn laid_main(&self, row: bool) -> S {
        let laid = self.laid.as_ref().expect("laid out");
        if row {
            laid.width
        } else {
            laid.height
        }
    }

    fn laid_cross(&self, row: bool) -> S {
        let laid = self.laid.as_ref().expect("laid out");
        if row {
            laid.height
        } else {
            laid.width
        }
    }
}

pub(crate) fn layout_flex<S: Scalar>(
    ctx: &Ctx<'_, S>,
    warnings: &mut Vec<LayoutWarning>,
    index: usize,
    content_w: Option<S>,
    content_h: Option<S>,
    measuring: bool,
) -> ((S, S), Vec<PlacedChild<S>>) {
    let style = ctx.style(index);
    let kids = &ctx.kids[index];
    let zero = S::zero();
    let row = !style.flex_direction.is_column();
    let (main_avail, cross_avail) = if row {
        (content_w, content_h)
    } else {
        (content_h, content_w)
    };
    let gap_len = if row { &style.column_gap } else { &style.row_gap };
    let gap = resolve_or_zero(gap_len, content_w);

    if kids.is_empty() {
        let dims = (
            content_w.unwrap_or(zero),
            content_h.unwrap_or(zero),
        );
        return (dims, Vec::new());
    }

    let mut items: Vec<Item<S>> = Vec::with_capacity(kids.len());
    for &ci in kids {
        let cs = ctx.style(ci);
        let frame = resolve_frame(cs, content_w);
        let m = frame.margin;
        let (margin_main, margin_cross) = if row {
            ((m[3], m[1]), (m[0], m[2]))
        } else {
            ((m[0], m[2]), (m[3], m[1]))
        };

        let main_prop = if row { &cs.width } else { &cs.height };
        let main_prop_name = if row { "width" } else { "height" };
        let basis = if cs.flex_basis.is_auto() {
            None
        } else {
            resolve_or_cyclic(ctx, warnings, &cs.flex_basis, main_avail, measuring, ci, "flex-basis")
        };
        let declared = basis.or_else(|| {
            resolve_or_cyclic(ctx, warnings, main_prop, main_avail, measuring, ci, main_prop_name)
        });

        let cross_prop = if row { &cs.height } else { &cs.width };
        let cross_prop_name = if row { "height" } else { "width" };
        let mut cross_def = resolve_or_cyclic(
            ctx,
            warnings,
            cross_prop,
            cross_avail,
            measuring,
            ci,
            cross_prop_name,
        );
        if !row && cross_def.is_none() && align_of(style, cs) == AlignItems::Stretch {
            if let Some(cw) = content_w {
                cross_def = Some(clamp0(cw - (m[3] + m[1])));
            }
        }

        let base = match declared {
            Some(v) => v,
            None if row => layout_box(ctx, warnings, ci, None, None, None, true).width,
            None => layout_box(ctx, warnings, ci, cross_def, None, content_w, measuring).height,
        };

        items.push(Item {
            idx: ci,
            margin_main,
            margin_cross,
            grow: cs.flex_grow,
            shrink: cs.flex_shrink,
            base,
            main: base,
            cross_def,
            laid: None,
        });
    }

    let n = items.len();
    let gaps_total = gap * S::from_usize_lossy(n - 1);
    let total_outer: S = items
        .iter()
        .map(|it| it.base + it.margin_main.0 + it.margin_main.1)
        .fold(zero, |a, b| a + b)
        + gaps_total;

    let mut leftover = zero;
    if let Some(avail) = main_avail {
        let free = avail - total_outer;
        let sum_grow: S = items.iter().map(|it| it.grow).fold(zero, |a, b| a + b);
        if free > zero && sum_grow > zero {
            for it in &mut items {
                it.main = it.base + free * it.grow / sum_grow;
            }
        } else if free < zero {
            let sum_scaled: S = items
                .iter()
                .map(|it| it.shrink * it.base)
                .fold(zero, |a, b| a + b);
            if sum_scaled > zero {
                for it in &mut items {
                    it.main = clamp0(it.base + free * (it.shrink * it.base) / sum_scaled);
                }
            }
        }
        let used: S = items
            .iter()
            .map(|it| it.outer_main())
            .fold(zero, |a, b| a + b)
            + gaps_total;
        leftover = avail - used;
    }

    for it in &mut items {
        let (w, h) = if row {
            (Some(it.main), it.cross_def)
        } else {
            (it.cross_def, Some(it.main))
        };
        it.laid = Some(layout_box(ctx, warnings, it.idx, w, h, content_w, measuring));
    }

    let line_cross = cross_avail.unwrap_or_else(|| {
        items
            .iter()
            .map(|it| it.laid_cross(row) + it.cross_margins())
            .fold(zero, |a, b| if b > a { b } else { a })
    });

    if row {
        for it in &mut items {
            let cs = ctx.style(it.idx);
            if it.cross_def.is_none()
                && cs.height.is_auto()
                && align_of(style, cs) == AlignItems::Stretch
            {
                let target = clamp0(line_cross - it.cross_margins());
                if target != it.laid_cross(row) {
                    it.laid = Some(layout_box(
                        ctx,
                        warnings,
                        it.idx,
                        Some(it.main),
                        Some(target),
                        content_w,
                        measuring,
                    ));
                }
            }
        }
    }

    let main_size = main_avail.unwrap_or_else(|| {
        items
            .iter()
            .map(|it| it.outer_main())
            .fold(zero, |a, b| a + b)
            + gaps_total
    });

    let (lead, extra) = justify_spacing(style.justify_content, leftover, n);
    let reverse = style.flex_direction.is_reverse();
    let mut cursor = lead;
    let mut placed = Vec::with_capacity(n);
    for it in items {
        let cs = ctx.style(it.idx);
        let main_sz = it.laid_main(row);
        let cross_outer = it.laid_cross(row) + it.cross_margins();
        let mut main_pos = cursor + it.margin_main.0;
        if reverse {
            main_pos = main_size - (main_pos + main_sz);
        }
        let off = cross_offset(align_of(style, cs), line_cross, cross_outer) + it.margin_cross.0;
        let (dx, dy) = if row { (main_pos, off) } else { (off, main_pos) };
        cursor = cursor + (main_sz + it.margin_main.0 + it.margin_main.1) + gap + extra;
        placed.push(PlacedChild {
            dx,
            dy,
            laid: it.laid.expect("laid out"),
        });
    }

    let dims = if row {
        (main_size, line_cross)
    } else {
        (line_cross, main_size)
    };
    (dims, placed)
}

/// Leading offset and extra between-item spacing for leftover main-axis
/// space. Distribution keywords fall back when the leftover is not positive:
/// space-between behaves as flex-start, space-around and space-evenly as
/// center.
fn justify_spacing<S: Scalar>(justify: JustifyContent, leftover: S, n: usize) -> (S, S) {
    let zero = S::zero();
    let one = S::one();
    if n == 0 {
        return (zero, zero);
    }
    let nf = S::from_usize_lossy(n);
    let positive = leftover > zero;
    match justify {
        JustifyContent::FlexStart => (zero, zero),
        JustifyContent::Center => (leftover.half(), zero),
        JustifyContent::FlexEnd => (leftover, zero),
        JustifyContent::SpaceBetween => {
            if positive && n > 1 {
                (zero, leftover / (nf - one))
            } else {
                (zero, zero)
            }
        }
        JustifyContent::SpaceAround => {
            if positive {
                (leftover / (nf + nf), leftover / nf)
            } else {
                (leftover.half(), zero)
            }
        }
        JustifyContent::SpaceEvenly => {
            if positive {
                (leftover / (nf + one), leftover / (nf + one))
            } else {
                (leftover.half(), zero)
            }
        }
    }
}
