//! Grid layout subset: fixed px and percent tracks, fr shares of leftover
//! space, auto tracks sized by content, row-major auto-placement of items
//! into single cells, and gaps between tracks.

use super::{
    align_of, clamp0, cross_offset, layout_box, resolve_frame, resolve_or_cyclic, resolve_or_zero,
    Ctx, Laid, LayoutWarning, LayoutWarningKind, PlacedChild,
};
use crate::scalar::Scalar;
use crate::style::{AlignItems, Track};

enum TrackSize<S> {
    Fixed(S),
    Fr(S),
    Auto,
}

struct Cell<S> {
    idx: usize,
    col: usize,
    row: usize,
    v_margins: S,
    margin_left: S,
    margin_top: S,
    height_auto: bool,
    stretch: bool,
    laid: Laid<S>,
    item_w: Option<S>,
}

/// Classifies a template track, resolving percentages against the axis size.
/// An unresolvable percentage is content-sized while measuring; in final
/// layout it is a cycle and collapses to zero.
fn classify<S: Scalar>(
    ctx: &Ctx<'_, S>,
    warnings: &mut Vec<LayoutWarning>,
    track: &Track<S>,
    axis_size: Option<S>,
    measuring: bool,
    node_index: usize,
    property: &str,
) -> TrackSize<S> {
    match track {
        Track::Px(v) => TrackSize::Fixed(*v),
        Track::Fr(w) => TrackSize::Fr(*w),
        Track::Auto => TrackSize::Auto,
        Track::Percent(p) => match axis_size {
            Some(basis) => TrackSize::Fixed(*p / S::of(100.0) * basis),
            None if measuring => TrackSize::Auto,
            None => {
                warnings.push(LayoutWarning {
                    kind: LayoutWarningKind::CyclicPercent,
                    node_path: ctx.nodes[node_index].path.clone(),
                    property: property.to_string(),
                });
                TrackSize::Fixed(S::zero())
            }
        },
    }
}

/// Sizes one axis of tracks: fixed first, auto from the per-track content
/// maxima, then fr tracks sharing whatever space is left (or content-sized
/// when the axis itself is auto).
fn size_tracks<S: Scalar>(
    specs: &[TrackSize<S>],
    content_max: &[S],
    axis_size: Option<S>,
    gap: S,
) -> Vec<S> {
    let zero = S::zero();
    let mut sizes: Vec<S> = specs
        .iter()
        .enumerate()
        .map(|(i, s)| match s {
            TrackSize::Fixed(v) => *v,
            TrackSize::Auto => content_max[i],
            TrackSize::Fr(_) => zero,
        })
        .collect();
    let fr_total: S = specs
        .iter()
        .map(|s| if let TrackSize::Fr(w) = s { *w } else { zero })
        .fold(zero, |a, b| a + b);
    if fr_total > zero {
        match axis_size {
            Some(avail) => {
                let gaps = gap * S::from_usize_lossy(specs.len().saturating_sub(1));
                let used: S = sizes.iter().fold(zero, |a, b| a + *b) + gaps;
                let leftover = clamp0(avail - used);
                for (i, s) in specs.iter().enumerate() {
                    if let TrackSize::Fr(w) = s {
                        sizes[i] = leftover * *w / fr_total;
                    }
                }
            }
            None => {
                for (i, s) in specs.iter().enumerate() {
                    if let TrackSize::Fr(_) = s {
                        sizes[i] = content_max[i];
                    }
                }
            }
        }
    }
    sizes
}

fn track_positions<S: Scalar>(sizes: &[S], gap: S) -> Vec<S> {
    let mut pos = Vec::with_capacity(sizes.len());
    let mut cursor = S::zero();
    for (i, s) in sizes.iter().enumerate() {
        if i > 0 {
            cursor = cursor + gap;
        }
        pos.push(cursor);
        cursor = cursor + *s;
    }
    pos
}

pub(crate) fn layout_grid<S: Scalar>(
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
    let n = kids.len();

    let cols_template = if style.grid_template_columns.is_empty() {
        vec![Track::Auto]
    } else {
        style.grid_template_columns.clone()
    };
    let ncols = cols_template.len();
    let nrows = style.grid_template_rows.len().max(n.div_ceil(ncols));
    let mut rows_template = style.grid_template_rows.clone();
    rows_template.resize(nrows, Track::Auto);

    let col_gap = resolve_or_zero(&style.column_gap, content_w);
    let row_gap = resolve_or_zero(&style.row_gap, content_w);

    let col_specs: Vec<TrackSize<S>> = cols_template
        .iter()
        .map(|t| classify(ctx, warnings, t, content_w, measuring, index, "grid-template-columns"))
        .collect();
    let row_specs: Vec<TrackSize<S>> = rows_template
        .iter()
        .map(|t| classify(ctx, warnings, t, content_h, measuring, index, "grid-template-rows"))
        .collect();

    // Content maxima for auto and content-sized fr columns: the widest
    // max-content margin box among the items placed in each column.
    let mut col_max = vec![zero; ncols];
    for (k, &ci) in kids.iter().enumerate() {
        let c = k % ncols;
        let needs_content = matches!(col_specs[c], TrackSize::Auto)
            || (matches!(col_specs[c], TrackSize::Fr(_)) && content_w.is_none());
        if !needs_content {
            continue;
        }
        let cs = ctx.style(ci);
        let frame = resolve_frame(cs, content_w);
        let probe = layout_box(ctx, warnings, ci, None, None, None, true);
        let outer = probe.width + frame.margin[1] + frame.margin[3];
        if outer > col_max[c] {
            col_max[c] = outer;
        }
    }
    let col_sizes = size_tracks(&col_specs, &col_max, content_w, col_gap);

    // Lay every item at its cell width to learn content heights.
    let mut cells: Vec<Cell<S>> = Vec::with_capacity(n);
    for (k, &ci) in kids.iter().enumerate() {
        let col = k % ncols;
        let row = k / ncols;
        let cs = ctx.style(ci);
        let frame = resolve_frame(cs, content_w);
        let h_margins = frame.margin[1] + frame.margin[3];
        let v_margins = frame.margin[0] + frame.margin[2];
        let w_def = resolve_or_cyclic(ctx, warnings, &cs.width, content_w, measuring, ci, "width");
        let item_w = w_def.or(Some(clamp0(col_sizes[col] - h_margins)));
        let h_def =
            resolve_or_cyclic(ctx, warnings, &cs.height, content_h, measuring, ci, "height");
        let laid = layout_box(ctx, warnings, ci, item_w, h_def, content_w, measuring);
        cells.push(Cell {
            idx: ci,
            col,
            row,
            v_margins,
            margin_left: frame.margin[3],
            margin_top: frame.margin[0],
            height_auto: h_def.is_none() && cs.height.is_auto(),
            stretch: align_of(style, cs) == AlignItems::Stretch,
            laid,
            item_w,
        });
    }

    let mut row_max = vec![zero; nrows];
    for cell in &cells {
        let outer = cell.laid.height + cell.v_margins;
        if outer > row_max[cell.row] {
            row_max[cell.row] = outer;
        }
    }
    let row_sizes = size_tracks(&row_specs, &row_max, content_h, row_gap);

    // Stretch auto-height items up to their row.
    for cell in &mut cells {
        if cell.height_auto && cell.stretch {
            let target = clamp0(row_sizes[cell.row] - cell.v_margins);
            if target != cell.laid.height {
                cell.laid = layout_box(
                    ctx,
                    warnings,
                    cell.idx,
                    cell.item_w,
                    Some(target),
                    content_w,
                    measuring,
                );
            }
        }
    }

    let col_pos = track_positions(&col_sizes, col_gap);
    let row_pos = track_positions(&row_sizes, row_gap);
    let placed = cells
        .into_iter()
        .map(|cell| {
            let cs = ctx.style(cell.idx);
            let outer_h = cell.laid.height + cell.v_margins;
            let dy = row_pos[cell.row]
                + cross_offset(align_of(style, cs), row_sizes[cell.row], outer_h)
                + cell.margin_top;
            let dx = col_pos[cell.col] + cell.margin_left;
            PlacedChild {
                dx,
                dy,
                laid: cell.laid,
            }
        })
        .collect();

    let axis_extent = |sizes: &[S], gap: S| -> S {
        let gaps = gap * S::from_usize_lossy(sizes.len().saturating_sub(1));
        sizes.iter().fold(zero, |a, b| a + *b) + gaps
    };
    let dims = (
        content_w.unwrap_or_else(|| axis_extent(&col_sizes, col_gap)),
        content_h.unwrap_or_else(|| axis_extent(&row_sizes, row_gap)),
    );
    (dims, placed)
}
