use super::*;
use crate::parse::parse_document;
use crate::style::{resolve_styles, StyleEnv};

fn doc(style: &str, body_inner: &str) -> String {
    format!("<html><head><style>{style}</style></head><body>{body_inner}</body></html>")
}

fn lay(src: &str, vw: f64, vh: f64) -> BoxTree<f64> {
    let ast = parse_document(src).unwrap();
    let styles = resolve_styles(&ast, &StyleEnv::default());
    layout(&ast, &styles, (vw, vh), &FontMetricModel::default())
}

fn nth<'a>(tree: &'a BoxTree<f64>, tag: &str, n: usize) -> &'a LayoutBox<f64> {
    tree.boxes
        .iter()
        .filter(|b| b.tag == tag)
        .nth(n)
        .unwrap_or_else(|| panic!("no {tag} #{n}"))
}

const BODY_FLEX: &str = "body { display: flex; width: 100px; height: 100px; }";

#[test]
fn equal_grow_splits_evenly() {
    let t = lay(
        &doc(
            &format!("{BODY_FLEX} div {{ flex: 1 }}"),
            "<div></div><div></div>",
        ),
        100.0,
        100.0,
    );
    let a = nth(&t, "div", 0);
    let b = nth(&t, "div", 1);
    assert_eq!(a.border_box, Rect::new(0.0, 0.0, 50.0, 100.0));
    assert_eq!(b.border_box, Rect::new(50.0, 0.0, 50.0, 100.0));
}

#[test]
fn space_between_with_gap() {
    let t = lay(
        &doc(
            &format!(
                "{BODY_FLEX} body {{ column-gap: 10px; justify-content: space-between }} \
                 div {{ flex-basis: 30px }}"
            ),
            "<div></div><div></div>",
        ),
        100.0,
        100.0,
    );
    assert_eq!(nth(&t, "div", 0).border_box.x, 0.0);
    assert_eq!(nth(&t, "div", 1).border_box.x, 70.0);
    assert_eq!(nth(&t, "div", 0).border_box.width, 30.0);
}

#[test]
fn two_by_two_fr_grid_with_gap() {
    let t = lay(
        &doc(
            "body { display: grid; width: 200px; height: 200px; \
             grid-template-columns: 1fr 1fr; grid-template-rows: 1fr 1fr; gap: 20px; }",
            "<div></div><div></div><div></div><div></div>",
        ),
        200.0,
        200.0,
    );
    let expect = [
        (0.0, 0.0),
        (110.0, 0.0),
        (0.0, 110.0),
        (110.0, 110.0),
    ];
    for (i, (x, y)) in expect.iter().enumerate() {
        let b = nth(&t, "div", i);
        assert_eq!(b.border_box, Rect::new(*x, *y, 90.0, 90.0), "cell {i}");
    }
}

#[test]
fn document_height_tracks_overflow() {
    let inside = lay(
        &doc(
            "body { display: flex; flex-direction: column; width: 100px; height: 2071px }",
            "<div style=\"height: 50px\"></div>",
        ),
        100.0,
        2071.0,
    );
    assert_eq!(inside.document_height(), 2071.0);

    let overflowing = lay(
        &doc(
            "body { display: flex; flex-direction: column; width: 100px; height: 100px }",
            "<div style=\"height: 150px; flex-shrink: 0\"></div>",
        ),
        100.0,
        100.0,
    );
    assert_eq!(overflowing.document_height(), 150.0);
}

#[test]
fn body_margin_does_not_inflate_document_height() {
    let t = lay(
        &doc(
            "body { display: flex; width: 100px; height: 100px; margin: 10px }",
            "",
        ),
        120.0,
        120.0,
    );
    assert_eq!(t.boxes[0].border_box.x, 10.0);
    assert_eq!(t.boxes[0].border_box.y, 10.0);
    assert_eq!(t.document_height(), 100.0);
}

#[test]
fn column_flex_stacks_with_gap_and_auto_body_height() {
    let t = lay(
        &doc(
            "body { display: flex; flex-direction: column; width: 100px; row-gap: 5px } \
             div { height: 10px }",
            "<div></div><div></div><div></div>",
        ),
        100.0,
        100.0,
    );
    assert_eq!(nth(&t, "div", 0).border_box.y, 0.0);
    assert_eq!(nth(&t, "div", 1).border_box.y, 15.0);
    assert_eq!(nth(&t, "div", 2).border_box.y, 30.0);
    assert_eq!(t.boxes[0].border_box.height, 40.0);
    assert_eq!(t.document_height(), 40.0);
    for i in 0..3 {
        assert_eq!(nth(&t, "div", i).border_box.width, 100.0);
    }
}

#[test]
fn text_wraps_at_content_width() {
    let wide = lay(
        &doc(
            "body { display: flex; flex-direction: column; width: 100px } p { font-size: 10px }",
            "<p>aa aa</p>",
        ),
        100.0,
        100.0,
    );
    let p = nth(&wide, "p", 0);
    assert_eq!(p.border_box.width, 100.0);
    assert_eq!(p.border_box.height, 12.0);
    assert_eq!(p.lines.len(), 1);

    let exact = lay(
        &doc(
            "body { display: flex; flex-direction: column; width: 30px } p { font-size: 10px }",
            "<p>aa aa</p>",
        ),
        30.0,
        100.0,
    );
    assert_eq!(nth(&exact, "p", 0).lines.len(), 1);

    let narrow = lay(
        &doc(
            "body { display: flex; flex-direction: column; width: 29px } p { font-size: 10px }",
            "<p>aa aa</p>",
        ),
        29.0,
        100.0,
    );
    let p = nth(&narrow, "p", 0);
    assert_eq!(p.border_box.height, 24.0);
    assert_eq!(p.lines.len(), 2);
    assert_eq!(p.lines[1].y, 12.0);
}

#[test]
fn centered_text_line_offsets() {
    let t = lay(
        &doc(
            "body { display: flex; flex-direction: column; width: 100px } \
             p { font-size: 10px; text-align: center }",
            "<p>ab</p>",
        ),
        100.0,
        100.0,
    );
    let p = nth(&t, "p", 0);
    assert_eq!(p.lines[0].x, 44.0);
    assert_eq!(p.lines[0].width, 12.0);
}

#[test]
fn image_intrinsic_size_from_placeholder_url() {
    let t = lay(
        &doc(
            "body { display: flex; width: 500px; height: 100px } \
             img { align-self: flex-start }",
            "<img src=\"https://picsum.photos/200/300\" alt=\"x\">",
        ),
        500.0,
        100.0,
    );
    let img = nth(&t, "img", 0);
    assert_eq!(img.border_box.width, 200.0);
    assert_eq!(img.border_box.height, 300.0);
    assert_eq!(t.document_height(), 300.0);
}

#[test]
fn image_stretches_on_the_cross_axis_by_default() {
    let t = lay(
        &doc(
            "body { display: flex; width: 500px; height: 100px }",
            "<img src=\"https://picsum.photos/200/300\" alt=\"x\">",
        ),
        500.0,
        100.0,
    );
    let img = nth(&t, "img", 0);
    assert_eq!(img.border_box.height, 100.0);
    assert_eq!(img.border_box.width, 200.0);
}

#[test]
fn image_attributes_beat_url_dims() {
    let t = lay(
        &doc(
            "body { display: flex; width: 500px; height: 500px } img { align-self: flex-start }",
            "<img src=\"https://picsum.photos/200/300\" width=\"50\" height=\"60\" alt=\"x\">",
        ),
        500.0,
        500.0,
    );
    let img = nth(&t, "img", 0);
    assert_eq!(img.border_box.width, 50.0);
    assert_eq!(img.border_box.height, 60.0);
}

#[test]
fn percent_sizes_resolve_against_content_box() {
    let t = lay(
        &doc(
            "body { display: flex; width: 200px; height: 100px } div { width: 50%; height: 50% }",
            "<div></div>",
        ),
        200.0,
        100.0,
    );
    let d = nth(&t, "div", 0);
    assert_eq!(d.border_box.width, 100.0);
    assert_eq!(d.border_box.height, 50.0);
}

#[test]
fn percent_height_of_auto_parent_is_cyclic() {
    let t = lay(
        &doc(
            "body { display: flex; flex-direction: column; width: 100px } div { height: 50% }",
            "<div></div>",
        ),
        100.0,
        100.0,
    );
    assert_eq!(nth(&t, "div", 0).border_box.height, 0.0);
    assert!(t
        .warnings
        .iter()
        .any(|w| w.kind == LayoutWarningKind::CyclicPercent && w.property == "height"));
}

#[test]
fn padding_and_border_shape_the_content_box() {
    let t = lay(
        &doc(
            "body { display: flex; width: 100px; height: 100px; padding: 10px; \
             border: 5px solid black }",
            "<div style=\"width: 20px\"></div>",
        ),
        100.0,
        100.0,
    );
    let body = &t.boxes[0];
    assert_eq!(body.border_box, Rect::new(0.0, 0.0, 100.0, 100.0));
    assert_eq!(body.content_box, Rect::new(15.0, 15.0, 70.0, 70.0));
    assert_eq!(nth(&t, "div", 0).border_box.x, 15.0);
}

#[test]
fn margins_offset_children_and_shrink_stretch() {
    let t = lay(
        &doc(
            "body { display: flex; flex-direction: column; width: 100px; height: 100px } \
             div { margin: 10px; height: 20px }",
            "<div></div>",
        ),
        100.0,
        100.0,
    );
    let d = nth(&t, "div", 0);
    assert_eq!(d.border_box, Rect::new(10.0, 10.0, 80.0, 20.0));
    assert_eq!(d.margin_box, Rect::new(0.0, 0.0, 100.0, 40.0));
}

#[test]
fn shrink_resolves_overflow_proportionally() {
    let t = lay(
        &doc(
            &format!("{BODY_FLEX} div {{ flex-basis: 80px }}"),
            "<div></div><div></div>",
        ),
        100.0,
        100.0,
    );
    assert_eq!(nth(&t, "div", 0).border_box.width, 50.0);
    assert_eq!(nth(&t, "div", 1).border_box.width, 50.0);
    assert_eq!(nth(&t, "div", 1).border_box.x, 50.0);
}

#[test]
fn justify_center_and_evenly() {
    let centered = lay(
        &doc(
            &format!(
                "{BODY_FLEX} body {{ justify-content: center }} div {{ flex-basis: 20px }}"
            ),
            "<div></div><div></div>",
        ),
        100.0,
        100.0,
    );
    assert_eq!(nth(&centered, "div", 0).border_box.x, 30.0);
    assert_eq!(nth(&centered, "div", 1).border_box.x, 50.0);

    let evenly = lay(
        &doc(
            &format!(
                "{BODY_FLEX} body {{ justify-content: space-evenly }} div {{ flex-basis: 20px }}"
            ),
            "<div></div><div></div>",
        ),
        100.0,
        100.0,
    );
    assert_eq!(nth(&evenly, "div", 0).border_box.x, 20.0);
    assert_eq!(nth(&evenly, "div", 1).border_box.x, 60.0);
}

#[test]
fn align_items_and_align_self() {
    let t = lay(
        &doc(
            &format!(
                "{BODY_FLEX} body {{ align-items: center }} \
                 div {{ width: 10px; height: 20px }} \
                 .end {{ align-self: flex-end }}"
            ),
            "<div></div><div class=\"end\"></div>",
        ),
        100.0,
        100.0,
    );
    assert_eq!(nth(&t, "div", 0).border_box.y, 40.0);
    assert_eq!(nth(&t, "div", 1).border_box.y, 80.0);
}

#[test]
fn grow_conserves_container_space() {
    let t = lay(
        &doc(
            &format!(
                "{BODY_FLEX} .a {{ flex-grow: 1; flex-basis: 10px }} \
                 .b {{ flex-grow: 2; flex-basis: 20px }}"
            ),
            "<div class=\"a\"></div><div class=\"b\"></div>",
        ),
        100.0,
        100.0,
    );
    let a = nth(&t, "div", 0).border_box;
    let b = nth(&t, "div", 1).border_box;
    assert!((a.width + b.width - 100.0).abs() < 1e-9);
    assert!((b.x - a.width).abs() < 1e-9);
}

#[test]
fn grid_auto_columns_size_to_content() {
    let t = lay(
        &doc(
            "body { display: grid; width: 200px; grid-template-columns: auto auto } \
             p { font-size: 10px }",
            "<p>abcd</p><p>ab</p>",
        ),
        200.0,
        100.0,
    );
    let a = nth(&t, "p", 0);
    let b = nth(&t, "p", 1);
    assert_eq!(a.border_box.width, 24.0);
    assert_eq!(b.border_box.width, 12.0);
    assert_eq!(b.border_box.x, 24.0);
}

#[test]
fn grid_adds_implicit_rows() {
    let t = lay(
        &doc(
            "body { display: grid; width: 100px; grid-template-columns: 1fr 1fr } \
             div { height: 10px }",
            "<div></div><div></div><div></div><div></div><div></div>",
        ),
        100.0,
        100.0,
    );
    assert_eq!(nth(&t, "div", 4).border_box.y, 20.0);
    assert_eq!(nth(&t, "div", 4).border_box.x, 0.0);
    assert_eq!(t.boxes[0].border_box.height, 30.0);
}

#[test]
fn row_reverse_mirrors_positions_not_order() {
    let t = lay(
        &doc(
            &format!(
                "{BODY_FLEX} body {{ flex-direction: row-reverse }} div {{ flex-basis: 30px }}"
            ),
            "<div class=\"first\"></div><div class=\"second\"></div>",
        ),
        100.0,
        100.0,
    );
    let first = nth(&t, "div", 0);
    let second = nth(&t, "div", 1);
    assert_eq!(first.border_box.x, 70.0);
    assert_eq!(second.border_box.x, 40.0);
    assert!(t.boxes[1].node_index < t.boxes[2].node_index);
}

#[test]
fn nested_containers_compose() {
    let t = lay(
        &doc(
            "body { display: flex; flex-direction: column; width: 200px; height: 200px } \
             .row { display: flex; height: 50px; column-gap: 10px } \
             .row div { flex: 1 }",
            "<div class=\"row\"><div></div><div></div></div>",
        ),
        200.0,
        200.0,
    );
    let inner_a = nth(&t, "div", 1);
    let inner_b = nth(&t, "div", 2);
    assert_eq!(inner_a.border_box, Rect::new(0.0, 0.0, 95.0, 50.0));
    assert_eq!(inner_b.border_box, Rect::new(105.0, 0.0, 95.0, 50.0));
}

#[test]
fn box_containment_holds() {
    let t = lay(
        &doc(
            "body { display: flex; width: 300px; height: 120px; padding: 8px } \
             div { margin: 4px; padding: 6px; border: 2px solid red; flex: 1 }",
            "<div><p>hello world</p></div><div></div>",
        ),
        300.0,
        120.0,
    );
    for b in &t.boxes {
        assert!(b.content_box.x >= b.border_box.x);
        assert!(b.content_box.right() <= b.border_box.right() + 1e-9);
        assert!(b.border_box.x >= b.margin_box.x);
        assert!(b.border_box.bottom() <= b.margin_box.bottom() + 1e-9);
    }
}

#[test]
fn identical_input_gives_identical_trees() {
    let src = doc(
        "body { display: grid; width: 330px; height: 207px; \
         grid-template-columns: 1fr 2fr; gap: 7px } p { font-size: 13px }",
        "<div><p>alpha beta gamma delta</p></div><div></div><p>tail</p>",
    );
    let a = lay(&src, 330.0, 207.0);
    let b = lay(&src, 330.0, 207.0);
    assert_eq!(a, b);
}
