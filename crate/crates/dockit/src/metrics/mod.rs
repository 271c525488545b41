//! Layout quality metrics: pairwise overlap, axis alignment, and height
//! deviation. Lower is better for all three.

pub mod color;
pub mod derender;

pub use derender::{derender_scores, DerenderScores};

use serde::{Deserialize, Serialize};

use crate::geometry::Rect;
use crate::layout::BoxTree;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport<S> {
    pub overlap: S,
    pub alignment: S,
    pub height: S,
    pub n_elements: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricWarning {
    /// Alignment needs at least two leaf elements; reported as 0.
    TooFewElements { n: usize },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("height metric needs at least one (rendered, target) pair")]
    EmptyCorpus,
    #[error("target height must be positive, got {0}")]
    NonPositiveTarget(f64),
}

fn leaf_content_rects<S: Scalar>(tree: &BoxTree<S>) -> Vec<Rect<S>> {
    tree.leaf_boxes().iter().map(|b| b.content_box).collect()
}

/// Mean per-element overlapped-area ratio over leaf content boxes:
/// (1/N) sum_i sum_{j != i} area(b_i intersect b_j) / area(b_i).
/// Fewer than two leaves give 0; zero-area leaves contribute nothing.
pub fn overlap_metric<S: Scalar>(tree: &BoxTree<S>) -> S {
    overlap_of_rects(&leaf_content_rects(tree))
}

pub(crate) fn overlap_of_rects<S: Scalar>(rects: &[Rect<S>]) -> S {
    let n = rects.len();
    if n <= 1 {
        return S::zero();
    }
    let mut total = S::zero();
    for (i, bi) in rects.iter().enumerate() {
        let area = bi.area();
        if area <= S::zero() {
            continue;
        }
        for (j, bj) in rects.iter().enumerate() {
            if i != j {
                total = total + bi.intersection_area(bj) / area;
            }
        }
    }
    total / S::from_usize_lossy(n)
}

/// Mean alignment penalty over leaf content boxes. For each leaf, the
/// distance to its nearest neighbor along the closest of six axes (left,
/// x-center, right over width; top, y-center, bottom over height) is
/// mapped through -ln(1 - d). Perfectly shared edges cost nothing.
pub fn alignment_metric<S: Scalar>(
    tree: &BoxTree<S>,
    canvas: (S, S),
) -> (S, Option<MetricWarning>) {
    alignment_of_rects(&leaf_content_rects(tree), canvas)
}

pub(crate) fn alignment_of_rects<S: Scalar>(
    rects: &[Rect<S>],
    canvas: (S, S),
) -> (S, Option<MetricWarning>) {
    let n = rects.len();
    if n < 2 {
        return (S::zero(), Some(MetricWarning::TooFewElements { n }));
    }
    let (w, h) = canvas;
    let axes: Vec<[S; 6]> = rects
        .iter()
        .map(|r| {
            [
                r.x / w,
                (r.x + r.width.half()) / w,
                r.right() / w,
                r.y / h,
                (r.y + r.height.half()) / h,
                r.bottom() / h,
            ]
        })
        .collect();
    let cap = S::one() - S::of(1e-9);
    let mut total = S::zero();
    for i in 0..n {
        let mut d = S::infinity();
        for j in 0..n {
            if i == j {
                continue;
            }
            for axis in 0..6 {
                let gap = (axes[i][axis] - axes[j][axis]).abs();
                if gap < d {
                    d = gap;
                }
            }
        }
        if d > cap {
            d = cap;
        }
        total = total - (S::one() - d).ln();
    }
    (total / S::from_usize_lossy(n), None)
}

/// Mean absolute height-ratio deviation |h_hat / h - 1| over a corpus of
/// (rendered, target) pairs.
pub fn height_metric<S: Scalar>(pairs: &[(S, S)]) -> Result<S, MetricsError> {
    height_metric_with(pairs, false)
}

/// Height deviation with an overflow-only option: when set, underflow
/// costs nothing and each pair scores max(0, h_hat / h - 1).
pub fn height_metric_with<S: Scalar>(
    pairs: &[(S, S)],
    overflow_only: bool,
) -> Result<S, MetricsError> {
    if pairs.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    let mut total = S::zero();
    for &(h_hat, h) in pairs {
        if h <= S::zero() {
            return Err(MetricsError::NonPositiveTarget(h.as_f64()));
        }
        let dev = h_hat / h - S::one();
        total = total
            + if overflow_only {
                if dev > S::zero() {
                    dev
                } else {
                    S::zero()
                }
            } else {
                dev.abs()
            };
    }
    Ok(total / S::from_usize_lossy(pairs.len()))
}

/// All three layout metrics for one document laid out at its declared
/// dimensions.
pub fn document_metrics<S: Scalar>(
    tree: &BoxTree<S>,
    declared: (S, S),
) -> Result<(MetricReport<S>, Vec<MetricWarning>), MetricsError> {
    if declared.1 <= S::zero() {
        return Err(MetricsError::NonPositiveTarget(declared.1.as_f64()));
    }
    let overlap = overlap_metric(tree);
    let (alignment, warning) = alignment_metric(tree, declared);
    let height = (tree.document_height() / declared.1 - S::one()).abs();
    let n_elements = tree.leaf_boxes().len();
    Ok((
        MetricReport {
            overlap,
            alignment,
            height,
            n_elements,
        },
        warning.into_iter().collect(),
    ))
}

/// Per-field mean of several reports; element counts are summed.
pub fn aggregate_reports<S: Scalar>(reports: &[MetricReport<S>]) -> Option<MetricReport<S>> {
    if reports.is_empty() {
        return None;
    }
    let n = S::from_usize_lossy(reports.len());
    Some(MetricReport {
        overlap: reports.iter().fold(S::zero(), |a, r| a + r.overlap) / n,
        alignment: reports.iter().fold(S::zero(), |a, r| a + r.alignment) / n,
        height: reports.iter().fold(S::zero(), |a, r| a + r.height) / n,
        n_elements: reports.iter().map(|r| r.n_elements).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::LayoutBox;

    fn leaf(tag: &str, x: f64, y: f64, w: f64, h: f64) -> LayoutBox<f64> {
        let rect = Rect::new(x, y, w, h);
        LayoutBox {
            node_index: 0,
            tag: tag.to_string(),
            border_box: rect,
            content_box: rect,
            margin_box: rect,
            lines: Vec::new(),
            children: Vec::new(),
        }
    }

    fn tree_of(leaves: Vec<LayoutBox<f64>>) -> BoxTree<f64> {
        let mut boxes = vec![leaf("body", 0.0, 0.0, 100.0, 100.0)];
        boxes.extend(leaves);
        BoxTree {
            boxes,
            viewport: (100.0, 100.0),
            warnings: Vec::new(),
        }
    }

    #[test]
    fn disjoint_leaves_do_not_overlap() {
        let tree = tree_of(vec![
            leaf("p", 0.0, 0.0, 10.0, 10.0),
            leaf("img", 50.0, 50.0, 10.0, 10.0),
        ]);
        assert_eq!(overlap_metric(&tree), 0.0);
    }

    #[test]
    fn identical_leaves_average_one_full_overlap_each() {
        let tree = tree_of(vec![
            leaf("p", 5.0, 5.0, 20.0, 10.0),
            leaf("p", 5.0, 5.0, 20.0, 10.0),
        ]);
        assert_eq!(overlap_metric(&tree), 1.0);
    }

    #[test]
    fn partial_overlap_matches_hand_computation() {
        let tree = tree_of(vec![
            leaf("p", 0.0, 0.0, 10.0, 10.0),
            leaf("p", 0.0, 5.0, 20.0, 10.0),
            leaf("p", 80.0, 80.0, 5.0, 5.0),
        ]);
        let expected = (0.5 + 0.25) / 3.0;
        assert!((overlap_metric(&tree) - expected).abs() < 1e-12);
    }

    #[test]
    fn containers_are_ignored_by_overlap() {
        let tree = tree_of(vec![
            leaf("div", 0.0, 0.0, 100.0, 100.0),
            leaf("p", 10.0, 10.0, 20.0, 10.0),
        ]);
        assert_eq!(overlap_metric(&tree), 0.0);
    }

    #[test]
    fn single_leaf_has_zero_overlap() {
        let tree = tree_of(vec![leaf("p", 0.0, 0.0, 10.0, 10.0)]);
        assert_eq!(overlap_metric(&tree), 0.0);
    }

    #[test]
    fn overlap_ignores_translation_and_scale() {
        let base = vec![
            Rect::new(0.0, 0.0, 10.0, 10.0),
            Rect::new(5.0, 5.0, 10.0, 10.0),
            Rect::new(30.0, 0.0, 10.0, 20.0),
        ];
        let moved: Vec<Rect<f64>> = base.iter().map(|r| r.translate(7.0, 13.0)).collect();
        let scaled: Vec<Rect<f64>> = base
            .iter()
            .map(|r| Rect::new(r.x * 3.0, r.y * 3.0, r.width * 3.0, r.height * 3.0))
            .collect();
        let reference = overlap_of_rects(&base);
        assert!((overlap_of_rects(&moved) - reference).abs() < 1e-12);
        assert!((overlap_of_rects(&scaled) - reference).abs() < 1e-12);
    }

    #[test]
    fn shared_left_edge_aligns_perfectly() {
        let tree = tree_of(vec![
            leaf("p", 10.0, 0.0, 30.0, 10.0),
            leaf("p", 10.0, 20.0, 50.0, 10.0),
            leaf("p", 10.0, 40.0, 20.0, 10.0),
        ]);
        let (ali, warning) = alignment_metric(&tree, (100.0, 100.0));
        assert_eq!(ali, 0.0);
        assert!(warning.is_none());
    }

    #[test]
    fn any_shared_axis_suffices() {
        let tree = tree_of(vec![
            leaf("p", 3.0, 12.0, 10.0, 10.0),
            leaf("p", 61.0, 12.0, 24.0, 17.0),
        ]);
        let (ali, _) = alignment_metric(&tree, (100.0, 100.0));
        assert_eq!(ali, 0.0);
    }

    #[test]
    fn tenth_canvas_gap_costs_about_a_tenth() {
        let tree = tree_of(vec![
            leaf("p", 0.0, 0.0, 10.0, 10.0),
            leaf("p", 10.0, 50.0, 10.0, 10.0),
        ]);
        let (ali, _) = alignment_metric(&tree, (100.0, 100.0));
        let expected = -(0.9f64.ln());
        assert!((ali - expected).abs() < 1e-9);
        assert!((ali - 0.10536).abs() < 1e-5);
    }

    #[test]
    fn fewer_than_two_leaves_warns_and_scores_zero() {
        let tree = tree_of(vec![leaf("p", 0.0, 0.0, 10.0, 10.0)]);
        let (ali, warning) = alignment_metric(&tree, (100.0, 100.0));
        assert_eq!(ali, 0.0);
        assert_eq!(warning, Some(MetricWarning::TooFewElements { n: 1 }));
    }

    #[test]
    fn huge_gaps_stay_finite() {
        let (ali, _): (f64, _) = alignment_of_rects(
            &[Rect::new(0.0, 0.0, 1.0, 1.0), Rect::new(10.0, 20.0, 1.0, 1.0)],
            (10.0, 10.0),
        );
        assert!(ali.is_finite());
        assert!(ali > 20.0);
    }

    #[test]
    fn exact_heights_score_zero() {
        let pairs = [(207.0, 207.0), (2071.0, 2071.0)];
        assert_eq!(height_metric(&pairs).unwrap(), 0.0);
    }

    #[test]
    fn symmetric_deviation_averages_to_a_tenth() {
        let pairs = [(110.0, 100.0), (90.0, 100.0)];
        let m: f64 = height_metric(&pairs).unwrap();
        assert!((m - 0.1).abs() < 1e-12);
    }

    #[test]
    fn overflow_only_ignores_underflow() {
        let pairs = [(110.0, 100.0), (90.0, 100.0)];
        let m: f64 = height_metric_with(&pairs, true).unwrap();
        assert!((m - 0.05).abs() < 1e-12);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert_eq!(height_metric::<f64>(&[]), Err(MetricsError::EmptyCorpus));
    }

    #[test]
    fn non_positive_target_is_an_error() {
        assert!(matches!(
            height_metric(&[(10.0, 0.0)]),
            Err(MetricsError::NonPositiveTarget(_))
        ));
    }

    #[test]
    fn document_report_combines_the_three_metrics() {
        let tree = tree_of(vec![
            leaf("p", 10.0, 0.0, 30.0, 10.0),
            leaf("p", 10.0, 20.0, 50.0, 10.0),
        ]);
        let (report, warnings) = document_metrics(&tree, (100.0, 100.0)).unwrap();
        assert_eq!(report.overlap, 0.0);
        assert_eq!(report.alignment, 0.0);
        assert_eq!(report.height, 0.0);
        assert_eq!(report.n_elements, 2);
        assert!(warnings.is_empty());
    }

    #[test]
    fn aggregation_averages_metrics_and_sums_counts() {
        let a = MetricReport::<f64> {
            overlap: 0.2,
            alignment: 0.4,
            height: 0.0,
            n_elements: 3,
        };
        let b = MetricReport {
            overlap: 0.0,
            alignment: 0.0,
            height: 0.1,
            n_elements: 5,
        };
        let agg = aggregate_reports(&[a, b]).unwrap();
        assert!((agg.overlap - 0.1).abs() < 1e-12);
        assert!((agg.alignment - 0.2).abs() < 1e-12);
        assert!((agg.height - 0.05).abs() < 1e-12);
        assert_eq!(agg.n_elements, 8);
        assert!(aggregate_reports::<f64>(&[]).is_none());
    }
}
