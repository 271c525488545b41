//! Element-level derendering scores between a predicted document and the
//! ground truth it was reconstructed from: Block (matched fraction), Text
//! (character similarity), Position (center distance), Color (CIE76).
//!
//! Ground-truth text leaves are matched to predicted text leaves greedily
//! by descending similarity; image leaves are matched by center distance
//! and contribute to the position score only. Ties break deterministically
//! so scores never depend on iteration order.

use serde::{Deserialize, Serialize};

use crate::metrics::color::delta_e76;
use crate::scalar::Scalar;
use crate::style::Rgb;
use crate::LaidDocument;

/// Minimum normalized similarity for a text pair to count as a match.
const SIMILARITY_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerenderScores<S> {
    /// Fraction of ground-truth text leaves that found a match.
    pub block: S,
    /// Mean text similarity over matches.
    pub text: S,
    /// Mean center proximity over matched texts and images.
    pub position: S,
    /// Mean CIE76 color proximity over matched texts.
    pub color: S,
}

/// One text leaf reduced to what the scores need.
#[derive(Debug, Clone, PartialEq)]
pub struct TextElement<S> {
    pub text: String,
    pub center: (S, S),
    pub color: Rgb,
}

/// Levenshtein distance over characters.
fn edit_distance(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let subst = prev[j] + usize::from(ca != cb);
            cur[j + 1] = subst.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Normalized character similarity: 1 - distance / max_len. Two empty
/// strings are identical.
pub fn text_similarity(a: &str, b: &str) -> f64 {
    let ac: Vec<char> = a.chars().collect();
    let bc: Vec<char> = b.chars().collect();
    let max_len = ac.len().max(bc.len());
    if max_len == 0 {
        return 1.0;
    }
    1.0 - edit_distance(&ac, &bc) as f64 / max_len as f64
}

fn center_distance<S: Scalar>(a: (S, S), b: (S, S)) -> f64 {
    let dx = (a.0 - b.0).as_f64();
    let dy = (a.1 - b.1).as_f64();
    (dx * dx + dy * dy).sqrt()
}

fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Text leaves (document order) and image leaf centers of a laid-out
/// document, as consumed by [`score_elements`].
pub fn document_elements<S: Scalar>(
    doc: &LaidDocument<S>,
) -> (Vec<TextElement<S>>, Vec<(S, S)>) {
    let nodes = doc.ast.nodes();
    let mut texts = Vec::new();
    let mut imgs = Vec::new();
    for b in doc.tree.leaf_boxes() {
        let center = b.border_box.center();
        match b.tag.as_str() {
            "p" => texts.push(TextElement {
                text: normalize_ws(nodes[b.node_index].node.text.as_deref().unwrap_or("")),
                center,
                color: doc.styles.styles[b.node_index].color,
            }),
            "img" => imgs.push(center),
            _ => {}
        }
    }
    (texts, imgs)
}

struct Candidate {
    gt: usize,
    pred: usize,
    sim: f64,
    dist: f64,
}

fn color_key(c: Rgb) -> (u8, u8, u8, u64) {
    (c.r, c.g, c.b, c.a.to_bits())
}

fn match_texts<S: Scalar>(
    gt: &[TextElement<S>],
    pred: &[TextElement<S>],
) -> Vec<(usize, usize, f64)> {
    let mut candidates = Vec::new();
    for (gi, g) in gt.iter().enumerate() {
        for (pi, p) in pred.iter().enumerate() {
            let sim = text_similarity(&g.text, &p.text);
            if sim >= SIMILARITY_THRESHOLD {
                candidates.push(Candidate {
                    gt: gi,
                    pred: pi,
                    sim,
                    dist: center_distance(g.center, p.center),
                });
            }
        }
    }
    candidates.sort_by(|a, b| {
        b.sim
            .total_cmp(&a.sim)
            .then(a.dist.total_cmp(&b.dist))
            .then(a.gt.cmp(&b.gt))
            .then(pred[a.pred].text.cmp(&pred[b.pred].text))
            .then(color_key(pred[a.pred].color).cmp(&color_key(pred[b.pred].color)))
            .then(a.pred.cmp(&b.pred))
    });
    greedy_pick(gt.len(), pred.len(), &candidates)
}

fn match_images<S: Scalar>(gt: &[(S, S)], pred: &[(S, S)]) -> Vec<(usize, usize, f64)> {
    let mut candidates = Vec::new();
    for (gi, g) in gt.iter().enumerate() {
        for (pi, p) in pred.iter().enumerate() {
            candidates.push(Candidate {
                gt: gi,
                pred: pi,
                sim: 0.0,
                dist: center_distance(*g, *p),
            });
        }
    }
    candidates.sort_by(|a, b| {
        a.dist
            .total_cmp(&b.dist)
            .then(a.gt.cmp(&b.gt))
            .then(a.pred.cmp(&b.pred))
    });
    greedy_pick(gt.len(), pred.len(), &candidates)
}

fn greedy_pick(
    n_gt: usize,
    n_pred: usize,
    candidates: &[Candidate],
) -> Vec<(usize, usize, f64)> {
    let mut gt_used = vec![false; n_gt];
    let mut pred_used = vec![false; n_pred];
    let mut picked = Vec::new();
    for c in candidates {
        if !gt_used[c.gt] && !pred_used[c.pred] {
            gt_used[c.gt] = true;
            pred_used[c.pred] = true;
            picked.push((c.gt, c.pred, c.sim));
        }
    }
    picked
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Scores predicted elements against ground-truth elements on a canvas of
/// (width, height). A ground truth without text leaves scores the text
/// components vacuously at 1; a ground truth with leaves but no matches
/// scores 0.
pub fn score_elements<S: Scalar>(
    pred_texts: &[TextElement<S>],
    pred_imgs: &[(S, S)],
    gt_texts: &[TextElement<S>],
    gt_imgs: &[(S, S)],
    canvas: (S, S),
) -> DerenderScores<S> {
    let text_matches = match_texts(gt_texts, pred_texts);
    let img_matches = match_images(gt_imgs, pred_imgs);
    let span = (canvas.0 + canvas.1).as_f64();

    let proximity = |g: (S, S), p: (S, S)| -> f64 {
        let d = (g.0 - p.0).as_f64().abs() + (g.1 - p.1).as_f64().abs();
        (1.0 - d / span).clamp(0.0, 1.0)
    };

    let (block, text, color) = if gt_texts.is_empty() {
        (1.0, 1.0, 1.0)
    } else if text_matches.is_empty() {
        (0.0, 0.0, 0.0)
    } else {
        let sims: Vec<f64> = text_matches.iter().map(|&(_, _, s)| s).collect();
        let colors: Vec<f64> = text_matches
            .iter()
            .map(|&(g, p, _)| {
                let de = delta_e76(gt_texts[g].color, pred_texts[p].color);
                (1.0 - de / 100.0).clamp(0.0, 1.0)
            })
            .collect();
        (
            text_matches.len() as f64 / gt_texts.len() as f64,
            mean(&sims),
            mean(&colors),
        )
    };

    let mut proximities: Vec<f64> = text_matches
        .iter()
        .map(|&(g, p, _)| proximity(gt_texts[g].center, pred_texts[p].center))
        .collect();
    proximities.extend(
        img_matches
            .iter()
            .map(|&(g, p, _)| proximity(gt_imgs[g], pred_imgs[p])),
    );
    let position = if gt_texts.is_empty() && gt_imgs.is_empty() {
        1.0
    } else if proximities.is_empty() {
        0.0
    } else {
        mean(&proximities)
    };

    DerenderScores {
        block: S::of(block),
        text: S::of(text),
        position: S::of(position),
        color: S::of(color),
    }
}

/// Scores a predicted document against the ground truth, both laid out at
/// the same declared canvas.
pub fn derender_scores<S: Scalar>(
    pred: &LaidDocument<S>,
    gt: &LaidDocument<S>,
    canvas: (S, S),
) -> DerenderScores<S> {
    let (pred_texts, pred_imgs) = document_elements(pred);
    let (gt_texts, gt_imgs) = document_elements(gt);
    score_elements(&pred_texts, &pred_imgs, &gt_texts, &gt_imgs, canvas)
}
