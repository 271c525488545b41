//! Axis-aligned rectangles in CSS pixel space.
//!
//! The coordinate system has the origin at the top-left corner of the
//! document, with `x` growing rightward and `y` growing downward, matching
//! how browsers report box positions.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Axis-aligned rectangle: top-left corner plus extent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect<S> {
    pub x: S,
    pub y: S,
    pub width: S,
    pub height: S,
}

impl<S: Scalar> Rect<S> {
    pub fn new(x: S, y: S, width: S, height: S) -> Self {
        Rect { x, y, width, height }
    }

    pub fn zero() -> Self {
        Rect {
            x: S::zero(),
            y: S::zero(),
            width: S::zero(),
            height: S::zero(),
        }
    }

    pub fn right(&self) -> S {
        self.x + self.width
    }

    pub fn bottom(&self) -> S {
        self.y + self.height
    }

    pub fn area(&self) -> S {
        self.width * self.height
    }

    pub fn center(&self) -> (S, S) {
        (self.x + self.width.half(), self.y + self.height.half())
    }

    /// Area of the intersection with `other`, zero when disjoint.
    pub fn intersection_area(&self, other: &Rect<S>) -> S {
        let left = self.x.max(other.x);
        let top = self.y.max(other.y);
        let right = self.right().min(other.right());
        let bottom = self.bottom().min(other.bottom());
        let w = (right - left).max(S::zero());
        let h = (bottom - top).max(S::zero());
        w * h
    }

    pub fn translate(&self, dx: S, dy: S) -> Rect<S> {
        Rect {
            x: self.x + dx,
            y: self.y + dy,
            width: self.width,
            height: self.height,
        }
    }

    /// Shrink by per-side insets `(top, right, bottom, left)`.
    ///
    /// Width and height clamp at zero so degenerate insets never produce a
    /// negative-extent rectangle.
    pub fn inset(&self, top: S, right: S, bottom: S, left: S) -> Rect<S> {
        Rect {
            x: self.x + left,
            y: self.y + top,
            width: (self.width - left - right).max(S::zero()),
            height: (self.height - top - bottom).max(S::zero()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_and_area() {
        let r = Rect::new(10.0, 20.0, 30.0, 40.0);
        assert_eq!(r.right(), 40.0);
        assert_eq!(r.bottom(), 60.0);
        assert_eq!(r.area(), 1200.0);
        assert_eq!(r.center(), (25.0, 40.0));
    }

    #[test]
    fn intersection_of_overlapping_rects() {
        let a = Rect::new(0.0, 0.0, 10.0, 10.0);
        let b = Rect::new(5.0, 5.0, 10.0, 10.0);
        assert_eq!(a.intersection_area(&b), 25.0);
        assert_eq!(b.intersection_area(&a), 25.0);
    }

    #[test]
    fn intersection_of_disjoint_rects_is_zero() {
        let a = Rect::new(0.0, 0.0, 10.0, 10.0);
        let b = Rect::new(20.0, 0.0, 10.0, 10.0);
        assert_eq!(a.intersection_area(&b), 0.0);
        let touching = Rect::new(10.0, 0.0, 5.0, 5.0);
        assert_eq!(a.intersection_area(&touching), 0.0);
    }

    #[test]
    fn self_intersection_is_area() {
        let a = Rect::new(3.0, 4.0, 7.0, 9.0);
        assert_eq!(a.intersection_area(&a), a.area());
    }

    #[test]
    fn inset_clamps_to_zero_extent() {
        let a: Rect<f64> = Rect::new(0.0, 0.0, 10.0, 10.0);
        let b = a.inset(2.0, 3.0, 2.0, 3.0);
        assert_eq!(b, Rect::new(3.0, 2.0, 4.0, 6.0));
        let c = a.inset(20.0, 20.0, 20.0, 20.0);
        assert_eq!(c.width, 0.0);
        assert_eq!(c.height, 0.0);
    }
}
