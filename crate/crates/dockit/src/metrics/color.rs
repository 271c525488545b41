//! sRGB to CIELAB conversion (D65 white point) and the CIE76 color
//! difference.

use crate::style::Rgb;

const D65_XN: f64 = 0.95047;
const D65_YN: f64 = 1.0;
const D65_ZN: f64 = 1.08883;

fn linearize(channel: u8) -> f64 {
    let c = channel as f64 / 255.0;
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn lab_f(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

/// Converts an sRGB color to CIELAB (L*, a*, b*) under the D65 illuminant.
/// Alpha is ignored.
pub fn srgb_to_lab(c: Rgb) -> (f64, f64, f64) {
    let r = linearize(c.r);
    let g = linearize(c.g);
    let b = linearize(c.b);
    let x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    let y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    let z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    let fx = lab_f(x / D65_XN);
    let fy = lab_f(y / D65_YN);
    let fz = lab_f(z / D65_ZN);
    (116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz))
}

/// CIE76 color difference: Euclidean distance in CIELAB.
pub fn delta_e76(a: Rgb, b: Rgb) -> f64 {
    let (l1, a1, b1) = srgb_to_lab(a);
    let (l2, a2, b2) = srgb_to_lab(b);
    ((l1 - l2).powi(2) + (a1 - a2).powi(2) + (b1 - b2).powi(2)).sqrt()
}
