//! Cascade and style resolution: from stylesheet plus inline styles to one
//! [`ComputedStyle`] per node.

mod resolve;
pub mod value;

pub use resolve::{
    resolve_length, resolve_styles, specificity, AlignItems, ComputedStyle, Display,
    FlexDirection, FlexWrap, JustifyContent, Position, ResolvedStyles, StyleEnv, StyleWarning,
    StyleWarningKind, TextAlign,
};
pub use value::{Length, LengthContext, Rgb, Track};
