//! Toolkit for a restricted HTML/CSS document dialect: strict parsing,
//! deterministic flex/grid layout, dataset synthesis, height-based rewards,
//! and layout quality metrics.

pub mod dom;
pub mod elements;
pub mod geometry;
pub mod layout;
pub mod metrics;
pub mod parse;
pub mod pipeline;
pub mod reward;
pub mod scalar;
pub mod serialize;
pub mod style;
pub mod svg;
pub mod task;
pub mod text;
pub mod validate;

pub use scalar::Scalar;

/// Concrete pixel scalar used by the parser, pipeline, and CLI.
pub type Px = f64;
/// Rectangle at the default scalar width.
pub type Rect = geometry::Rect<Px>;

/// A parsed document together with its resolved styles and laid-out boxes.
pub struct LaidDocument<S: Scalar> {
    pub ast: dom::DocumentAst,
    pub styles: style::ResolvedStyles<S>,
    pub tree: layout::BoxTree<S>,
}

/// Parses, styles, and lays out one document at the given viewport.
pub fn lay_out_source<S: Scalar>(
    html: &str,
    viewport: (S, S),
    model: &text::FontMetricModel<S>,
) -> Result<LaidDocument<S>, parse::ParseError> {
    let ast = parse::parse_document(html)?;
    let env = style::StyleEnv {
        viewport: Some(viewport),
        ..style::StyleEnv::default()
    };
    let styles = style::resolve_styles(&ast, &env);
    let tree = layout::layout(&ast, &styles, viewport, model);
    Ok(LaidDocument { ast, styles, tree })
}
