//! End-to-end segmentation: strokes to model graph, image to input graph,
//! matching, rendering and stamps.

mod graphs;
mod render;
mod segment;
mod stamp;
mod strokes;

pub use graphs::{build_input_arg, build_model_arg, ModelGraph, ModelWarning, RegionTable};
pub use render::render_labels;
pub use segment::{
    apply_stamp, apply_stamp_partitioned, make_stamp, make_stamp_partitioned, segment, segment_partitioned, RegionLabel,
    SegmentationResult,
};
pub use stamp::{ModelPack, MODEL_PACK_VERSION};
pub use strokes::{rasterize_strokes, Rect, StrokeLabel, StrokeMask, StrokeSet, DEFAULT_BRUSH_WIDTH, STROKE_FORMAT_VERSION};

pub(crate) use stamp::LabelEntry;
