//! Interactive model-based image segmentation.
//!
//! Strokes drawn over an image pick out the watershed regions that form an
//! object model. Model and image are both turned into attributed relational
//! graphs, and every image region is labelled with the model vertex that its
//! merge would deform the least.
//!
//! ```
//! use argseg_core::{segment, MatchParams, RasterImage, StrokeLabel, StrokeSet, LabelId, WatershedParams};
//!
//! let image = RasterImage::from_fn(32, 16, |x, _| if x < 16 { [20, 20, 20] } else { [230, 230, 230] })?;
//! let strokes = StrokeSet::new(3, vec![
//!     StrokeLabel { id: LabelId(1), color: [255, 0, 0], brush_width: None, polylines: vec![vec![[2.0, 2.0], [2.0, 13.0]]] },
//!     StrokeLabel { id: LabelId(2), color: [0, 0, 255], brush_width: None, polylines: vec![vec![[29.0, 2.0], [29.0, 13.0]]] },
//! ]);
//! let result = segment(&image, &strokes, MatchParams::default(), WatershedParams::default())?;
//! assert_eq!(result.label_at(5, 5), LabelId(1));
//! assert_eq!(result.label_at(25, 5), LabelId(2));
//! # Ok::<(), argseg_core::Error>(())
//! ```

pub mod arg;
mod error;
pub mod fixtures;
pub mod io;
pub mod oversegment;
pub mod pipeline;
mod raster;

pub use arg::{
    assignment_cost, deform_vertex, edge_cost, match_graphs, relational_attribute, vertex_cost, Arg, Assignment,
    AttributeVector, Centroid, Deformation, Edge, EdgeId, LabelAssignment, LabelId, MatchParams, RelationalVector,
    Vertex, VertexId,
};
pub use error::{Error, Result};
pub use oversegment::{
    gradient_magnitude, luminance, region_adjacency, region_stats, watershed, RegionPartition, RegionStats,
    WatershedParams,
};
pub use pipeline::{
    apply_stamp, build_input_arg, build_model_arg, make_stamp, rasterize_strokes, render_labels, segment, ModelPack,
    Rect, SegmentationResult, StrokeLabel, StrokeSet,
};
pub use raster::{Grid, RasterImage, Rgb};
