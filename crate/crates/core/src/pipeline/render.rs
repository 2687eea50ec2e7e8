use std::collections::BTreeMap;

use crate::arg::LabelId;
use crate::error::{Error, Result};
use crate::raster::{RasterImage, Rgb};

use super::segment::SegmentationResult;

/// Alpha-blends label colors over `image`. Unlabelled pixels are copied
/// unchanged. Channels round half up.
pub fn render_labels(
    result: &SegmentationResult,
    label_table: &BTreeMap<LabelId, Rgb>,
    image: &RasterImage,
    overlay_opacity: f64,
) -> Result<RasterImage> {
    if !(0.0..=1.0).contains(&overlay_opacity) {
        return Err(Error::invalid(format!("overlay opacity must be in [0, 1], got {overlay_opacity}")));
    }
    if result.width != image.width() || result.height != image.height() {
        return Err(Error::invalid("segmentation result does not match image dimensions"));
    }
    let pixels = result
        .label_map
        .iter()
        .zip(image.pixels())
        .map(|(&label, &src)| {
            if label == LabelId::UNLABELLED {
                return Ok(src);
            }
            let color = label_table
                .get(&label)
                .ok_or_else(|| Error::Inconsistent(format!("label {label} missing from label table")))?;
            Ok([0, 1, 2].map(|c| blend(color[c], src[c], overlay_opacity)))
        })
        .collect::<Result<Vec<_>>>()?;
    RasterImage::new(image.width(), image.height(), pixels)
}

fn blend(fg: u8, bg: u8, opacity: f64) -> u8 {
    let v = opacity * fg as f64 + (1.0 - opacity) * bg as f64;
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}
