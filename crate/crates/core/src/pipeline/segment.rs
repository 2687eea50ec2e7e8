use std::collections::BTreeMap;

use crate::arg::{match_graphs, Arg, LabelAssignment, LabelId, MatchParams, VertexId};
use crate::error::{Error, Result};
use crate::oversegment::{watershed, RegionPartition, WatershedParams};
use crate::raster::RasterImage;

use super::graphs::{input_arg_in_rect, input_arg_whole_image, model_arg, ModelWarning, RegionTable};
use super::stamp::{ModelPack, MODEL_PACK_VERSION};
use super::strokes::{Rect, StrokeSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionLabel {
    pub model_vertex: VertexId,
    pub label: LabelId,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationResult {
    pub width: u32,
    pub height: u32,
    /// Row-major; [`LabelId::UNLABELLED`] where no region was matched.
    pub label_map: Vec<LabelId>,
    /// Keyed by watershed region id.
    pub regions: BTreeMap<u32, RegionLabel>,
    pub params: MatchParams,
    /// Rectangle that fixes the coordinate frame (and `d_max`) of both
    /// graphs, in image coordinates.
    pub rect: Rect,
    pub region_count: u32,
    pub warnings: Vec<ModelWarning>,
}

impl SegmentationResult {
    pub fn label_at(&self, x: u32, y: u32) -> LabelId {
        self.label_map[y as usize * self.width as usize + x as usize]
    }
}

fn region_labels(input: &Arg, model: &Arg, assignment: &LabelAssignment) -> Result<BTreeMap<u32, RegionLabel>> {
    input
        .vertices()
        .iter()
        .map(|v| {
            let a = assignment
                .get(v.id)
                .ok_or_else(|| Error::Inconsistent(format!("input vertex {} was not assigned", v.id)))?;
            let label = model
                .vertex(a.model_vertex)?
                .label
                .ok_or_else(|| Error::Inconsistent(format!("model vertex {} has no label", a.model_vertex)))?;
            Ok((v.id.0, RegionLabel { model_vertex: a.model_vertex, label, cost: a.cost }))
        })
        .collect()
}

/// Oversegments `image`, builds the model from `strokes` and labels every
/// region of the image.
pub fn segment(
    image: &RasterImage,
    strokes: &StrokeSet,
    params: MatchParams,
    watershed_params: WatershedParams,
) -> Result<SegmentationResult> {
    let partition = watershed(image, watershed_params);
    segment_partitioned(image, &partition, strokes, params)
}

/// [`segment`] over a precomputed partition of `image`.
///
/// Both graphs share the stroke rectangle's frame and `d_max`. Every region
/// of the image is labelled, so the label map is constant on each region.
pub fn segment_partitioned(
    image: &RasterImage,
    partition: &RegionPartition,
    strokes: &StrokeSet,
    params: MatchParams,
) -> Result<SegmentationResult> {
    let table = RegionTable::new(image, partition)?;
    let model = model_arg(&table, partition, strokes)?;
    let input = input_arg_whole_image(&table, model.rect)?;
    let assignment = match_graphs(&input, &model.arg, params)?;
    let regions = region_labels(&input, &model.arg, &assignment)?;

    let label_map = partition
        .region_ids()
        .iter()
        .map(|r| regions.get(r).map_or(LabelId::UNLABELLED, |l| l.label))
        .collect();
    Ok(SegmentationResult {
        width: image.width(),
        height: image.height(),
        label_map,
        regions,
        params,
        rect: model.rect,
        region_count: partition.region_count(),
        warnings: model.warnings,
    })
}

/// Derives a reusable stamp from the strokes drawn on `image`.
pub fn make_stamp(
    image: &RasterImage,
    strokes: &StrokeSet,
    params: MatchParams,
    watershed_params: WatershedParams,
) -> Result<ModelPack> {
    let partition = watershed(image, watershed_params);
    make_stamp_partitioned(image, &partition, strokes, params)
}

pub fn make_stamp_partitioned(
    image: &RasterImage,
    partition: &RegionPartition,
    strokes: &StrokeSet,
    params: MatchParams,
) -> Result<ModelPack> {
    let table = RegionTable::new(image, partition)?;
    let model = model_arg(&table, partition, strokes)?;
    let pack = ModelPack {
        model_arg: model.arg,
        rect: model.rect,
        label_table: strokes.label_table(),
        params_default: params,
        format_version: MODEL_PACK_VERSION,
    };
    pack.validate()?;
    Ok(pack)
}

/// Applies a stamp with its top-left corner at `at`. Only regions touching
/// the placed rectangle are matched, and pixels outside it stay unlabelled.
/// The model is taken from the pack as is and never re-derived.
pub fn apply_stamp(
    pack: &ModelPack,
    image: &RasterImage,
    at: (i64, i64),
    params: MatchParams,
    watershed_params: WatershedParams,
) -> Result<SegmentationResult> {
    placed_rect(pack, image, at)?;
    let partition = watershed(image, watershed_params);
    apply_stamp_partitioned(pack, image, &partition, at, params)
}

fn placed_rect(pack: &ModelPack, image: &RasterImage, at: (i64, i64)) -> Result<Rect> {
    let rect = pack.rect.translated(at.0, at.1);
    if rect.clip(image.width(), image.height()).is_none() {
        return Err(Error::InvalidPlacement(format!(
            "stamp of {}x{} at ({}, {}) does not overlap the {}x{} image",
            rect.width,
            rect.height,
            at.0,
            at.1,
            image.width(),
            image.height()
        )));
    }
    Ok(rect)
}

pub fn apply_stamp_partitioned(
    pack: &ModelPack,
    image: &RasterImage,
    partition: &RegionPartition,
    at: (i64, i64),
    params: MatchParams,
) -> Result<SegmentationResult> {
    pack.validate()?;
    let rect = placed_rect(pack, image, at)?;
    let table = RegionTable::new(image, partition)?;
    let input = input_arg_in_rect(&table, partition, rect)?;
    let assignment = match_graphs(&input, &pack.model_arg, params)?;
    let regions = region_labels(&input, &pack.model_arg, &assignment)?;

    let mut label_map = vec![LabelId::UNLABELLED; partition.region_ids().len()];
    let (x0, y0, x1, y1) = rect.clip(image.width(), image.height()).expect("placement checked");
    let w = image.width() as usize;
    for y in y0..y1 {
        for x in x0..x1 {
            let i = y as usize * w + x as usize;
            label_map[i] = regions[&partition.region_ids()[i]].label;
        }
    }
    Ok(SegmentationResult {
        width: image.width(),
        height: image.height(),
        label_map,
        regions,
        params,
        rect,
        region_count: partition.region_count(),
        warnings: Vec::new(),
    })
}
