//! File formats: PNG images, 16-bit region and label maps with JSON
//! sidecars, stroke files and model packs.

use std::collections::BTreeMap;
use std::io::Cursor;
use std::path::{Path, PathBuf};

use image::{ImageBuffer, ImageFormat, Luma};
use serde::{Deserialize, Serialize};

use crate::arg::LabelId;
use crate::error::{Error, Result};
use crate::oversegment::RegionPartition;
use crate::pipeline::{LabelEntry, ModelPack, SegmentationResult, StrokeSet};
use crate::raster::{RasterImage, Rgb};

pub fn decode_image(bytes: &[u8]) -> Result<RasterImage> {
    let img = image::load_from_memory(bytes)?.to_rgb8();
    RasterImage::try_from(&img)
}

/// Reads `(width, height)` from the image header without decoding pixels.
pub fn image_dimensions(bytes: &[u8]) -> Result<(u32, u32)> {
    Ok(image::ImageReader::new(Cursor::new(bytes)).with_guessed_format()?.into_dimensions()?)
}

pub fn load_image(path: impl AsRef<Path>) -> Result<RasterImage> {
    decode_image(&std::fs::read(path)?)
}

pub fn encode_rgb_png(image: &RasterImage) -> Result<Vec<u8>> {
    let mut out = Cursor::new(Vec::new());
    image.to_rgb_image().write_to(&mut out, ImageFormat::Png)?;
    Ok(out.into_inner())
}

fn encode_gray16(width: u32, height: u32, data: Vec<u16>) -> Result<Vec<u8>> {
    let buf: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::from_raw(width, height, data).expect("buffer size matches dimensions");
    let mut out = Cursor::new(Vec::new());
    buf.write_to(&mut out, ImageFormat::Png)?;
    Ok(out.into_inner())
}

fn decode_gray16(bytes: &[u8]) -> Result<(u32, u32, Vec<u16>)> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Png)?;
    let gray = match img {
        image::DynamicImage::ImageLuma16(g) => g,
        other => return Err(Error::Format(format!("expected a 16-bit grayscale PNG, got {:?}", other.color()))),
    };
    Ok((gray.width(), gray.height(), gray.into_raw()))
}

/// Region ids as a 16-bit grayscale PNG. Partitions with ids above 65535
/// cannot be represented and are rejected.
pub fn encode_partition_png(partition: &RegionPartition) -> Result<Vec<u8>> {
    if partition.region_count() > u16::MAX as u32 + 1 {
        return Err(Error::Format(format!(
            "partition has {} regions; ids above 65535 do not fit a 16-bit PNG",
            partition.region_count()
        )));
    }
    let data = partition.region_ids().iter().map(|&r| r as u16).collect();
    encode_gray16(partition.width(), partition.height(), data)
}

pub fn decode_partition_png(bytes: &[u8]) -> Result<RegionPartition> {
    let (w, h, data) = decode_gray16(bytes)?;
    RegionPartition::new(w, h, data.into_iter().map(u32::from).collect())
}

pub fn encode_label_map_png(result: &SegmentationResult) -> Result<Vec<u8>> {
    let data = result.label_map.iter().map(|l| l.0).collect();
    encode_gray16(result.width, result.height, data)
}

/// Returns `(width, height, labels)`.
pub fn decode_label_map_png(bytes: &[u8]) -> Result<(u32, u32, Vec<LabelId>)> {
    let (w, h, data) = decode_gray16(bytes)?;
    Ok((w, h, data.into_iter().map(LabelId).collect()))
}

/// `foo.png` -> `foo.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PartitionSidecar {
    pub region_count: u32,
}

#[derive(Serialize, Deserialize)]
struct LabelSidecar {
    unlabelled: LabelId,
    labels: Vec<LabelEntry>,
}

pub fn label_table_json(table: &BTreeMap<LabelId, Rgb>) -> Result<String> {
    let sidecar = LabelSidecar {
        unlabelled: LabelId::UNLABELLED,
        labels: table.iter().map(|(&id, &color)| LabelEntry { id, color }).collect(),
    };
    Ok(serde_json::to_string_pretty(&sidecar)?)
}

pub fn parse_label_table_json(text: &str) -> Result<BTreeMap<LabelId, Rgb>> {
    let sidecar: LabelSidecar = serde_json::from_str(text)?;
    Ok(sidecar.labels.into_iter().map(|e| (e.id, e.color)).collect())
}

/// Writes the partition PNG and its `{region_count}` sidecar.
pub fn write_partition(path: impl AsRef<Path>, partition: &RegionPartition) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_partition_png(partition)?)?;
    let sidecar = PartitionSidecar { region_count: partition.region_count() };
    std::fs::write(sidecar_path(path), serde_json::to_string_pretty(&sidecar)?)?;
    Ok(())
}

/// Writes the label map PNG and its label-table sidecar.
pub fn write_label_map(
    path: impl AsRef<Path>,
    result: &SegmentationResult,
    label_table: &BTreeMap<LabelId, Rgb>,
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_label_map_png(result)?)?;
    std::fs::write(sidecar_path(path), label_table_json(label_table)?)?;
    Ok(())
}

pub fn write_rgb_png(path: impl AsRef<Path>, image: &RasterImage) -> Result<()> {
    std::fs::write(path, encode_rgb_png(image)?)?;
    Ok(())
}

pub fn parse_strokes(text: &str) -> Result<StrokeSet> {
    let strokes: StrokeSet = serde_json::from_str(text)?;
    strokes.validate()?;
    Ok(strokes)
}

pub fn read_strokes(path: impl AsRef<Path>) -> Result<StrokeSet> {
    parse_strokes(&std::fs::read_to_string(path)?)
}

pub fn read_model_pack(path: impl AsRef<Path>) -> Result<ModelPack> {
    ModelPack::from_json(&std::fs::read_to_string(path)?)
}

pub fn write_model_pack(path: impl AsRef<Path>, pack: &ModelPack) -> Result<()> {
    std::fs::write(path, pack.to_json()?)?;
    Ok(())
}
