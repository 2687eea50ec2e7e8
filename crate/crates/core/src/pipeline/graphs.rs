use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::arg::{Arg, Centroid, LabelId, Vertex, VertexId};
use crate::error::{Error, Result};
use crate::oversegment::{region_adjacency, region_stats, RegionPartition, RegionStats};
use crate::raster::RasterImage;

use super::strokes::{rasterize_strokes, Rect, StrokeSet};

/// Per-region statistics and adjacency of one partitioned image, computed
/// once and shared by the input and model graph builders.
#[derive(Debug, Clone)]
pub struct RegionTable {
    pub stats: Vec<RegionStats>,
    pub adjacency: BTreeSet<(u32, u32)>,
}

impl RegionTable {
    pub fn new(image: &RasterImage, partition: &RegionPartition) -> Result<Self> {
        Ok(RegionTable { stats: region_stats(image, partition)?, adjacency: region_adjacency(partition) })
    }

    /// Builds a graph over the `retained` regions with centroids expressed
    /// relative to `frame` and `d_max` equal to its diagonal. Region ids
    /// become vertex ids.
    fn build(&self, frame: Rect, retained: &[bool], labels: Option<&[Option<LabelId>]>) -> Result<Arg> {
        let vertices = self
            .stats
            .iter()
            .enumerate()
            .filter(|(r, _)| retained[*r])
            .map(|(r, s)| Vertex {
                id: VertexId(r as u32),
                mu: s.mean.clone(),
                centroid: Centroid::new(s.centroid.x - frame.x as f64, s.centroid.y - frame.y as f64),
                pixel_count: s.pixel_count,
                label: labels.and_then(|l| l[r]),
            })
            .collect();
        let pairs = self
            .adjacency
            .iter()
            .filter(|(a, b)| retained[*a as usize] && retained[*b as usize])
            .map(|&(a, b)| (VertexId(a), VertexId(b)));
        Arg::from_adjacency(frame.diagonal(), 3, vertices, pairs)
    }
}

fn check_dims(image: &RasterImage, partition: &RegionPartition) -> Result<()> {
    if image.width() != partition.width() || image.height() != partition.height() {
        return Err(Error::invalid("partition does not match image dimensions"));
    }
    Ok(())
}

/// Regions with at least one pixel inside `rect`.
fn regions_in_rect(partition: &RegionPartition, rect: Rect) -> Vec<bool> {
    let mut retained = vec![false; partition.region_count() as usize];
    if let Some((x0, y0, x1, y1)) = rect.clip(partition.width(), partition.height()) {
        for y in y0..y1 {
            for x in x0..x1 {
                retained[partition.region_at(x, y) as usize] = true;
            }
        }
    }
    retained
}

/// Input graph restricted to the regions intersecting `rect`, in the
/// rect-local frame. Region attributes cover the whole region.
pub fn build_input_arg(image: &RasterImage, partition: &RegionPartition, rect: Rect) -> Result<Arg> {
    check_dims(image, partition)?;
    let table = RegionTable::new(image, partition)?;
    input_arg_in_rect(&table, partition, rect)
}

pub(crate) fn input_arg_in_rect(table: &RegionTable, partition: &RegionPartition, rect: Rect) -> Result<Arg> {
    let retained = regions_in_rect(partition, rect);
    if !retained.contains(&true) {
        return Err(Error::EmptyInput);
    }
    table.build(rect, &retained, None)
}

/// Input graph over every region of the image, in the frame of `rect`.
pub(crate) fn input_arg_whole_image(table: &RegionTable, rect: Rect) -> Result<Arg> {
    table.build(rect, &vec![true; table.stats.len()], None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelWarning {
    /// A region was crossed by strokes of several labels; the majority won.
    MixedLabels { region: u32, counts: Vec<(LabelId, u64)>, chosen: LabelId },
}

impl fmt::Display for ModelWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelWarning::MixedLabels { region, counts, chosen } => {
                write!(f, "region {region} is crossed by several labels (")?;
                for (i, (l, n)) in counts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{l}: {n} px")?;
                }
                write!(f, "); labelled {chosen}")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModelGraph {
    pub arg: Arg,
    /// Bounding rectangle of all painted stroke pixels.
    pub rect: Rect,
    pub warnings: Vec<ModelWarning>,
}

/// Model graph over the regions touched by strokes. Each vertex takes the
/// label with the most stroke pixels inside its region, ties to the smaller
/// label id.
pub fn build_model_arg(image: &RasterImage, partition: &RegionPartition, strokes: &StrokeSet) -> Result<ModelGraph> {
    check_dims(image, partition)?;
    let table = RegionTable::new(image, partition)?;
    model_arg(&table, partition, strokes)
}

pub(crate) fn model_arg(table: &RegionTable, partition: &RegionPartition, strokes: &StrokeSet) -> Result<ModelGraph> {
    strokes.validate()?;
    let mask = rasterize_strokes(strokes, partition.width(), partition.height());
    let rect = mask.bounding_rect().ok_or(Error::EmptyModel)?;

    let mut votes: BTreeMap<u32, BTreeMap<LabelId, u64>> = BTreeMap::new();
    for (x, y, label) in mask.painted() {
        *votes.entry(partition.region_at(x, y)).or_default().entry(label).or_default() += 1;
    }

    let mut labels = vec![None; table.stats.len()];
    let mut retained = vec![false; table.stats.len()];
    let mut warnings = Vec::new();
    for (region, counts) in votes {
        let mut chosen = None;
        let mut best = 0;
        for (&label, &n) in &counts {
            if n > best {
                best = n;
                chosen = Some(label);
            }
        }
        let chosen = chosen.expect("every voted region has a positive count");
        if counts.len() > 1 {
            warnings.push(ModelWarning::MixedLabels {
                region,
                counts: counts.into_iter().collect(),
                chosen,
            });
        }
        labels[region as usize] = Some(chosen);
        retained[region as usize] = true;
    }

    let arg = table.build(rect, &retained, Some(&labels))?;
    Ok(ModelGraph { arg, rect, warnings })
}
