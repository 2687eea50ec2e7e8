use std::collections::BTreeSet;

use super::RegionPartition;
use crate::arg::{AttributeVector, Centroid};
use crate::error::{Error, Result};
use crate::raster::RasterImage;

#[derive(Debug, Clone, PartialEq)]
pub struct RegionStats {
    /// Mean RGB, each channel divided by 255.
    pub mean: AttributeVector,
    /// Mean of member pixel centers, in image coordinates.
    pub centroid: Centroid,
    pub pixel_count: u64,
}

/// Mean color, centroid and size of every region, indexed by region id.
pub fn region_stats(image: &RasterImage, partition: &RegionPartition) -> Result<Vec<RegionStats>> {
    if image.width() != partition.width() || image.height() != partition.height() {
        return Err(Error::invalid(format!(
            "image is {}x{} but partition is {}x{}",
            image.width(),
            image.height(),
            partition.width(),
            partition.height()
        )));
    }

    #[derive(Default, Clone, Copy)]
    struct Acc {
        rgb: [u64; 3],
        x: u64,
        y: u64,
        n: u64,
    }

    let w = image.width() as usize;
    let mut acc = vec![Acc::default(); partition.region_count() as usize];
    for (i, (&r, px)) in partition.region_ids().iter().zip(image.pixels()).enumerate() {
        let a = &mut acc[r as usize];
        for (sum, &v) in a.rgb.iter_mut().zip(px) {
            *sum += v as u64;
        }
        a.x += (i % w) as u64;
        a.y += (i / w) as u64;
        a.n += 1;
    }

    acc.into_iter()
        .map(|a| {
            let n = a.n as f64;
            let mean = a.rgb.map(|s| (s as f64 / (n * 255.0)).min(1.0));
            Ok(RegionStats {
                mean: AttributeVector::new(mean.to_vec())?,
                centroid: Centroid::new(a.x as f64 / n, a.y as f64 / n),
                pixel_count: a.n,
            })
        })
        .collect()
}

/// Unordered pairs `(a, b)`, `a < b`, of regions sharing a 4-neighbor
/// border.
pub fn region_adjacency(partition: &RegionPartition) -> BTreeSet<(u32, u32)> {
    let (w, h) = (partition.width() as usize, partition.height() as usize);
    let ids = partition.region_ids();
    let mut pairs = BTreeSet::new();
    let mut add = |a: u32, b: u32| {
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    };
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if x + 1 < w {
                add(ids[i], ids[i + 1]);
            }
            if y + 1 < h {
                add(ids[i], ids[i + w]);
            }
        }
    }
    pairs
}
