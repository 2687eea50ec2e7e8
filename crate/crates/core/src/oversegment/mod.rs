//! Deterministic watershed oversegmentation.
//!
//! The image is reduced to Rec.601 luminance, optionally box-blurred, and
//! turned into a 3x3 morphological gradient. Regional minima of the gradient
//! seed a priority flood over the 4-neighborhood; a pixel joins the first
//! region that reaches it, so no explicit watershed lines are produced.
//!
//! The flood itself runs on exact integer luminance sums, which makes plateau
//! detection and tie ordering independent of floating-point rounding.

mod regions;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::raster::{Grid, RasterImage};

pub use regions::{region_adjacency, region_stats, RegionStats};

pub const MAX_SMOOTHING_RADIUS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WatershedParams {
    smoothing_radius: u32,
}

impl Default for WatershedParams {
    fn default() -> Self {
        WatershedParams { smoothing_radius: 1 }
    }
}

impl WatershedParams {
    pub fn new(smoothing_radius: u32) -> Result<Self> {
        if smoothing_radius > MAX_SMOOTHING_RADIUS {
            return Err(Error::invalid(format!(
                "smoothing_radius must be at most {MAX_SMOOTHING_RADIUS}, got {smoothing_radius}"
            )));
        }
        Ok(WatershedParams { smoothing_radius })
    }

    pub fn smoothing_radius(&self) -> u32 {
        self.smoothing_radius
    }
}

/// Per-pixel region ids. Ids are dense in `[0, region_count)` and every
/// region is 4-connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPartition {
    width: u32,
    height: u32,
    region_ids: Vec<u32>,
    region_count: u32,
}

impl RegionPartition {
    /// Validates totality, density and 4-connectivity.
    pub fn new(width: u32, height: u32, region_ids: Vec<u32>) -> Result<Self> {
        let n = width as usize * height as usize;
        if n == 0 || region_ids.len() != n {
            return Err(Error::invalid(format!(
                "partition of {width}x{height} needs {n} ids, got {}",
                region_ids.len()
            )));
        }
        let region_count = region_ids.iter().max().map_or(0, |m| m + 1);
        let mut first = vec![usize::MAX; region_count as usize];
        for (i, &r) in region_ids.iter().enumerate() {
            if first[r as usize] == usize::MAX {
                first[r as usize] = i;
            }
        }
        if let Some(r) = first.iter().position(|&i| i == usize::MAX) {
            return Err(Error::invalid(format!("region id {r} is unused")));
        }

        let mut reached = vec![false; n];
        let mut queue = VecDeque::new();
        for (r, &start) in first.iter().enumerate() {
            reached[start] = true;
            queue.push_back(start);
            while let Some(i) = queue.pop_front() {
                for j in neighbors4(i, width as usize, height as usize).into_iter().flatten() {
                    if !reached[j] && region_ids[j] as usize == r {
                        reached[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        if let Some(i) = reached.iter().position(|r| !r) {
            return Err(Error::invalid(format!(
                "region {} is not 4-connected (pixel {}, {})",
                region_ids[i],
                i % width as usize,
                i / width as usize
            )));
        }

        Ok(RegionPartition { width, height, region_ids, region_count })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn region_ids(&self) -> &[u32] {
        &self.region_ids
    }

    pub fn region_count(&self) -> u32 {
        self.region_count
    }

    pub fn region_at(&self, x: u32, y: u32) -> u32 {
        self.region_ids[y as usize * self.width as usize + x as usize]
    }
}

/// Up, left, right, down.
#[inline]
fn neighbors4(i: usize, w: usize, h: usize) -> [Option<usize>; 4] {
    let (x, y) = (i % w, i / w);
    [
        (y > 0).then(|| i - w),
        (x > 0).then(|| i - 1),
        (x + 1 < w).then(|| i + 1),
        (y + 1 < h).then(|| i + w),
    ]
}

/// `(0.299 R + 0.587 G + 0.114 B) / 255` per pixel.
pub fn luminance(image: &RasterImage) -> Grid {
    let data = image
        .pixels()
        .iter()
        .map(|&[r, g, b]| (0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64) / 255.0)
        .collect();
    Grid { width: image.width(), height: image.height(), data }
}

/// 3x3 morphological gradient (max minus min), borders clamped.
pub fn gradient_magnitude(lum: &Grid) -> Grid {
    let data = morphological_gradient(&lum.data, lum.width as usize, lum.height as usize);
    Grid { width: lum.width, height: lum.height, data }
}

fn morphological_gradient<T: Copy + PartialOrd + std::ops::Sub<Output = T>>(src: &[T], w: usize, h: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(src.len());
    for y in 0..h {
        let ys = y.saturating_sub(1)..=(y + 1).min(h - 1);
        for x in 0..w {
            let xs = x.saturating_sub(1)..=(x + 1).min(w - 1);
            let mut lo = src[y * w + x];
            let mut hi = lo;
            for yy in ys.clone() {
                for xx in xs.clone() {
                    let v = src[yy * w + xx];
                    if v < lo {
                        lo = v;
                    }
                    if v > hi {
                        hi = v;
                    }
                }
            }
            out.push(hi - lo);
        }
    }
    out
}

/// Luminance in thousandths of a gray level: `299 R + 587 G + 114 B`.
fn integer_luminance(image: &RasterImage) -> Vec<u64> {
    image
        .pixels()
        .iter()
        .map(|&[r, g, b]| 299 * r as u64 + 587 * g as u64 + 114 * b as u64)
        .collect()
}

/// Box sum over a `(2r+1)^2` window with replicated borders. Every window
/// has the same number of terms, so sums order exactly like means.
fn box_sum(src: &[u64], w: usize, h: usize, r: usize) -> Vec<u64> {
    if r == 0 {
        return src.to_vec();
    }
    let clamp = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;
    let mut rows = vec![0u64; src.len()];
    for y in 0..h {
        for x in 0..w {
            rows[y * w + x] = (-(r as isize)..=r as isize)
                .map(|d| src[y * w + clamp(x as isize + d, w)])
                .sum();
        }
    }
    let mut out = vec![0u64; src.len()];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = (-(r as isize)..=r as isize)
                .map(|d| rows[clamp(y as isize + d, h) * w + x])
                .sum();
        }
    }
    out
}

/// Gradient used to drive the flood, in integer units.
fn flood_gradient(image: &RasterImage, params: WatershedParams) -> Vec<u64> {
    let (w, h) = (image.width() as usize, image.height() as usize);
    let lum = integer_luminance(image);
    let smoothed = box_sum(&lum, w, h, params.smoothing_radius as usize);
    morphological_gradient(&smoothed, w, h)
}

const UNCLAIMED: u32 = u32::MAX;

/// Priority-flood watershed. Identical inputs always give identical
/// partitions.
pub fn watershed(image: &RasterImage, params: WatershedParams) -> RegionPartition {
    let (w, h) = (image.width() as usize, image.height() as usize);
    let grad = flood_gradient(image, params);
    let mut labels = seed_minima(&grad, w, h);
    let region_count = labels.iter().filter(|&&l| l != UNCLAIMED).max().map_or(0, |m| m + 1);

    let mut heap = BinaryHeap::new();
    let mut seq: u64 = 0;
    let seeded: Vec<bool> = labels.iter().map(|&l| l != UNCLAIMED).collect();
    for i in 0..labels.len() {
        if !seeded[i] {
            continue;
        }
        for j in neighbors4(i, w, h).into_iter().flatten() {
            if labels[j] == UNCLAIMED {
                labels[j] = labels[i];
                heap.push(Reverse((grad[j], seq, j)));
                seq += 1;
            }
        }
    }
    while let Some(Reverse((_, _, i))) = heap.pop() {
        for j in neighbors4(i, w, h).into_iter().flatten() {
            if labels[j] == UNCLAIMED {
                labels[j] = labels[i];
                heap.push(Reverse((grad[j], seq, j)));
                seq += 1;
            }
        }
    }

    debug_assert!(labels.iter().all(|&l| l != UNCLAIMED));
    RegionPartition { width: image.width(), height: image.height(), region_ids: labels, region_count }
}

/// Labels every regional-minimum plateau, numbered in row-major order of
/// its first pixel. All other pixels stay `UNCLAIMED`.
fn seed_minima(grad: &[u64], w: usize, h: usize) -> Vec<u32> {
    let mut labels = vec![UNCLAIMED; grad.len()];
    let mut visited = vec![false; grad.len()];
    let mut plateau = Vec::new();
    let mut queue = VecDeque::new();
    let mut next = 0u32;
    for start in 0..grad.len() {
        if visited[start] {
            continue;
        }
        let level = grad[start];
        let mut is_minimum = true;
        plateau.clear();
        visited[start] = true;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            plateau.push(i);
            for j in neighbors4(i, w, h).into_iter().flatten() {
                if grad[j] < level {
                    is_minimum = false;
                } else if grad[j] == level && !visited[j] {
                    visited[j] = true;
                    queue.push_back(j);
                }
            }
        }
        if is_minimum {
            for &i in &plateau {
                labels[i] = next;
            }
            next += 1;
        }
    }
    labels
}
