use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::arg::LabelId;
use crate::error::{Error, Result};
use crate::raster::Rgb;

pub const STROKE_FORMAT_VERSION: u32 = 1;
pub const DEFAULT_BRUSH_WIDTH: u32 = 3;

fn default_version() -> u32 {
    STROKE_FORMAT_VERSION
}

fn default_brush() -> u32 {
    DEFAULT_BRUSH_WIDTH
}

/// User strokes grouped by label. Serializes to the stroke file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrokeSet {
    #[serde(default = "default_version")]
    pub version: u32,
    #[serde(default = "default_brush")]
    pub brush_width: u32,
    pub labels: Vec<StrokeLabel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrokeLabel {
    pub id: LabelId,
    pub color: Rgb,
    /// Overrides the set-wide brush width for this label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brush_width: Option<u32>,
    /// Polylines in image pixel coordinates.
    pub polylines: Vec<Vec<[f64; 2]>>,
}

impl StrokeSet {
    pub fn new(brush_width: u32, labels: Vec<StrokeLabel>) -> Self {
        StrokeSet { version: STROKE_FORMAT_VERSION, brush_width, labels }
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != STROKE_FORMAT_VERSION {
            return Err(Error::invalid(format!("unsupported stroke format version {}", self.version)));
        }
        if self.brush_width == 0 {
            return Err(Error::invalid("brush_width must be positive"));
        }
        let mut ids = HashSet::new();
        let mut colors = HashSet::new();
        for label in &self.labels {
            if label.id == LabelId::UNLABELLED {
                return Err(Error::invalid(format!("label id {} is reserved", label.id)));
            }
            if !ids.insert(label.id) {
                return Err(Error::invalid(format!("duplicate label id {}", label.id)));
            }
            if !colors.insert(label.color) {
                return Err(Error::invalid(format!("duplicate label color {:?}", label.color)));
            }
            if label.brush_width == Some(0) {
                return Err(Error::invalid(format!("label {}: brush_width must be positive", label.id)));
            }
            for line in &label.polylines {
                if line.is_empty() {
                    return Err(Error::invalid(format!("label {}: empty polyline", label.id)));
                }
                if line.iter().flatten().any(|c| !c.is_finite()) {
                    return Err(Error::invalid(format!("label {}: non-finite point", label.id)));
                }
            }
        }
        Ok(())
    }

    pub fn label_table(&self) -> BTreeMap<LabelId, Rgb> {
        self.labels.iter().map(|l| (l.id, l.color)).collect()
    }
}

/// Axis-aligned rectangle in pixel units. The origin may be negative for
/// stamp placements that hang off the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x: i64,
    pub y: i64,
    pub width: u32,
    pub height: u32,
}

impl Rect {
    pub fn new(x: i64, y: i64, width: u32, height: u32) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(format!("rectangle must be non-empty, got {width}x{height}")));
        }
        Ok(Rect { x, y, width, height })
    }

    pub fn diagonal(&self) -> f64 {
        (self.width as f64).hypot(self.height as f64)
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= self.x && y >= self.y && x < self.x + self.width as i64 && y < self.y + self.height as i64
    }

    pub fn translated(&self, x: i64, y: i64) -> Rect {
        Rect { x, y, ..*self }
    }

    /// Overlap with a `width x height` image as `(x0, y0, x1, y1)`,
    /// half-open, or `None` when disjoint.
    pub fn clip(&self, width: u32, height: u32) -> Option<(u32, u32, u32, u32)> {
        let x0 = self.x.max(0);
        let y0 = self.y.max(0);
        let x1 = (self.x + self.width as i64).min(width as i64);
        let y1 = (self.y + self.height as i64).min(height as i64);
        (x0 < x1 && y0 < y1).then_some((x0 as u32, y0 as u32, x1 as u32, y1 as u32))
    }
}

/// Rasterized strokes: the label painted on each pixel, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrokeMask {
    pub width: u32,
    pub height: u32,
    pub labels: Vec<Option<LabelId>>,
}

impl StrokeMask {
    pub fn get(&self, x: u32, y: u32) -> Option<LabelId> {
        self.labels[y as usize * self.width as usize + x as usize]
    }

    pub fn painted(&self) -> impl Iterator<Item = (u32, u32, LabelId)> + '_ {
        let w = self.width as usize;
        self.labels
            .iter()
            .enumerate()
            .filter_map(move |(i, l)| l.map(|l| ((i % w) as u32, (i / w) as u32, l)))
    }

    /// Smallest rectangle enclosing every painted pixel.
    pub fn bounding_rect(&self) -> Option<Rect> {
        let mut it = self.painted();
        let (x, y, _) = it.next()?;
        let (mut x0, mut y0, mut x1, mut y1) = (x, y, x, y);
        for (x, y, _) in it {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        Some(Rect { x: x0 as i64, y: y0 as i64, width: x1 - x0 + 1, height: y1 - y0 + 1 })
    }
}

/// Offsets of a disc of diameter `brush_width` centered on a pixel.
fn brush_offsets(brush_width: u32) -> Vec<(i64, i64)> {
    let r = brush_width as f64 / 2.0;
    let reach = r.floor() as i64;
    let mut out = Vec::new();
    for dy in -reach..=reach {
        for dx in -reach..=reach {
            if (dx * dx + dy * dy) as f64 <= r * r {
                out.push((dx, dy));
            }
        }
    }
    out
}

/// Integer points of the segment `a -> b`, both ends included.
fn bresenham((x0, y0): (i64, i64), (x1, y1): (i64, i64), mut visit: impl FnMut(i64, i64)) {
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let (mut x, mut y, mut err) = (x0, y0, dx + dy);
    loop {
        visit(x, y);
        if x == x1 && y == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

/// Paints every polyline with a round brush. Later labels and later
/// polylines overwrite earlier ones.
///
/// Points are rounded to the nearest pixel and clamped to the image grown by
/// a margin just wider than the brush, so a stroke lying entirely off the
/// image paints nothing.
pub fn rasterize_strokes(strokes: &StrokeSet, width: u32, height: u32) -> StrokeMask {
    let mut labels = vec![None; width as usize * height as usize];
    for label in &strokes.labels {
        let brush = label.brush_width.unwrap_or(strokes.brush_width).max(1);
        let offsets = brush_offsets(brush);
        let margin = brush as i64 / 2 + 1;
        let clamp = |p: &[f64; 2]| {
            (
                (p[0].round() as i64).clamp(-margin, width as i64 - 1 + margin),
                (p[1].round() as i64).clamp(-margin, height as i64 - 1 + margin),
            )
        };
        let mut paint = |cx: i64, cy: i64| {
            for &(dx, dy) in &offsets {
                let (x, y) = (cx + dx, cy + dy);
                if x >= 0 && y >= 0 && x < width as i64 && y < height as i64 {
                    labels[y as usize * width as usize + x as usize] = Some(label.id);
                }
            }
        };
        for line in &label.polylines {
            let points: Vec<_> = line.iter().map(clamp).collect();
            if let [p] = points[..] {
                paint(p.0, p.1);
            }
            for pair in points.windows(2) {
                bresenham(pair[0], pair[1], &mut paint);
            }
        }
    }
    StrokeMask { width, height, labels }
}
