//! Synthetic inputs shared by tests, benchmarks and the acceptance suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::arg::{Arg, AttributeVector, Centroid, LabelId, Vertex, VertexId};
use crate::pipeline::{StrokeLabel, StrokeSet};
use crate::raster::{RasterImage, Rgb};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of a random graph.
#[derive(Debug, Clone, Copy)]
pub struct RandomArgSpec {
    pub vertices: usize,
    pub arity: usize,
    /// Upper bound on undirected degree.
    pub max_degree: usize,
    /// Edge attempts per vertex.
    pub edge_attempts: usize,
    /// Centroids fall in `[0, extent]^2`; `d_max` is the square's diagonal.
    pub extent: f64,
    pub labelled: bool,
}

impl RandomArgSpec {
    pub fn new(vertices: usize) -> Self {
        RandomArgSpec { vertices, arity: 3, max_degree: 8, edge_attempts: 3, extent: 100.0, labelled: false }
    }
}

/// Random graph with ids `0..n` stored in shuffled order.
pub fn random_arg(rng: &mut impl Rng, spec: RandomArgSpec) -> Arg {
    let mut vertices: Vec<Vertex> = (0..spec.vertices)
        .map(|k| Vertex {
            id: VertexId(k as u32),
            mu: AttributeVector::new((0..spec.arity).map(|_| rng.random::<f64>()).collect()).expect("unit range"),
            centroid: Centroid::new(rng.random::<f64>() * spec.extent, rng.random::<f64>() * spec.extent),
            pixel_count: rng.random_range(1..500),
            label: spec.labelled.then(|| LabelId(rng.random_range(0..4))),
        })
        .collect();

    let mut degree = vec![0usize; spec.vertices];
    let mut pairs = Vec::new();
    if spec.vertices > 1 {
        for a in 0..spec.vertices {
            for _ in 0..spec.edge_attempts {
                let b = rng.random_range(0..spec.vertices);
                if a != b && degree[a] < spec.max_degree && degree[b] < spec.max_degree && !pairs.contains(&(a.min(b), a.max(b))) {
                    degree[a] += 1;
                    degree[b] += 1;
                    pairs.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    vertices.shuffle(rng);
    let d_max = spec.extent * std::f64::consts::SQRT_2;
    Arg::from_adjacency(
        d_max,
        spec.arity,
        vertices,
        pairs.into_iter().map(|(a, b)| (VertexId(a as u32), VertexId(b as u32))),
    )
    .expect("generated graph is well formed")
}

/// Copy of `arg` with vertices stored in the given order.
pub fn reorder(arg: &Arg, order: &[usize]) -> Arg {
    let vertices = order.iter().map(|&i| arg.vertices()[i].clone()).collect();
    Arg::new(arg.d_max(), arg.attribute_arity(), vertices, arg.edges().to_vec()).expect("same structure")
}

/// A piecewise-constant test image with its per-pixel ground truth and one
/// stroke per object.
#[derive(Debug, Clone)]
pub struct SyntheticScene {
    pub image: RasterImage,
    pub truth: Vec<LabelId>,
    pub strokes: StrokeSet,
}

/// `width x height` image tiled by three flat rectangles (left half, top
/// right, bottom right) with additive Gaussian noise of `sigma` gray levels
/// per channel. Each rectangle gets one stroke along its length.
pub fn three_rectangles(width: u32, height: u32, sigma: f64, seed: u64) -> SyntheticScene {
    const COLORS: [Rgb; 3] = [[200, 40, 40], [40, 170, 60], [50, 60, 210]];
    let (hw, hh) = (width / 2, height / 2);
    let object = |x: u32, y: u32| -> usize {
        if x < hw {
            0
        } else if y < hh {
            1
        } else {
            2
        }
    };
    let mut rng = rng(seed);
    let noise = Normal::new(0.0, sigma).expect("finite sigma");
    let image = RasterImage::from_fn(width, height, |x, y| {
        COLORS[object(x, y)].map(|c| (c as f64 + noise.sample(&mut rng)).round().clamp(0.0, 255.0) as u8)
    })
    .expect("non-empty");
    let truth = (0..height).flat_map(|y| (0..width).map(move |x| (x, y))).map(|(x, y)| LabelId(object(x, y) as u16 + 1)).collect();

    let (w, h) = (width as f64, height as f64);
    let lines = [
        vec![[w * 0.25, 2.0], [w * 0.25, h - 3.0]],
        vec![[w * 0.5 + 3.0, h * 0.25], [w - 3.0, h * 0.25]],
        vec![[w * 0.5 + 3.0, h * 0.75], [w - 3.0, h * 0.75]],
    ];
    let strokes = StrokeSet::new(
        3,
        lines
            .into_iter()
            .enumerate()
            .map(|(k, line)| StrokeLabel {
                id: LabelId(k as u16 + 1),
                color: [[255, 0, 0], [0, 255, 0], [0, 0, 255]][k],
                brush_width: None,
                polylines: vec![line],
            })
            .collect(),
    );
    SyntheticScene { image, truth, strokes }
}

/// Image with Gaussian noise around a constant gray, for watershed
/// invariants.
pub fn noisy_gray(width: u32, height: u32, level: u8, sigma: f64, seed: u64) -> RasterImage {
    let mut rng = rng(seed);
    let noise = Normal::new(0.0, sigma).expect("finite sigma");
    RasterImage::from_fn(width, height, |_, _| {
        let v = (level as f64 + noise.sample(&mut rng)).round().clamp(0.0, 255.0) as u8;
        [v, v, v]
    })
    .expect("non-empty")
}
