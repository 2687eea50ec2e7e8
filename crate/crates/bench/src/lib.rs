//! Workloads shared by the benchmarks.

use argseg_core::fixtures::{noisy_gray, random_arg, rng, three_rectangles, RandomArgSpec};
use argseg_core::{Arg, RasterImage};

/// Unlabelled input graph and labelled model graph of the given sizes, both
/// with bounded degree.
pub fn graph_pair(input_vertices: usize, model_vertices: usize, seed: u64) -> (Arg, Arg) {
    let mut r = rng(seed);
    let input = random_arg(&mut r, RandomArgSpec::new(input_vertices));
    let model = random_arg(&mut r, RandomArgSpec { labelled: true, ..RandomArgSpec::new(model_vertices) });
    (input, model)
}

/// Noise-dominated image; yields many small watershed regions.
pub fn noisy_image(side: u32) -> RasterImage {
    noisy_gray(side, side, 128, 12.0, 1)
}

/// Piecewise-constant image with mild noise.
pub fn scene_image(side: u32) -> RasterImage {
    three_rectangles(side, side, 5.0, 1).image
}
