//! Seeded random step functions.
//!
//! Generator "ChaCha8 stream v1": a `ChaCha8Rng` seeded with
//! `seed_from_u64(seed)` and switched to stream `case` with `set_stream`.
//! Draws, in order: `log10(r_min)` uniform in `[-4, -1]`, `R` uniform in
//! `[1, 10]`, `n` uniform in `8..=64`, then `n` values uniform in `[-1, 1]`.
//! The grid is geometric from `r_min` to `R`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grid::{make_graded_grid, Grading, StepFunction};

pub const GENERATOR_NAME: &str = "chacha8-stream-v1";

/// Which family of step functions to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Shape {
    /// Values uniform in `[-1, 1]`.
    #[default]
    Signed,
    /// `|values|` sorted in decreasing order.
    DecreasingNonNegative,
    /// Signed, with the first cell set to zero.
    AwayFromOrigin,
}

pub fn rng_for_case(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

pub fn random_step_function(seed: u64, case: u64, shape: Shape) -> StepFunction {
    let mut rng = rng_for_case(seed, case);
    let r_min = 10f64.powf(rng.random_range(-4.0..=-1.0));
    let end = rng.random_range(1.0..=10.0);
    let n = rng.random_range(8..=64usize);
    let mut values: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    match shape {
        Shape::Signed => {}
        Shape::DecreasingNonNegative => {
            values.iter_mut().for_each(|v| *v = v.abs());
            values.sort_by(|a, b| b.total_cmp(a));
        }
        Shape::AwayFromOrigin => values[0] = 0.0,
    }
    let grid = make_graded_grid(end, n, Grading::Geometric { r_min }).expect("parameters in range");
    StepFunction::new(grid, values).expect("one value per cell")
}
