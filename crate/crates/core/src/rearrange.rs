//! Decreasing rearrangement of step functions on `(0, ∞)`.
//!
//! For a step function the rearrangement is combinatorial: the cells of
//! `|f|` are sorted by value (descending, stable) and laid out from 0 with
//! their original widths.

use crate::grid::{p_norm, Exponent, StepFunction};
use crate::operators::cumulative;

/// `f*` together with the source-cell index of each of its cells.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangedFunction {
    function: StepFunction,
    source_cells: Vec<usize>,
}

impl RearrangedFunction {
    pub fn function(&self) -> &StepFunction {
        &self.function
    }

    pub fn into_function(self) -> StepFunction {
        self.function
    }

    /// `source_cells()[k]` is the cell of the source function that became
    /// cell `k` of `f*`.
    pub fn source_cells(&self) -> &[usize] {
        &self.source_cells
    }
}

pub fn decreasing_rearrangement(f: &StepFunction) -> RearrangedFunction {
    let abs: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
    let mut order: Vec<usize> = (0..abs.len()).collect();
    order.sort_by(|&a, &b| abs[b].total_cmp(&abs[a]));
    let widths: Vec<f64> = order.iter().map(|&i| f.grid().width(i)).collect();
    let values = order.iter().map(|&i| abs[i]).collect();
    let function = if order.iter().enumerate().all(|(k, &i)| k == i) {
        // already in place: keep the original edges exactly
        f.with_values(values).expect("same grid")
    } else {
        StepFunction::from_widths(&widths, values).expect("positive widths")
    };
    RearrangedFunction {
        function,
        source_cells: order,
    }
}

/// `(∫|f|^p, ∫|f*|^p)`.
pub fn check_norm_preservation(f: &StepFunction, p: Exponent) -> (f64, f64) {
    let star = decreasing_rearrangement(f);
    (p_norm(f, p), p_norm(star.function(), p))
}

/// `(∫₀ˢ |f|, ∫₀ˢ f*)`.
pub fn check_partial_domination(f: &StepFunction, s: f64) -> (f64, f64) {
    let star = decreasing_rearrangement(f);
    (
        cumulative(&f.abs()).eval(s),
        cumulative(star.function()).eval(s),
    )
}

/// Total width of the cells where `|f| > level`.
pub fn distribution_function(f: &StepFunction, level: f64) -> f64 {
    f.values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > level)
        .map(|(i, _)| f.grid().width(i))
        .sum()
}
