//! Grids on the half-line, the step-function model, and integration of
//! weighted powers of piecewise polynomials.

mod csv_io;
mod poly;
mod quadrature;

pub use self::csv_io::{
    read_step_function, step_function_from_csv, step_function_to_csv, write_step_function,
};
pub use self::poly::{
    integrate_weighted_power, integrate_weighted_power_estimate, PiecewisePoly, WeightedIntegral,
    WeightedPowerIntegrator,
};
pub use self::quadrature::GaussLegendre;

use crate::error::{HardyError, Result};

/// Default Gauss-Legendre order for every quadrature in the crate.
pub const DEFAULT_QUAD_ORDER: usize = 16;

/// Strictly increasing cell edges `0 = r_0 < r_1 < ... < r_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    edges: Vec<f64>,
}

impl Grid {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(HardyError::invalid("a grid needs at least one cell"));
        }
        if edges[0] != 0.0 {
            return Err(HardyError::invalid(format!(
                "grid must start at 0, got {}",
                edges[0]
            )));
        }
        for w in edges.windows(2) {
            if !w[1].is_finite() || w[1] <= w[0] {
                return Err(HardyError::invalid(format!(
                    "grid edges must be finite and strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { edges })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn cell_count(&self) -> usize {
        self.edges.len() - 1
    }

    /// The support radius `r_n`.
    pub fn support_end(&self) -> f64 {
        *self.edges.last().unwrap()
    }

    pub fn cell(&self, i: usize) -> (f64, f64) {
        (self.edges[i], self.edges[i + 1])
    }

    pub fn width(&self, i: usize) -> f64 {
        self.edges[i + 1] - self.edges[i]
    }

    /// Index of the cell `(r_{i}, r_{i+1}]` containing `r`, or `None` when
    /// `r <= 0` or `r > r_n`.
    pub fn locate(&self, r: f64) -> Option<usize> {
        if r <= 0.0 || r > self.support_end() {
            return None;
        }
        // first edge >= r, minus one
        let k = self.edges.partition_point(|&e| e < r);
        Some(k - 1)
    }

    /// Union of the edges of two grids.
    pub fn merged(&self, other: &Grid) -> Grid {
        let mut edges: Vec<f64> = self.edges.iter().chain(&other.edges).copied().collect();
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        Grid { edges }
    }
}

/// Cell placement for [`make_graded_grid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grading {
    Uniform,
    /// Geometric edges from `r_min` up to the support end, prefixed by 0.
    Geometric {
        r_min: f64,
    },
}

pub fn make_graded_grid(support_end: f64, n_cells: usize, grading: Grading) -> Result<Grid> {
    if !(support_end > 0.0 && support_end.is_finite()) {
        return Err(HardyError::invalid(format!(
            "support end must be positive and finite, got {support_end}"
        )));
    }
    if n_cells < 1 {
        return Err(HardyError::invalid("n_cells must be at least 1"));
    }
    let edges = match grading {
        Grading::Uniform => {
            let h = support_end / n_cells as f64;
            let mut e: Vec<f64> = (0..n_cells).map(|k| k as f64 * h).collect();
            e.push(support_end);
            e
        }
        Grading::Geometric { r_min } => {
            if !(r_min > 0.0 && r_min < support_end) {
                return Err(HardyError::invalid(format!(
                    "geometric grading needs 0 < r_min < R, got r_min = {r_min}, R = {support_end}"
                )));
            }
            let mut e = vec![0.0];
            if n_cells == 1 {
                e.push(support_end);
            } else {
                let log_ratio = (support_end / r_min).ln();
                let m = (n_cells - 1) as f64;
                for k in 0..n_cells - 1 {
                    e.push(r_min * (log_ratio * k as f64 / m).exp());
                }
                e.push(support_end);
            }
            e
        }
    };
    Grid::new(edges)
}

/// The exponent `p` of an Lᵖ quantity; always `1 < p < ∞`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 1.0 {
            Ok(Self(p))
        } else {
            Err(HardyError::invalid(format!(
                "exponent must satisfy 1 < p < inf, got {p}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Right-continuous step function with one value per grid cell, zero
/// beyond the support end.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cell_count() {
            return Err(HardyError::invalid(format!(
                "{} values for {} cells",
                values.len(),
                grid.cell_count()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(HardyError::invalid(format!("non-finite cell value {v}")));
        }
        Ok(Self { grid, values })
    }

    pub fn from_edges(edges: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(Grid::new(edges)?, values)
    }

    /// Cells laid out left to right from 0 with the given widths.
    pub fn from_widths(widths: &[f64], values: Vec<f64>) -> Result<Self> {
        let mut edges = Vec::with_capacity(widths.len() + 1);
        edges.push(0.0);
        let mut acc = 0.0;
        for &w in widths {
            acc += w;
            edges.push(acc);
        }
        Self::from_edges(edges, values)
    }

    /// `c · 1_{(a, b]}` on the grid `{0, a, b}` (or `{0, b}` when `a = 0`).
    pub fn indicator(a: f64, b: f64, c: f64) -> Result<Self> {
        if a == 0.0 {
            Self::from_edges(vec![0.0, b], vec![c])
        } else {
            Self::from_edges(vec![0.0, a, b], vec![0.0, c])
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn edges(&self) -> &[f64] {
        self.grid.edges()
    }

    pub fn cell_count(&self) -> usize {
        self.values.len()
    }

    pub fn support_end(&self) -> f64 {
        self.grid.support_end()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Value at `r` (the value of the cell `(r_{i-1}, r_i]` holding `r`).
    pub fn eval(&self, r: f64) -> f64 {
        self.grid.locate(r).map_or(0.0, |i| self.values[i])
    }

    pub fn abs(&self) -> StepFunction {
        self.map_values(f64::abs)
    }

    pub fn scaled(&self, c: f64) -> StepFunction {
        self.map_values(|v| c * v)
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> StepFunction {
        StepFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn with_values(&self, values: Vec<f64>) -> Result<StepFunction> {
        StepFunction::new(self.grid.clone(), values)
    }

    /// The Lᵖ-normalised dilation `t ↦ λ^{1/p} f(λ t)`; every ratio in the
    /// crate is invariant under it.
    pub fn dilated(&self, lambda: f64, p: Exponent) -> Result<StepFunction> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(HardyError::invalid(format!(
                "dilation factor must be positive, got {lambda}"
            )));
        }
        let amp = lambda.powf(1.0 / p.value());
        let edges = self.edges().iter().map(|e| e / lambda).collect();
        StepFunction::from_edges(edges, self.values.iter().map(|v| amp * v).collect())
    }
}

/// `∫₀^∞ |f|^p`, summed exactly cell by cell.
pub fn p_norm(f: &StepFunction, p: Exponent) -> f64 {
    let p = p.value();
    f.values
        .iter()
        .enumerate()
        .map(|(i, v)| v.abs().powf(p) * f.grid.width(i))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grids() {
        let g = make_graded_grid(1.0, 2, Grading::Uniform).unwrap();
        assert_eq!(g.edges(), &[0.0, 0.5, 1.0]);
        let g = make_graded_grid(1.0, 1, Grading::Uniform).unwrap();
        assert_eq!(g.edges(), &[0.0, 1.0]);
    }

    #[test]
    fn geometric_grid_ratio_two() {
        let g = make_graded_grid(2.0, 4, Grading::Geometric { r_min: 0.25 }).unwrap();
        let want = [0.0, 0.25, 0.5, 1.0, 2.0];
        for (a, b) in g.edges().iter().zip(want) {
            assert!((a - b).abs() <= 1e-15, "{:?}", g.edges());
        }
    }

    #[test]
    fn graded_grid_rejects_bad_parameters() {
        assert!(make_graded_grid(0.0, 2, Grading::Uniform).is_err());
        assert!(make_graded_grid(-1.0, 2, Grading::Uniform).is_err());
        assert!(make_graded_grid(1.0, 0, Grading::Uniform).is_err());
        assert!(make_graded_grid(1.0, 4, Grading::Geometric { r_min: 1.0 }).is_err());
        assert!(make_graded_grid(1.0, 4, Grading::Geometric { r_min: 0.0 }).is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(vec![0.0]).is_err());
        assert!(Grid::new(vec![0.1, 1.0]).is_err());
        assert!(Grid::new(vec![0.0, 1.0, 1.0]).is_err());
        assert!(Grid::new(vec![0.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn locate_is_right_closed() {
        let g = Grid::new(vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(g.locate(0.0), None);
        assert_eq!(g.locate(0.5), Some(0));
        assert_eq!(g.locate(1.0), Some(0));
        assert_eq!(g.locate(1.5), Some(1));
        assert_eq!(g.locate(2.0), Some(1));
        assert_eq!(g.locate(2.5), None);
    }

    #[test]
    fn p_norm_examples() {
        let p2 = Exponent::new(2.0).unwrap();
        let ind = StepFunction::indicator(0.0, 1.0, 1.0).unwrap();
        assert_eq!(p_norm(&ind, p2), 1.0);
        let f = StepFunction::from_edges(vec![0.0, 1.0, 2.0], vec![2.0, 1.0]).unwrap();
        assert_eq!(p_norm(&f, p2), 5.0);
        assert_eq!(p_norm(&f.scaled(0.0), p2), 0.0);
    }

    #[test]
    fn exponent_bounds() {
        assert!(Exponent::new(1.0).is_err());
        assert!(Exponent::new(0.5).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
        assert!(Exponent::new(f64::INFINITY).is_err());
        assert!(Exponent::new(1.0000001).is_ok());
    }

    #[test]
    fn step_function_checks_lengths() {
        let g = Grid::new(vec![0.0, 1.0]).unwrap();
        assert!(StepFunction::new(g.clone(), vec![]).is_err());
        assert!(StepFunction::new(g.clone(), vec![f64::NAN]).is_err());
        assert!(StepFunction::new(g, vec![1.0]).is_ok());
    }
}
