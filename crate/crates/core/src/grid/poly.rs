//! Piecewise polynomials of degree at most two with an affine tail, and the
//! integral `∫₀^∞ r^α |P(r)|^p dr`.

use super::quadrature::GaussLegendre;
use super::{Exponent, Grid, StepFunction};
use crate::error::{HardyError, Result};

/// Geometric sub-cells used on the first cell when the weight is singular.
const ORIGIN_SUBCELLS: usize = 16;
/// Sub-cells used on each side of an interior zero of the polynomial.
const ROOT_SUBCELLS: usize = 10;
const GRADING_RATIO: f64 = 0.25;

/// `c0 + c1 (r - r_{i-1}) + c2 (r - r_{i-1})^2` on each cell and
/// `t0 + t1 (r - r_n)` beyond the support end.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    grid: Grid,
    cells: Vec<[f64; 3]>,
    tail: [f64; 2],
}

impl PiecewisePoly {
    pub fn new(grid: Grid, cells: Vec<[f64; 3]>, tail: [f64; 2]) -> Result<Self> {
        if cells.len() != grid.cell_count() {
            return Err(HardyError::invalid(format!(
                "{} coefficient triples for {} cells",
                cells.len(),
                grid.cell_count()
            )));
        }
        if cells.iter().flatten().chain(&tail).any(|c| !c.is_finite()) {
            return Err(HardyError::invalid("non-finite polynomial coefficient"));
        }
        Ok(Self { grid, cells, tail })
    }

    /// Degree-0 polynomial carrying the cell values of `f`, zero tail.
    pub fn from_step(f: &StepFunction) -> Self {
        Self {
            grid: f.grid().clone(),
            cells: f.values().iter().map(|&v| [v, 0.0, 0.0]).collect(),
            tail: [0.0, 0.0],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn cells(&self) -> &[[f64; 3]] {
        &self.cells
    }

    pub fn tail(&self) -> [f64; 2] {
        self.tail
    }

    /// Largest polynomial degree over cells and tail.
    pub fn degree(&self) -> usize {
        let cell_deg = self
            .cells
            .iter()
            .map(|c| {
                if c[2] != 0.0 {
                    2
                } else if c[1] != 0.0 {
                    1
                } else {
                    0
                }
            })
            .max()
            .unwrap_or(0);
        cell_deg.max(usize::from(self.tail[1] != 0.0))
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return if r == 0.0 { self.cells[0][0] } else { 0.0 };
        }
        match self.grid.locate(r) {
            Some(i) => {
                let t = r - self.grid.edges()[i];
                let c = &self.cells[i];
                c[0] + t * (c[1] + t * c[2])
            }
            None => self.tail[0] + self.tail[1] * (r - self.grid.support_end()),
        }
    }

    /// Value at the left edge of each cell followed by the value at `r_n`.
    pub fn edge_values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.cells.iter().map(|c| c[0]).collect();
        out.push(self.tail[0]);
        out
    }

    /// `r ↦ ∫₀ʳ P`, exact. Requires every cell to be of degree ≤ 1 and a
    /// constant tail.
    pub fn antiderivative(&self) -> Result<PiecewisePoly> {
        if self.cells.iter().any(|c| c[2] != 0.0) || self.tail[1] != 0.0 {
            return Err(HardyError::invalid(
                "antiderivative needs degree <= 1 cells and a constant tail",
            ));
        }
        let mut acc = 0.0;
        let mut cells = Vec::with_capacity(self.cells.len());
        for (i, c) in self.cells.iter().enumerate() {
            cells.push([acc, c[0], 0.5 * c[1]]);
            let w = self.grid.width(i);
            acc += w * (c[0] + 0.5 * c[1] * w);
        }
        Ok(PiecewisePoly {
            grid: self.grid.clone(),
            cells,
            tail: [acc, self.tail[0]],
        })
    }
}

/// Value of a weighted-power integral together with the difference to the
/// same computation at half the quadrature order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedIntegral {
    pub value: f64,
    pub refinement_estimate: f64,
}

/// Reusable Gauss-Legendre machinery for `∫₀^∞ r^α |P|^p dr`.
#[derive(Debug, Clone)]
pub struct WeightedPowerIntegrator {
    fine: GaussLegendre,
    coarse: GaussLegendre,
}

impl WeightedPowerIntegrator {
    pub fn new(order: usize) -> Result<Self> {
        let fine = GaussLegendre::new(order)?;
        let coarse = GaussLegendre::new((order / 2).max(2))?;
        Ok(Self { fine, coarse })
    }

    pub fn order(&self) -> usize {
        self.fine.order()
    }

    pub fn rule(&self) -> &GaussLegendre {
        &self.fine
    }

    pub fn integrate(&self, poly: &PiecewisePoly, alpha: f64, p: f64) -> Result<f64> {
        integrate_with_rule(&self.fine, poly, alpha, p)
    }

    pub fn integrate_with_estimate(
        &self,
        poly: &PiecewisePoly,
        alpha: f64,
        p: f64,
    ) -> Result<WeightedIntegral> {
        let value = integrate_with_rule(&self.fine, poly, alpha, p)?;
        let coarse = integrate_with_rule(&self.coarse, poly, alpha, p)?;
        Ok(WeightedIntegral {
            value,
            refinement_estimate: (value - coarse).abs() + 64.0 * f64::EPSILON * value.abs(),
        })
    }
}

pub fn integrate_weighted_power(
    poly: &PiecewisePoly,
    alpha: f64,
    p: Exponent,
    quad_order: usize,
) -> Result<f64> {
    let rule = GaussLegendre::new(quad_order)?;
    integrate_with_rule(&rule, poly, alpha, p.value())
}

pub fn integrate_weighted_power_estimate(
    poly: &PiecewisePoly,
    alpha: f64,
    p: Exponent,
    quad_order: usize,
) -> Result<WeightedIntegral> {
    WeightedPowerIntegrator::new(quad_order)?.integrate_with_estimate(poly, alpha, p.value())
}

fn integrate_with_rule(
    rule: &GaussLegendre,
    poly: &PiecewisePoly,
    alpha: f64,
    p: f64,
) -> Result<f64> {
    check_origin(poly, alpha, p)?;
    let edges = poly.grid.edges();
    let mut total = 0.0;
    for (i, c) in poly.cells.iter().enumerate() {
        total += segment_integral(rule, edges[i], edges[i + 1] - edges[i], c, alpha, p);
    }
    total += tail_integral(rule, poly.grid.support_end(), poly.tail, alpha, p)?;
    Ok(total)
}

fn check_origin(poly: &PiecewisePoly, alpha: f64, p: f64) -> Result<()> {
    if alpha >= 0.0 {
        return Ok(());
    }
    let first = &poly.cells[0];
    if let Some(order) = first.iter().position(|&c| c != 0.0) {
        if alpha + order as f64 * p <= -1.0 {
            return Err(HardyError::divergent(format!(
                "r^{alpha} |P|^{p} is not integrable at 0 (P vanishes to order {order})"
            )));
        }
    }
    Ok(())
}

/// Zeros of `c0 + c1 t + c2 t^2` strictly inside `(0, len)`.
fn interior_roots(c: &[f64; 3], len: f64) -> Vec<f64> {
    let [c0, c1, c2] = *c;
    let mut roots = Vec::with_capacity(2);
    if c2 == 0.0 {
        if c1 != 0.0 {
            roots.push(-c0 / c1);
        }
    } else {
        let disc = c1 * c1 - 4.0 * c0 * c2;
        if disc >= 0.0 {
            let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
            if q != 0.0 {
                roots.push(q / c2);
                roots.push(c0 / q);
            } else {
                roots.push(0.0);
            }
        }
    }
    let tol = 1e-12 * len;
    roots.retain(|&t| t > tol && t < len - tol);
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= tol);
    roots
}

/// Geometric points from `from` toward `to` (excluded), closer to `from`
/// at each step: `from + (to - from) * ratio^k`, innermost first.
fn graded_toward(from: f64, to: f64, n: usize) -> Vec<f64> {
    (1..n)
        .rev()
        .map(|k| from + (to - from) * GRADING_RATIO.powi(k as i32))
        .collect()
}

/// `∫ r^α |q(r - left)|^p dr` over `[left, left + len]`.
fn segment_integral(
    rule: &GaussLegendre,
    left: f64,
    len: f64,
    c: &[f64; 3],
    alpha: f64,
    p: f64,
) -> f64 {
    if c.iter().all(|&x| x == 0.0) {
        return 0.0;
    }
    // breakpoints in the local variable t = r - left
    let roots = interior_roots(c, len);
    let mut marks = vec![0.0];
    marks.extend(&roots);
    marks.push(len);

    let mut pieces: Vec<(f64, f64)> = Vec::new();
    for w in marks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let lo_is_root = lo > 0.0;
        let hi_is_root = hi < len;
        let lo_is_origin = lo == 0.0 && left == 0.0 && alpha < 0.0;
        let mut pts = vec![lo];
        match (lo_is_root || lo_is_origin, hi_is_root) {
            (true, true) => {
                let mid = 0.5 * (lo + hi);
                pts.extend(graded_toward(lo, mid, ROOT_SUBCELLS));
                pts.push(mid);
                let mut right = graded_toward(hi, mid, ROOT_SUBCELLS);
                right.reverse();
                pts.extend(right);
            }
            (true, false) => {
                let n = if lo_is_origin {
                    ORIGIN_SUBCELLS
                } else {
                    ROOT_SUBCELLS
                };
                pts.extend(graded_toward(lo, hi, n));
            }
            (false, true) => {
                let mut right = graded_toward(hi, lo, ROOT_SUBCELLS);
                right.reverse();
                pts.extend(right);
            }
            (false, false) => {}
        }
        pts.push(hi);
        for q in pts.windows(2) {
            split_by_ratio(left, q[0], q[1], alpha, &mut pieces);
        }
    }

    let half_exp = alpha / (2.0 * p);
    let integrand = |t: f64| {
        let r = left + t;
        let v = (c[0] + t * (c[1] + t * c[2])).abs();
        if v == 0.0 {
            return 0.0;
        }
        if alpha == 0.0 {
            v.powf(p)
        } else {
            let h = r.powf(half_exp);
            (v * h * h).powf(p)
        }
    };
    pieces
        .into_iter()
        .map(|(lo, hi)| rule.integrate(lo, hi, integrand))
        .sum()
}

/// Splits `[lo, hi]` (local coordinates) so that each piece spans a radius
/// ratio of at most 2 when the weight is non-trivial.
fn split_by_ratio(left: f64, lo: f64, hi: f64, alpha: f64, out: &mut Vec<(f64, f64)>) {
    let (r_lo, r_hi) = (left + lo, left + hi);
    if alpha == 0.0 || r_lo <= 0.0 || r_hi <= 2.0 * r_lo {
        out.push((lo, hi));
        return;
    }
    let n = (r_hi / r_lo).log2().ceil() as usize;
    let ratio = (r_hi / r_lo).powf(1.0 / n as f64);
    let mut prev = lo;
    for k in 1..n {
        let next = r_lo * ratio.powi(k as i32) - left;
        out.push((prev, next));
        prev = next;
    }
    out.push((prev, hi));
}

/// `∫_R^∞ r^α |t0 + t1 (r - R)|^p dr`.
fn tail_integral(
    rule: &GaussLegendre,
    end: f64,
    tail: [f64; 2],
    alpha: f64,
    p: f64,
) -> Result<f64> {
    let [t0, t1] = tail;
    if t0 == 0.0 && t1 == 0.0 {
        return Ok(0.0);
    }
    if t1 == 0.0 {
        if alpha + 1.0 >= 0.0 {
            return Err(HardyError::divergent(format!(
                "constant tail with weight r^{alpha} is not integrable at infinity"
            )));
        }
        let e = alpha + 1.0;
        return Ok((t0.abs() * end.powf(e / p)).powf(p) / -e);
    }
    if alpha + p >= -1.0 {
        return Err(HardyError::divergent(format!(
            "affine tail with weight r^{alpha} and power {p} is not integrable at infinity"
        )));
    }
    // t0 + t1 (r - R) = t1 r + c
    let c = t0 - t1 * end;
    let far = (2.0 * end).max(2.0 * (c / t1).abs());
    let near = segment_integral(rule, end, far - end, &[t0, t1, 0.0], alpha, p);

    // beyond `far`: r^α |t1 r|^p (1 + x)^p with |x| = |c / (t1 r)| <= 1/2
    let x = c / (t1 * far);
    let e = alpha + p + 1.0;
    let base = (t1.abs() * far.powf(e / p)).powf(p);
    let mut binom = 1.0;
    let mut xk = 1.0;
    let mut sum = 0.0;
    for k in 0..400 {
        if k > 0 {
            binom *= (p - (k as f64 - 1.0)) / k as f64;
            xk *= x;
        }
        let term = binom * xk / (k as f64 - e);
        sum += term;
        if k > 2 && term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    Ok(near + base * sum)
}
