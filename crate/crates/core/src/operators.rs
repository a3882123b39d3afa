//! Integral transforms built on step functions: running integrals, the
//! sup-min transform `M f(r) = sup_s |min{1/r, 1/s} ∫₀ˢ f|`, the Rellich
//! inner transform and the max-form of the sup-min integrand.
//!
//! `F = ∫₀ f` is affine on every cell, so `s ↦ min{1/r, 1/s} |F(s)|` is
//! monotone between consecutive cell edges (and between an edge and `r`).
//! The supremum is therefore a maximum over a finite candidate set: the
//! grid edges, `s = r`, and the support end for the constant tail. No
//! sampling in `s` is ever performed.

use crate::error::{HardyError, Result};
use crate::grid::{Exponent, Grid, PiecewisePoly, StepFunction};

/// `r ↦ ∫₀ʳ f`: degree ≤ 1 on every cell, constant tail `F(r_n)`.
pub fn cumulative(f: &StepFunction) -> PiecewisePoly {
    let mut acc = 0.0;
    let mut cells = Vec::with_capacity(f.cell_count());
    for (i, &v) in f.values().iter().enumerate() {
        cells.push([acc, v, 0.0]);
        acc += v * f.grid().width(i);
    }
    PiecewisePoly::new(f.grid().clone(), cells, [acc, 0.0]).expect("finite coefficients")
}

/// `r ↦ ∫₀ʳ ∫₀^τ f`: degree ≤ 2 on every cell, affine tail
/// `D(r_n) + F(r_n)(r - r_n)`.
pub fn double_cumulative(f: &StepFunction) -> PiecewisePoly {
    let mut single = 0.0;
    let mut double = 0.0;
    let mut cells = Vec::with_capacity(f.cell_count());
    for (i, &v) in f.values().iter().enumerate() {
        let w = f.grid().width(i);
        cells.push([double, single, 0.5 * v]);
        double += w * (single + 0.5 * v * w);
        single += v * w;
    }
    PiecewisePoly::new(f.grid().clone(), cells, [double, single]).expect("finite coefficients")
}

/// One entry of the finite candidate set for the supremum in `M f(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub s: f64,
    pub value: f64,
}

/// Precomputed sup-min data of one step function.
///
/// `prefix[k] = max_{j ≤ k} |F(r_j)|`, `suffix[k] = max_{j ≥ k} |F(r_j)| / r_j`
/// (for `k ≥ 1`, with `suffix[n + 1] = 0`).
#[derive(Debug, Clone)]
pub struct SupMinProfile {
    cumulative: PiecewisePoly,
    prefix: Vec<f64>,
    suffix: Vec<f64>,
}

impl SupMinProfile {
    pub fn new(f: &StepFunction) -> Self {
        let cumulative = cumulative(f);
        let at_edges = cumulative.edge_values();
        let edges = f.edges();
        let n = f.cell_count();
        let mut prefix = Vec::with_capacity(n + 1);
        let mut running = 0.0f64;
        for v in &at_edges {
            running = running.max(v.abs());
            prefix.push(running);
        }
        let mut suffix = vec![0.0f64; n + 2];
        for k in (1..=n).rev() {
            suffix[k] = suffix[k + 1].max(at_edges[k].abs() / edges[k]);
        }
        Self {
            cumulative,
            prefix,
            suffix,
        }
    }

    pub fn cumulative(&self) -> &PiecewisePoly {
        &self.cumulative
    }

    fn grid(&self) -> &Grid {
        self.cumulative.grid()
    }

    /// `r · M f(r) = max{ sup_{s ≤ r} |F(s)|, r · sup_{s ≥ r} |F(s)|/s }`.
    pub fn scaled_value(&self, r: f64) -> f64 {
        match self.grid().locate(r) {
            Some(i) => {
                let f_r = self.cumulative.eval(r).abs();
                self.prefix[i].max(f_r).max(r * self.suffix[i + 1])
            }
            None => *self.prefix.last().unwrap(),
        }
    }

    /// `M f(r)` for `r > 0`.
    pub fn value(&self, r: f64) -> f64 {
        match self.grid().locate(r) {
            Some(i) => {
                let f_r = self.cumulative.eval(r).abs();
                (self.prefix[i].max(f_r) / r).max(self.suffix[i + 1])
            }
            None => *self.prefix.last().unwrap() / r,
        }
    }

    /// Every candidate `s` with its value `min{1/r, 1/s} |F(s)|`, by direct
    /// enumeration (O(n), independent of the prefix/suffix tables). The
    /// entry for `s = r` comes first.
    pub fn candidate_trace(&self, r: f64) -> Vec<Candidate> {
        let weight = |s: f64| if s <= r { 1.0 / r } else { 1.0 / s };
        let mut out = vec![Candidate {
            s: r,
            value: self.cumulative.eval(r).abs() / r,
        }];
        for &e in &self.grid().edges()[1..] {
            out.push(Candidate {
                s: e,
                value: weight(e) * self.cumulative.eval(e).abs(),
            });
        }
        let end = self.grid().support_end();
        if r > end {
            // constant tail: best tail point is s = r (already listed)
        } else {
            out.push(Candidate {
                s: end,
                value: self.cumulative.tail()[0].abs() / end,
            });
        }
        out
    }

    /// `r ↦ r · M f(r)` as an exact piecewise-linear function on a refined
    /// grid (cell edges plus crossing points of the competing branches),
    /// constant tail `max_j |F(r_j)|`.
    pub fn envelope(&self) -> PiecewisePoly {
        let edges = self.grid().edges();
        let n = self.grid().cell_count();
        let mut new_edges = vec![0.0];
        let mut cells: Vec<[f64; 3]> = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (edges[i], edges[i + 1]);
            let c = self.cumulative.cells()[i];
            let s = self.suffix[i + 1];
            let lines = [
                Line::new(self.prefix[i], 0.0),
                Line::new(c[0], c[1]),
                Line::new(-c[0], -c[1]),
                Line::new(s * a, s),
            ];
            for piece in upper_envelope(&lines, b - a) {
                let right = if piece.hi >= b - a { b } else { a + piece.hi };
                let last = *new_edges.last().unwrap();
                if right <= last {
                    continue;
                }
                let left_t = last - a;
                let line = lines[piece.line];
                cells.push([line.at(left_t.max(0.0)), line.slope, 0.0]);
                new_edges.push(right);
            }
        }
        let grid = Grid::new(new_edges).expect("refined edges are increasing");
        PiecewisePoly::new(grid, cells, [*self.prefix.last().unwrap(), 0.0]).expect("finite")
    }
}

#[derive(Debug, Clone, Copy)]
struct Line {
    start: f64,
    slope: f64,
}

impl Line {
    fn new(start: f64, slope: f64) -> Self {
        Self { start, slope }
    }

    fn at(&self, t: f64) -> f64 {
        self.start + self.slope * t
    }
}

struct EnvelopePiece {
    hi: f64,
    line: usize,
}

/// Upper envelope of a few lines over `[0, len]`, as consecutive pieces.
fn upper_envelope(lines: &[Line], len: f64) -> Vec<EnvelopePiece> {
    let scale = lines
        .iter()
        .map(|l| l.at(0.0).abs().max(l.at(len).abs()))
        .fold(0.0, f64::max);
    let tol = 1e-13 * scale;
    let mut cuts = vec![0.0, len];
    for (j, lj) in lines.iter().enumerate() {
        for lk in &lines[j + 1..] {
            let d0 = lj.at(0.0) - lk.at(0.0);
            let d1 = lj.at(len) - lk.at(len);
            if d0.abs() > tol && d1.abs() > tol && (d0 > 0.0) != (d1 > 0.0) {
                let t = d0 / (lk.slope - lj.slope);
                if t > 0.0 && t < len {
                    cuts.push(t);
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * len);
    if *cuts.last().unwrap() != len {
        *cuts.last_mut().unwrap() = len;
    }

    let mut pieces: Vec<EnvelopePiece> = Vec::new();
    for w in cuts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let best = (0..lines.len())
            .max_by(|&x, &y| lines[x].at(mid).total_cmp(&lines[y].at(mid)))
            .unwrap();
        match pieces.last_mut() {
            Some(last) if last.line == best => last.hi = w[1],
            _ => pieces.push(EnvelopePiece {
                hi: w[1],
                line: best,
            }),
        }
    }
    pieces
}

/// `M f(r) = sup_{0<s<∞} |min{1/r, 1/s} ∫₀ˢ f|`.
pub fn supmin_transform(f: &StepFunction, r: f64) -> Result<f64> {
    if r.is_nan() || r <= 0.0 {
        return Err(HardyError::invalid(format!("r must be positive, got {r}")));
    }
    Ok(SupMinProfile::new(f).value(r))
}

/// `sup_s min{1, τ/s} ∫₀ˢ |f| = τ · M|f|(τ)`.
pub fn rellich_inner(f: &StepFunction, tau: f64) -> Result<f64> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(HardyError::invalid(format!(
            "tau must be positive, got {tau}"
        )));
    }
    Ok(SupMinProfile::new(&f.abs()).scaled_value(tau))
}

/// `r ↦ ∫₀ʳ rellich_inner(f, τ) dτ`, exact: the inner transform is the
/// piecewise-linear envelope of `|f|`, so its running integral is
/// piecewise quadratic with an affine tail.
pub fn rellich_middle_profile(f: &StepFunction) -> PiecewisePoly {
    SupMinProfile::new(&f.abs())
        .envelope()
        .antiderivative()
        .expect("envelope is piecewise linear with a constant tail")
}

/// `max{ sup_{0<s≤r} |g(s)|^p / r^p, sup_{r≤s<∞} |g(s)|^p / s^p }` for a
/// step function `g`, using the closure of each cell.
pub fn maxform_value(g: &StepFunction, r: f64, p: Exponent) -> Result<f64> {
    if r.is_nan() || r <= 0.0 {
        return Err(HardyError::invalid(format!("r must be positive, got {r}")));
    }
    let edges = g.edges();
    let mut below = 0.0f64;
    let mut above = 0.0f64;
    for (i, v) in g.values().iter().enumerate() {
        let (a, b) = (edges[i], edges[i + 1]);
        if a <= r {
            below = below.max(v.abs());
        }
        if b >= r {
            above = above.max(v.abs() / a.max(r));
        }
    }
    let p = p.value();
    Ok((below / r).powf(p).max(above.powf(p)))
}

/// `sup_s |min{1/r, 1/s} g(s)|^p` next to [`maxform_value`]; the two agree.
pub fn supmin_pointwise_identity_check(
    g: &StepFunction,
    r: f64,
    p: Exponent,
) -> Result<(f64, f64)> {
    let rhs = maxform_value(g, r, p)?;
    let edges = g.edges();
    let best = g
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            // over the closed cell, min{1/r, 1/s} is largest at the point
            // nearest to (0, r]
            let s = edges[i].max(r.min(edges[i + 1]));
            v.abs() * (1.0 / r).min(1.0 / s)
        })
        .fold(0.0, f64::max);
    Ok((best.powf(p.value()), rhs))
}

/// Max-form integrand for the running integral `F` (degree ≤ 1 cells,
/// constant tail): `max{ sup_{s≤r} |F(s)|^p / r^p, sup_{s≥r} |F(s)|^p / s^p }`.
/// Evaluated by scanning every cell.
pub fn maxform_of_cumulative(big_f: &PiecewisePoly, r: f64, p: f64) -> f64 {
    let grid = big_f.grid();
    let edges = grid.edges();
    let f_r = big_f.eval(r).abs();
    let mut below = f_r;
    let mut above = f_r / r;
    for i in 0..grid.cell_count() {
        let (a, b) = (edges[i], edges[i + 1]);
        if a < r {
            below = below.max(big_f.eval(a).abs());
        }
        if b >= r {
            let lo = a.max(r);
            above = above
                .max(big_f.eval(lo).abs() / lo)
                .max(big_f.eval(b).abs() / b);
        }
    }
    let end = grid.support_end();
    let tail = big_f.tail()[0].abs();
    if r > end {
        below = below.max(tail);
    }
    above = above.max(tail / r.max(end));
    (below / r).powf(p).max(above.powf(p))
}
