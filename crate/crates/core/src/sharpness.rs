//! Minimizing sequences `f_ε(r) = r^{(ε-1)/p} χ(r)`, ε-sweeps with an affine
//! extrapolation of the ratio limit, and a coordinate-ascent ratio maximizer.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::grid::{
    make_graded_grid, Exponent, GaussLegendre, Grading, StepFunction, DEFAULT_QUAD_ORDER,
};
use crate::inequalities::{sharp_constant, Evaluator, Kind, RatioReport};

/// Smallest grid edge used by sweeps unless overridden.
pub const DEFAULT_SWEEP_R_MIN: f64 = 1e-300;
/// Cells per minimizing function in sweeps unless overridden.
pub const DEFAULT_SWEEP_CELLS: usize = 4096;
pub const DEFAULT_EPS_LIST: [f64; 6] = [0.2, 0.1, 0.05, 0.02, 0.01, 0.005];

/// Shape of the cutoff on its transition interval `[1, 2]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffSpec {
    /// `1 - S(r - 1)` with `S(t) = 6t⁵ - 15t⁴ + 10t³`.
    #[default]
    QuinticSmoothstep,
    /// `2 - r`.
    Linear,
}

pub fn cutoff_value(spec: CutoffSpec, r: f64) -> Result<f64> {
    if r.is_nan() || r < 0.0 {
        return Err(HardyError::invalid(format!("cutoff needs r >= 0, got {r}")));
    }
    Ok(cutoff_unchecked(spec, r))
}

fn cutoff_unchecked(spec: CutoffSpec, r: f64) -> f64 {
    if r <= 1.0 {
        return 1.0;
    }
    if r >= 2.0 {
        return 0.0;
    }
    let t = r - 1.0;
    match spec {
        CutoffSpec::QuinticSmoothstep => 1.0 - t * t * t * (t * (6.0 * t - 15.0) + 10.0),
        CutoffSpec::Linear => 1.0 - t,
    }
}

/// Cell averages of `r^{(ε-1)/p} χ(r)` on a geometric grid over `(0, 2]`.
pub fn minimizing_function(
    p: Exponent,
    eps: f64,
    spec: CutoffSpec,
    n_cells: usize,
    r_min: f64,
) -> Result<StepFunction> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(HardyError::invalid(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    if !(r_min > 0.0 && r_min < 1.0) {
        return Err(HardyError::invalid(format!(
            "r_min must lie in (0, 1), got {r_min}"
        )));
    }
    if n_cells < 8 {
        return Err(HardyError::invalid(format!(
            "need at least 8 cells, got {n_cells}"
        )));
    }
    let grid = make_graded_grid(2.0, n_cells, Grading::Geometric { r_min })?;
    let beta = (eps - 1.0) / p.value();
    let rule = GaussLegendre::new(DEFAULT_QUAD_ORDER)?;
    let values = (0..grid.cell_count())
        .map(|i| {
            let (a, b) = grid.cell(i);
            let pure = power_integral(beta, a, b.min(1.0));
            let cut = if b > 1.0 {
                let lo = a.max(1.0);
                rule.integrate(lo, b, |r| r.powf(beta) * cutoff_unchecked(spec, r))
            } else {
                0.0
            };
            (pure + cut) / (b - a)
        })
        .collect();
    StepFunction::new(grid, values)
}

/// `∫_a^b r^β dr` for `β > -1`, zero when `b <= a`.
fn power_integral(beta: f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let e = beta + 1.0;
    if a == 0.0 {
        return b.powf(e) / e;
    }
    // a^e (exp(e ln(b/a)) - 1) / e keeps the digits on narrow cells
    a.powf(e) * (e * (b / a).ln()).exp_m1() / e
}

/// Grid used by [`sharpness_sweep_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub n_cells: usize,
    pub r_min: f64,
    pub quad_order: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_cells: DEFAULT_SWEEP_CELLS,
            r_min: DEFAULT_SWEEP_R_MIN,
            quad_order: DEFAULT_QUAD_ORDER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub eps: f64,
    pub ratio: f64,
    pub numerator: f64,
    pub denominator: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: Kind,
    pub p: f64,
    pub cutoff: CutoffSpec,
    pub n_cells: usize,
    pub r_min: f64,
    pub points: Vec<SweepPoint>,
    /// Intercept of the affine fit, the extrapolated `ε → 0` ratio.
    pub limit: f64,
    pub slope: f64,
    pub sharp: f64,
    /// `|limit - sharp| / sharp`.
    pub relative_gap: f64,
}

impl SweepResult {
    pub fn all_below_sharp(&self) -> bool {
        self.points
            .iter()
            .all(|pt| pt.ratio.is_finite() && pt.ratio < self.sharp)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep result serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["eps", "ratio", "numerator", "denominator"])
            .expect("in-memory write");
        for pt in &self.points {
            w.serialize((pt.eps, pt.ratio, pt.numerator, pt.denominator))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

pub fn sharpness_sweep(
    kind: Kind,
    p: Exponent,
    eps_list: &[f64],
    spec: CutoffSpec,
    resolution: usize,
) -> Result<SweepResult> {
    let config = SweepConfig {
        n_cells: resolution,
        ..SweepConfig::default()
    };
    sharpness_sweep_with(kind, p, eps_list, spec, &config)
}

/// Ratios are invariant under `f ↦ λ^{1/p} f(λ·)`, so each `f_ε` is
/// evaluated on a dilated copy whose edges are centred around 1 in log
/// scale; this keeps the double integrals inside the `f64` range.
pub fn sharpness_sweep_with(
    kind: Kind,
    p: Exponent,
    eps_list: &[f64],
    spec: CutoffSpec,
    config: &SweepConfig,
) -> Result<SweepResult> {
    let sharp = sharp_constant(kind, p)?;
    if eps_list.len() < 2 {
        return Err(HardyError::FitDegenerate(format!(
            "need at least 2 eps values, got {}",
            eps_list.len()
        )));
    }
    if eps_list
        .windows(2)
        .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Less))
    {
        return Err(HardyError::invalid("eps list must be strictly decreasing"));
    }
    let evaluator = Evaluator::new(config.quad_order)?;
    let lambda = (2.0 * config.r_min).sqrt();
    let points = eps_list
        .par_iter()
        .map(|&eps| {
            let f = minimizing_function(p, eps, spec, config.n_cells, config.r_min)?;
            let f = f.dilated(lambda, p)?;
            let rep = evaluator.ratio(kind, &f, p)?;
            Ok(SweepPoint {
                eps,
                ratio: rep.ratio,
                numerator: rep.numerator,
                denominator: rep.denominator,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    // smallest half of the ε list, never fewer than two points
    let tail = &points[(points.len() / 2).min(points.len() - 2)..];
    let (limit, slope) = affine_fit(tail)?;
    Ok(SweepResult {
        kind,
        p: p.value(),
        cutoff: spec,
        n_cells: config.n_cells,
        r_min: config.r_min,
        points,
        limit,
        slope,
        sharp,
        relative_gap: (limit - sharp).abs() / sharp,
    })
}

/// Least-squares `ratio ≈ c0 + c1 ε`.
fn affine_fit(points: &[SweepPoint]) -> Result<(f64, f64)> {
    let n = points.len() as f64;
    let mx = points.iter().map(|pt| pt.eps).sum::<f64>() / n;
    let my = points.iter().map(|pt| pt.ratio).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|pt| (pt.eps - mx).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|pt| (pt.eps - mx) * (pt.ratio - my))
        .sum();
    if points.len() < 2 || sxx == 0.0 {
        return Err(HardyError::FitDegenerate(
            "eps values do not span a line".into(),
        ));
    }
    let slope = sxy / sxx;
    Ok((my - slope * mx, slope))
}

/// Grid used by [`ratio_maximize`]: geometric on `(0, 1]` down to `1e-4`.
pub const MAXIMIZE_R_MIN: f64 = 1e-4;

/// Coordinate ascent over cell values, starting from the indicator of
/// `(0, 1]`. Each pass visits the cells in a seeded random order and tries
/// `v·(1+δ)` and `v·(1-δ)`; the cell's `δ` halves when neither improves.
/// The objective is the largest quantity the sharp bound controls (the
/// middle term for chains).
pub fn ratio_maximize(
    kind: Kind,
    p: Exponent,
    n_cells: usize,
    seed: u64,
    iters: usize,
) -> Result<(StepFunction, RatioReport)> {
    if n_cells < 4 {
        return Err(HardyError::invalid(format!(
            "need at least 4 cells, got {n_cells}"
        )));
    }
    if iters < 1 {
        return Err(HardyError::invalid("iters must be at least 1"));
    }
    sharp_constant(kind, p)?;
    let grid = make_graded_grid(
        1.0,
        n_cells,
        Grading::Geometric {
            r_min: MAXIMIZE_R_MIN,
        },
    )?;
    let fast = Evaluator::default().without_estimates();
    let objective = |f: &StepFunction| -> Result<f64> { Ok(fast.ratio(kind, f, p)?.bound_ratio()) };

    let mut best = StepFunction::new(grid, vec![1.0; n_cells])?;
    let mut best_val = objective(&best)?;
    let mut delta = vec![0.5f64; n_cells];
    let mut order: Vec<usize> = (0..n_cells).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = best.values().to_vec();
    for _ in 0..iters {
        order.shuffle(&mut rng);
        for &i in &order {
            let old = values[i];
            let mut improved = false;
            for factor in [1.0 + delta[i], 1.0 - delta[i]] {
                values[i] = old * factor;
                let trial = best.with_values(values.clone())?;
                let val = objective(&trial)?;
                if val > best_val {
                    best_val = val;
                    best = trial;
                    improved = true;
                    break;
                }
            }
            if !improved {
                values[i] = old;
                delta[i] *= 0.5;
            }
        }
    }
    let report = Evaluator::default().ratio(kind, &best, p)?;
    Ok((best, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    #[test]
    fn cutoff_examples() {
        for spec in [CutoffSpec::QuinticSmoothstep, CutoffSpec::Linear] {
            assert_eq!(cutoff_value(spec, 0.5).unwrap(), 1.0);
            assert_eq!(cutoff_value(spec, 1.0).unwrap(), 1.0);
            assert_eq!(cutoff_value(spec, 2.0).unwrap(), 0.0);
            assert_eq!(cutoff_value(spec, 3.0).unwrap(), 0.0);
            assert_eq!(cutoff_value(spec, 1.5).unwrap(), 0.5);
            assert!(cutoff_value(spec, -0.1).is_err());
        }
    }

    #[test]
    fn cutoff_is_monotone() {
        let mut prev = 1.0;
        for k in 0..=400 {
            let c = cutoff_value(CutoffSpec::QuinticSmoothstep, k as f64 * 0.01).unwrap();
            assert!((0.0..=1.0).contains(&c));
            assert!(c <= prev);
            prev = c;
        }
    }

    #[test]
    fn first_cell_average_closed_form() {
        let f = minimizing_function(ex(2.0), 0.5, CutoffSpec::default(), 16, 1e-3).unwrap();
        let r1 = f.edges()[1];
        let want = (2.0 / 1.5) * r1.powf(0.75) / r1;
        assert!((f.values()[0] - want).abs() <= 1e-13 * want);
        assert_eq!(f.support_end(), 2.0);
        assert!(f.values().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn minimizing_function_rejects_bad_parameters() {
        let s = CutoffSpec::default();
        assert!(minimizing_function(ex(2.0), 0.0, s, 16, 1e-3).is_err());
        assert!(minimizing_function(ex(2.0), 1.0, s, 16, 1e-3).is_err());
        assert!(minimizing_function(ex(2.0), 0.5, s, 7, 1e-3).is_err());
        assert!(minimizing_function(ex(2.0), 0.5, s, 16, 1.0).is_err());
        assert!(minimizing_function(ex(2.0), 0.5, s, 16, 0.0).is_err());
    }

    #[test]
    fn power_integral_matches_plain_formula() {
        let (b, a, e) = (0.9f64, 0.3f64, 0.4f64);
        let plain = (b.powf(e + 1.0) - a.powf(e + 1.0)) / (e + 1.0);
        assert!((power_integral(e, a, b) - plain).abs() < 1e-15);
        assert_eq!(power_integral(e, 0.0, b), b.powf(1.4) / 1.4);
    }

    #[test]
    fn fit_recovers_a_line() {
        let pts: Vec<SweepPoint> = [0.3, 0.2, 0.1]
            .iter()
            .map(|&e| SweepPoint {
                eps: e,
                ratio: 4.0 - 2.0 * e,
                numerator: 0.0,
                denominator: 1.0,
            })
            .collect();
        let (c0, c1) = affine_fit(&pts).unwrap();
        assert!((c0 - 4.0).abs() < 1e-14 && (c1 + 2.0).abs() < 1e-14);
    }

    #[test]
    fn sweep_needs_two_points() {
        let r = sharpness_sweep(Kind::Hardy, ex(2.0), &[0.1], CutoffSpec::default(), 64);
        assert!(matches!(r, Err(HardyError::FitDegenerate(_))));
        let r = sharpness_sweep(Kind::Hardy, ex(2.0), &[0.1, 0.2], CutoffSpec::default(), 64);
        assert!(r.is_err());
        let r = sharpness_sweep(
            Kind::HardyRellichInt,
            ex(3.0),
            &[0.2, 0.1],
            CutoffSpec::default(),
            64,
        );
        assert!(matches!(r, Err(HardyError::InvalidParameter(_))));
    }

    #[test]
    fn sweep_csv_layout() {
        let r =
            sharpness_sweep(Kind::Hardy, ex(2.0), &[0.2, 0.1], CutoffSpec::default(), 64).unwrap();
        let csv = r.to_csv();
        assert!(csv.starts_with("eps,ratio,numerator,denominator\n"));
        assert_eq!(csv.lines().count(), 3);
        assert!(r.all_below_sharp());
    }

    #[test]
    fn one_pass_never_loses_ground() {
        let (best, rep) = ratio_maximize(Kind::Hardy, ex(2.0), 8, 3, 1).unwrap();
        assert!(rep.ratio >= 2.0 - 1e-12);
        assert_eq!(best.cell_count(), 8);
        assert!(ratio_maximize(Kind::Hardy, ex(2.0), 3, 3, 1).is_err());
        assert!(ratio_maximize(Kind::Hardy, ex(2.0), 8, 3, 0).is_err());
    }
}
