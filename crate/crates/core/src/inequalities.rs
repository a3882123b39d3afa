//! Ratio evaluators for the Hardy, sup-min Hardy, Hardy–Rellich and Rellich
//! inequalities in integral form, their sharp constants, and the
//! rearrangement-based comparison and corollary checks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::grid::{
    p_norm, Exponent, GaussLegendre, PiecewisePoly, StepFunction, WeightedPowerIntegrator,
    DEFAULT_QUAD_ORDER,
};
use crate::operators::{
    cumulative, double_cumulative, maxform_of_cumulative, rellich_middle_profile, SupMinProfile,
};
use crate::rearrange::decreasing_rearrangement;

/// Which inequality a ratio belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// `∫ |F(r)/r|^p ≤ (p/(p-1))^p ∫ |f|^p`.
    Hardy,
    /// Sup-min improvement of [`Kind::Hardy`], same constant.
    NewHardy,
    /// Integral-form Hardy–Rellich, `p = 2`, constant 4.
    HardyRellichInt,
    /// Sup-min improvement of [`Kind::HardyRellichInt`], constant 4.
    ImprovedHardyRellich,
    /// Lᵖ Rellich in integral form on the signed double integral.
    RellichP,
    /// Rellich chain: double integral of `|f|` ≤ sup-min middle term ≤ bound.
    RellichChain,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::Hardy,
        Kind::NewHardy,
        Kind::HardyRellichInt,
        Kind::ImprovedHardyRellich,
        Kind::RellichP,
        Kind::RellichChain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Hardy => "hardy",
            Kind::NewHardy => "new_hardy",
            Kind::HardyRellichInt => "hardy_rellich_int",
            Kind::ImprovedHardyRellich => "improved_hardy_rellich",
            Kind::RellichP => "rellich_p",
            Kind::RellichChain => "rellich_chain",
        }
    }

    /// Kinds that are only stated for `p = 2`.
    pub fn requires_p2(self) -> bool {
        matches!(self, Kind::HardyRellichInt | Kind::ImprovedHardyRellich)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = HardyError;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| HardyError::invalid(format!("unknown inequality kind `{s}`")))
    }
}

pub fn sharp_constant(kind: Kind, p: Exponent) -> Result<f64> {
    let p = p.value();
    if kind.requires_p2() && p != 2.0 {
        return Err(HardyError::invalid(format!(
            "{kind} is only defined for p = 2, got p = {p}"
        )));
    }
    Ok(match kind {
        Kind::Hardy | Kind::NewHardy => (p / (p - 1.0)).powf(p),
        Kind::HardyRellichInt | Kind::ImprovedHardyRellich => 4.0,
        Kind::RellichP | Kind::RellichChain => {
            p.powf(2.0 * p) / ((p - 1.0).powf(p) * (2.0 * p - 1.0).powf(p))
        }
    })
}

/// Observed quotient of one inequality next to its sharp constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub kind: Kind,
    pub p: f64,
    pub numerator: f64,
    pub middle: Option<f64>,
    pub denominator: f64,
    pub sharp: f64,
    pub ratio: f64,
    pub slack: f64,
    pub quad_order: usize,
    /// Largest relative change of any quadrature-evaluated integral when
    /// the order is halved.
    pub refinement_estimate: f64,
    /// The classical (non sup-min) numerator, for the improved kinds.
    #[serde(skip)]
    pub classical_numerator: Option<f64>,
}

impl RatioReport {
    /// The largest quantity the sharp bound controls, divided by the
    /// denominator (the middle term for chains, the ratio otherwise).
    pub fn bound_ratio(&self) -> f64 {
        self.middle
            .map_or(self.ratio, |m| m.max(self.numerator) / self.denominator)
    }

    /// Checks the inequality and the orderings carried by the report at
    /// relative tolerance `tol`.
    pub fn violations(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.ratio.is_finite() && self.denominator > 0.0) {
            out.push(format!("non-finite ratio {}", self.ratio));
            return out;
        }
        if self.ratio > self.sharp * (1.0 + tol) {
            out.push(format!(
                "ratio {} exceeds sharp constant {}",
                self.ratio, self.sharp
            ));
        }
        if let Some(m) = self.middle {
            if self.numerator > m * (1.0 + tol) {
                out.push(format!(
                    "numerator {} exceeds middle term {}",
                    self.numerator, m
                ));
            }
            if m > self.sharp * self.denominator * (1.0 + tol) {
                out.push(format!(
                    "middle term {} exceeds sharp bound {}",
                    m,
                    self.sharp * self.denominator
                ));
            }
        }
        if let Some(c) = self.classical_numerator {
            if c > self.numerator * (1.0 + tol) {
                out.push(format!(
                    "classical numerator {} exceeds improved numerator {}",
                    c, self.numerator
                ));
            }
        }
        out
    }

    pub fn satisfies(&self, tol: f64) -> bool {
        self.violations(tol).is_empty()
    }
}

/// Evaluates ratios with a fixed quadrature order.
#[derive(Debug, Clone)]
pub struct Evaluator {
    integrator: WeightedPowerIntegrator,
    estimates: bool,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new(DEFAULT_QUAD_ORDER).expect("default order is valid")
    }
}

struct Tracker {
    worst: f64,
}

impl Evaluator {
    pub fn new(quad_order: usize) -> Result<Self> {
        Ok(Self {
            integrator: WeightedPowerIntegrator::new(quad_order)?,
            estimates: true,
        })
    }

    /// Skip the half-order recomputation; reports carry a zero estimate.
    pub fn without_estimates(mut self) -> Self {
        self.estimates = false;
        self
    }

    pub fn quad_order(&self) -> usize {
        self.integrator.order()
    }

    fn integral(&self, poly: &PiecewisePoly, alpha: f64, p: f64, tr: &mut Tracker) -> Result<f64> {
        if !self.estimates {
            return self.integrator.integrate(poly, alpha, p);
        }
        let r = self.integrator.integrate_with_estimate(poly, alpha, p)?;
        if r.value != 0.0 {
            tr.worst = tr.worst.max(r.refinement_estimate / r.value.abs());
        }
        Ok(r.value)
    }

    fn report(
        &self,
        kind: Kind,
        p: Exponent,
        numerator: f64,
        middle: Option<f64>,
        denominator: f64,
        tr: Tracker,
    ) -> Result<RatioReport> {
        let sharp = sharp_constant(kind, p)?;
        let ratio = numerator / denominator;
        Ok(RatioReport {
            kind,
            p: p.value(),
            numerator,
            middle,
            denominator,
            sharp,
            ratio,
            slack: sharp - ratio,
            quad_order: self.quad_order(),
            refinement_estimate: tr.worst,
            classical_numerator: None,
        })
    }

    fn denominator(f: &StepFunction, p: Exponent) -> Result<f64> {
        let d = p_norm(f, p);
        if d > 0.0 {
            Ok(d)
        } else {
            Err(HardyError::ZeroDenominator)
        }
    }

    fn hardy_numerator(&self, f: &StepFunction, p: f64, tr: &mut Tracker) -> Result<f64> {
        self.integral(&cumulative(f), -p, p, tr)
    }

    fn supmin_numerator(&self, f: &StepFunction, p: f64, tr: &mut Tracker) -> Result<f64> {
        self.integral(&SupMinProfile::new(f).envelope(), -p, p, tr)
    }

    pub fn hardy_ratio(&self, f: &StepFunction, p: Exponent) -> Result<RatioReport> {
        let den = Self::denominator(f, p)?;
        let mut tr = Tracker { worst: 0.0 };
        let num = self.hardy_numerator(f, p.value(), &mut tr)?;
        self.report(Kind::Hardy, p, num, None, den, tr)
    }

    pub fn new_hardy_ratio(&self, f: &StepFunction, p: Exponent) -> Result<RatioReport> {
        self.supmin_ratio(Kind::NewHardy, f, p)
    }

    fn supmin_ratio(&self, kind: Kind, f: &StepFunction, p: Exponent) -> Result<RatioReport> {
        sharp_constant(kind, p)?;
        let den = Self::denominator(f, p)?;
        let mut tr = Tracker { worst: 0.0 };
        let num = self.supmin_numerator(f, p.value(), &mut tr)?;
        let classical = self.hardy_numerator(f, p.value(), &mut tr)?;
        let mut rep = self.report(kind, p, num, None, den, tr)?;
        rep.classical_numerator = Some(classical);
        Ok(rep)
    }

    pub fn hardy_rellich_int_ratio(&self, gprime: &StepFunction) -> Result<RatioReport> {
        let p = Exponent::new(2.0)?;
        let mut rep = self.hardy_ratio(gprime, p)?;
        rep.kind = Kind::HardyRellichInt;
        rep.sharp = 4.0;
        rep.slack = rep.sharp - rep.ratio;
        Ok(rep)
    }

    pub fn improved_hardy_rellich_ratio(&self, gprime: &StepFunction) -> Result<RatioReport> {
        self.supmin_ratio(Kind::ImprovedHardyRellich, gprime, Exponent::new(2.0)?)
    }

    /// `∫ r^{-2p} |∫₀ʳ∫₀^τ f|^p / ∫ |f|^p` on the signed double integral.
    pub fn rellich_ratio(&self, f: &StepFunction, p: Exponent) -> Result<RatioReport> {
        let den = Self::denominator(f, p)?;
        let mut tr = Tracker { worst: 0.0 };
        let pv = p.value();
        let num = self.integral(&double_cumulative(f), -2.0 * pv, pv, &mut tr)?;
        self.report(Kind::RellichP, p, num, None, den, tr)
    }

    /// Numerator with `D = ∫∫|f|`, middle term with the sup-min inner
    /// transform, both against `∫|f|^p`.
    pub fn rellich_chain(&self, f: &StepFunction, p: Exponent) -> Result<RatioReport> {
        let den = Self::denominator(f, p)?;
        let mut tr = Tracker { worst: 0.0 };
        let pv = p.value();
        let num = self.integral(&double_cumulative(&f.abs()), -2.0 * pv, pv, &mut tr)?;
        let middle = self.integral(&rellich_middle_profile(f), -2.0 * pv, pv, &mut tr)?;
        self.report(Kind::RellichChain, p, num, Some(middle), den, tr)
    }

    pub fn ratio(&self, kind: Kind, f: &StepFunction, p: Exponent) -> Result<RatioReport> {
        match kind {
            Kind::Hardy => self.hardy_ratio(f, p),
            Kind::NewHardy => self.new_hardy_ratio(f, p),
            Kind::HardyRellichInt => {
                sharp_constant(kind, p)?;
                self.hardy_rellich_int_ratio(f)
            }
            Kind::ImprovedHardyRellich => {
                sharp_constant(kind, p)?;
                self.improved_hardy_rellich_ratio(f)
            }
            Kind::RellichP => self.rellich_ratio(f, p),
            Kind::RellichChain => self.rellich_chain(f, p),
        }
    }

    /// `(∫ (M f)^p, ∫ |F*(r)/r|^p)`: the sup-min integral of `f` against the
    /// classical Hardy integral of its decreasing rearrangement.
    pub fn weighted_supmin_check(&self, f: &StepFunction, p: Exponent) -> Result<(f64, f64)> {
        let mut tr = Tracker { worst: 0.0 };
        let lhs = self.supmin_numerator(f, p.value(), &mut tr)?;
        let star = decreasing_rearrangement(f);
        let rhs = self.hardy_numerator(star.function(), p.value(), &mut tr)?;
        Ok((lhs, rhs))
    }

    /// Max-form of the running integral against `(p/(p-1))^p ∫|f|^p`. The
    /// left side is integrated from pointwise evaluations of the max-form.
    pub fn corollary_int_check(&self, f: &StepFunction, p: Exponent) -> Result<(f64, f64)> {
        let den = Self::denominator(f, p)?;
        let pv = p.value();
        let big_f = cumulative(f);
        // breakpoints of the integrand: cell edges and branch crossings
        let breaks = SupMinProfile::new(f).envelope();
        let rule = self.integrator.rule();
        let body = integrate_pointwise(rule, breaks.grid().edges(), 1, |r| {
            maxform_of_cumulative(&big_f, r, pv)
        });
        let max_f = big_f
            .edge_values()
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let end = f.support_end();
        let tail = (max_f * end.powf((1.0 - pv) / pv)).powf(pv) / (pv - 1.0);
        Ok((body + tail, sharp_constant(Kind::Hardy, p)? * den))
    }

    /// Max-form of the running average `F(s)/s` against
    /// `(p/(p-1))^p 2^{p-1} (∫ r^{-p}|f|^p + ∫ r^{-2p} ∫₀ʳ|f|^p)`.
    /// Both right-hand terms diverge unless `f` vanishes on the first cell.
    pub fn corollary_avg_check(&self, f: &StepFunction, p: Exponent) -> Result<(f64, f64)> {
        Self::denominator(f, p)?;
        let pv = p.value();
        let edges = f.edges();
        let n = f.cell_count();
        if f.values()[0] != 0.0 {
            return Err(HardyError::divergent(
                "∫ r^{-2p} ∫₀ʳ|f|^p dr diverges at 0 unless f vanishes near the origin",
            ));
        }

        // right-hand side, closed form
        let pow_int = |a: f64, b: f64, e: f64| (b.powf(e + 1.0) - a.powf(e + 1.0)) / (e + 1.0);
        let mut term1 = 0.0;
        let mut term2 = 0.0;
        let mut g_acc = 0.0;
        for i in 1..n {
            let (a, b) = (edges[i], edges[i + 1]);
            let w = f.values()[i].abs().powf(pv);
            term1 += w * pow_int(a, b, -pv);
            // G(r) = g_acc + w (r - a)
            term2 += (g_acc - w * a) * pow_int(a, b, -2.0 * pv) + w * pow_int(a, b, 1.0 - 2.0 * pv);
            g_acc += w * (b - a);
        }
        let end = f.support_end();
        term2 += g_acc * end.powf(1.0 - 2.0 * pv) / (2.0 * pv - 1.0);
        let rhs = sharp_constant(Kind::Hardy, p)? * 2f64.powf(pv - 1.0) * (term1 + term2);

        // left-hand side
        let big_f = cumulative(f);
        let at = big_f.edge_values();
        // A(s) = v + c / s on each cell
        let coef: Vec<(f64, f64)> = (0..n)
            .map(|i| (f.values()[i], at[i] - f.values()[i] * edges[i]))
            .collect();
        let a_over_s_max = |i: usize, lo: f64, hi: f64| {
            let (v, c) = coef[i];
            let g = |s: f64| (v * s + c).abs() / (s * s);
            let mut m = g(lo).max(g(hi));
            if v != 0.0 {
                let crit = -2.0 * c / v;
                if crit > lo && crit < hi {
                    m = m.max(g(crit));
                }
            }
            m
        };
        let mut prefix = vec![0.0f64; n + 1];
        prefix[0] = f.values()[0].abs();
        for k in 1..=n {
            prefix[k] = prefix[k - 1].max((at[k] / edges[k]).abs());
        }
        let mut suffix = vec![0.0f64; n + 1];
        for i in (1..n).rev() {
            suffix[i] = suffix[i + 1].max(a_over_s_max(i, edges[i], edges[i + 1]));
        }
        let integrand = |r: f64| {
            let i = f.grid().locate(r).expect("r inside the support");
            let (v, c) = coef[i];
            let a_r = (v + c / r).abs();
            let below = prefix[i].max(a_r);
            let above = if i == 0 {
                // A vanishes on the first cell
                suffix[1]
            } else {
                a_over_s_max(i, r, edges[i + 1]).max(suffix[i + 1])
            };
            (below / r).powf(pv).max(above.powf(pv))
        };
        let rule = self.integrator.rule();
        let body = integrate_pointwise(rule, edges, 4, integrand);
        let tail = (prefix[n] * end.powf((1.0 - pv) / pv)).powf(pv) / (pv - 1.0);
        Ok((body + tail, rhs))
    }
}

/// `∫₀^{r_n} g` by Gauss-Legendre on each cell, each cell cut into `split`
/// equal parts and further so that no piece spans a radius ratio above 2.
fn integrate_pointwise(
    rule: &GaussLegendre,
    edges: &[f64],
    split: usize,
    g: impl Fn(f64) -> f64,
) -> f64 {
    let mut total = 0.0;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = (b - a) / split as f64;
        for k in 0..split {
            let lo = a + k as f64 * h;
            let hi = if k + 1 == split { b } else { lo + h };
            if lo > 0.0 && hi > 2.0 * lo {
                let n = (hi / lo).log2().ceil() as usize;
                let q = (hi / lo).powf(1.0 / n as f64);
                let mut x = lo;
                for j in 1..=n {
                    let y = if j == n { hi } else { lo * q.powi(j as i32) };
                    total += rule.integrate(x, y, &g);
                    x = y;
                }
            } else {
                total += rule.integrate(lo, hi, &g);
            }
        }
    }
    total
}

pub fn hardy_ratio(f: &StepFunction, p: Exponent) -> Result<RatioReport> {
    Evaluator::default().hardy_ratio(f, p)
}

pub fn new_hardy_ratio(f: &StepFunction, p: Exponent) -> Result<RatioReport> {
    Evaluator::default().new_hardy_ratio(f, p)
}

pub fn hardy_rellich_int_ratio(gprime: &StepFunction) -> Result<RatioReport> {
    Evaluator::default().hardy_rellich_int_ratio(gprime)
}

pub fn improved_hardy_rellich_ratio(gprime: &StepFunction) -> Result<RatioReport> {
    Evaluator::default().improved_hardy_rellich_ratio(gprime)
}

pub fn rellich_ratio(f: &StepFunction, p: Exponent) -> Result<RatioReport> {
    Evaluator::default().rellich_ratio(f, p)
}

pub fn rellich_chain(f: &StepFunction, p: Exponent) -> Result<RatioReport> {
    Evaluator::default().rellich_chain(f, p)
}

pub fn weighted_supmin_check(f: &StepFunction, p: Exponent) -> Result<(f64, f64)> {
    Evaluator::default().weighted_supmin_check(f, p)
}

pub fn corollary_int_check(f: &StepFunction, p: Exponent) -> Result<(f64, f64)> {
    Evaluator::default().corollary_int_check(f, p)
}

pub fn corollary_avg_check(f: &StepFunction, p: Exponent) -> Result<(f64, f64)> {
    Evaluator::default().corollary_avg_check(f, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    fn ind() -> StepFunction {
        StepFunction::indicator(0.0, 1.0, 1.0).unwrap()
    }

    fn late() -> StepFunction {
        StepFunction::indicator(1.0, 2.0, 1.0).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn sharp_constants() {
        assert_eq!(sharp_constant(Kind::Hardy, ex(2.0)).unwrap(), 4.0);
        assert_eq!(sharp_constant(Kind::Hardy, ex(3.0)).unwrap(), 27.0 / 8.0);
        assert_eq!(
            sharp_constant(Kind::RellichChain, ex(2.0)).unwrap(),
            16.0 / 9.0
        );
        assert_eq!(sharp_constant(Kind::RellichChain, ex(3.0)).unwrap(), 0.729);
        assert_eq!(sharp_constant(Kind::HardyRellichInt, ex(2.0)).unwrap(), 4.0);
        assert!(sharp_constant(Kind::HardyRellichInt, ex(3.0)).is_err());
        assert!(sharp_constant(Kind::ImprovedHardyRellich, ex(1.5)).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for k in Kind::ALL {
            assert_eq!(k.as_str().parse::<Kind>().unwrap(), k);
            assert_eq!(
                serde_json::to_string(&k).unwrap(),
                format!("\"{}\"", k.as_str())
            );
        }
        assert!("bogus".parse::<Kind>().is_err());
    }

    #[test]
    fn hardy_indicator_examples() {
        let r = hardy_ratio(&ind(), ex(2.0)).unwrap();
        assert!(close(r.ratio, 2.0, 1e-13));
        let r3 = hardy_ratio(&ind(), ex(3.0)).unwrap();
        assert!(close(r3.numerator, 1.5, 1e-13));
        assert!(close(r3.ratio, 1.5, 1e-13));
        assert_eq!(r3.sharp, 27.0 / 8.0);
        let scaled = hardy_ratio(&ind().scaled(-7.5), ex(3.0)).unwrap();
        assert!(close(scaled.ratio, r3.ratio, 1e-12));
    }

    #[test]
    fn zero_function_is_rejected() {
        let z = ind().scaled(0.0);
        for k in Kind::ALL {
            assert!(matches!(
                Evaluator::default().ratio(k, &z, ex(2.0)),
                Err(HardyError::ZeroDenominator)
            ));
        }
    }

    #[test]
    fn new_hardy_examples() {
        let a = new_hardy_ratio(&ind(), ex(2.0)).unwrap();
        assert!(close(a.ratio, 2.0, 1e-13));
        let b = new_hardy_ratio(&late(), ex(2.0)).unwrap();
        let c = hardy_ratio(&late(), ex(2.0)).unwrap();
        assert!(b.numerator > c.numerator * (1.0 + 1e-3));
        assert_eq!(b.classical_numerator.unwrap(), c.numerator);
    }

    #[test]
    fn hardy_rellich_examples() {
        let r = hardy_rellich_int_ratio(&ind()).unwrap();
        assert!(close(r.ratio, 2.0, 1e-13));
        assert_eq!(r.kind, Kind::HardyRellichInt);
        assert_eq!(r.sharp, 4.0);
        assert!(matches!(
            hardy_rellich_int_ratio(&ind().scaled(0.0)),
            Err(HardyError::ZeroDenominator)
        ));
        let imp = improved_hardy_rellich_ratio(&late()).unwrap();
        let cls = hardy_rellich_int_ratio(&late()).unwrap();
        assert!(imp.ratio > cls.ratio);
        let neg = improved_hardy_rellich_ratio(&late().scaled(-1.0)).unwrap();
        assert_eq!(neg, imp);
    }

    #[test]
    fn rellich_chain_examples() {
        let r = rellich_chain(&ind(), ex(2.0)).unwrap();
        assert!(close(r.numerator, 5.0 / 6.0, 1e-13));
        assert!(close(r.middle.unwrap(), 5.0 / 6.0, 1e-13));
        assert_eq!(r.sharp, 16.0 / 9.0);
        let l = rellich_chain(&late(), ex(2.0)).unwrap();
        assert!(l.numerator < l.middle.unwrap());
        assert!(l.satisfies(1e-6));
        let s = rellich_chain(&late().scaled(-3.0), ex(2.0)).unwrap();
        assert!(close(s.ratio, l.ratio, 1e-12));
    }

    #[test]
    fn weighted_supmin_examples() {
        let dec = StepFunction::from_widths(&[0.5, 1.0, 2.0], vec![3.0, 1.0, 0.25]).unwrap();
        let (l, r) = weighted_supmin_check(&dec, ex(2.0)).unwrap();
        assert!(close(l, r, 1e-12));
        let cancel = StepFunction::from_widths(&[1.0, 1.0], vec![-1.0, 1.0]).unwrap();
        let (l, r) = weighted_supmin_check(&cancel, ex(2.0)).unwrap();
        assert!(l < r);
        assert_eq!(
            weighted_supmin_check(&ind().scaled(0.0), ex(2.0)).unwrap(),
            (0.0, 0.0)
        );
    }

    #[test]
    fn corollary_int_examples() {
        let (l, r) = corollary_int_check(&ind(), ex(2.0)).unwrap();
        assert!(close(l, 2.0, 1e-12), "{l}");
        assert_eq!(r, 4.0);
        assert!(corollary_int_check(&ind().scaled(0.0), ex(2.0)).is_err());
    }

    #[test]
    fn corollary_avg_examples() {
        let (l, r) = corollary_avg_check(&late(), ex(2.0)).unwrap();
        assert!(l.is_finite() && r.is_finite() && l <= r, "{l} {r}");
        assert!(matches!(
            corollary_avg_check(&ind(), ex(2.0)),
            Err(HardyError::DivergentIntegral(_))
        ));
        assert!(matches!(
            corollary_avg_check(&late().scaled(0.0), ex(2.0)),
            Err(HardyError::ZeroDenominator)
        ));
    }

    #[test]
    fn violations_are_reported() {
        let good = rellich_chain(&late(), ex(2.0)).unwrap();
        assert!(good.violations(1e-6).is_empty());
        let mut bad = good.clone();
        bad.ratio = bad.sharp * 1.01;
        bad.middle = Some(bad.numerator * 0.5);
        let v = bad.violations(1e-6);
        assert_eq!(v.len(), 2, "{v:?}");
        let mut worse = new_hardy_ratio(&late(), ex(2.0)).unwrap();
        worse.classical_numerator = Some(worse.numerator * 2.0);
        assert!(!worse.satisfies(1e-6));
        worse.denominator = 0.0;
        assert!(!worse.satisfies(1e-6));
    }

    #[test]
    fn report_json_fields() {
        let r = rellich_chain(&ind(), ex(2.0)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|s| s.as_str()).collect();
        assert_eq!(
            keys,
            [
                "kind",
                "p",
                "numerator",
                "middle",
                "denominator",
                "sharp",
                "ratio",
                "slack",
                "quad_order",
                "refinement_estimate"
            ]
        );
        let h = hardy_ratio(&ind(), ex(2.0)).unwrap();
        assert!(serde_json::to_value(&h).unwrap()["middle"].is_null());
    }
}
