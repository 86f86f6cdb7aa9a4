//! Double-precision evaluation of the identity at `x = -1, y1 = y^2, y2 = y`:
//! the functions `A`, `B`, `R^(y)`, their zeros and functional equations, and
//! the limits used to pass from the denominator identity to Jacobi's formula.
//!
//! Infinite products and bilateral sums are cut once the terms fall below
//! `tail_eps`. Pole sets:
//! `P = {y : y^3 = -q^m, y != -q^k}` and `Z = {y : y^2 = +-q^m}`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64 as C;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::GradedSeries;

const MAX_TERMS: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub q: f64,
    pub tol: f64,
    pub tail_eps: f64,
    pub samples: Vec<C>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self::new(0.1, 1e-8)
    }
}

impl EvalConfig {
    /// 16 samples, 8 on each of the circles `|y| = 0.7` and `|y| = 1.2`,
    /// rotated off the axes by `pi/8`.
    pub fn new(q: f64, tol: f64) -> Self {
        let mut samples = Vec::new();
        for r in [0.7, 1.2] {
            for k in 0..8 {
                samples.push(C::from_polar(r, PI / 8.0 + k as f64 * PI / 4.0));
            }
        }
        EvalConfig { q, tol, tail_eps: 1e-16, samples }
    }

    pub fn pole_guard(&self) -> f64 {
        self.tol.sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::InvalidParameter(format!("q must lie in (0, 1), got {}", self.q)));
        }
        if self.tol.is_nan() || self.tol <= 0.0 || self.tail_eps.is_nan() || self.tail_eps <= 0.0 {
            return Err(Error::InvalidParameter("tol and tail_eps must be positive".into()));
        }
        for y in &self.samples {
            self.guard(*y, &[PoleSet::Z, PoleSet::P, PoleSet::APoles])?;
        }
        Ok(())
    }

    fn guard(&self, y: C, sets: &[PoleSet]) -> Result<()> {
        guard_at(self.q, y, self.pole_guard(), sets)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoleSet {
    /// `y^2 = +-q^m`
    Z,
    /// `y^3 = -q^m`, `y != -q^k`
    P,
    /// `y = q^n`, `n != 0`
    APoles,
}

/// Points of `set` near `|y|`.
pub fn nearby_points(q: f64, y: C, set: PoleSet) -> Vec<C> {
    let lq = q.ln();
    let mut out = Vec::new();
    let r = y.norm();
    if r == 0.0 {
        return out;
    }
    let (denom, phases): (f64, Vec<f64>) = match set {
        PoleSet::Z => (2.0, vec![0.0, 0.5, 1.0, 1.5]),
        PoleSet::P => (3.0, vec![1.0 / 3.0, 1.0, 5.0 / 3.0]),
        PoleSet::APoles => (1.0, vec![0.0]),
    };
    let m0 = (denom * r.ln() / lq).round() as i64;
    for m in m0 - 2..=m0 + 2 {
        let modulus = q.powf(m as f64 / denom);
        for &ph in &phases {
            let excluded = match set {
                PoleSet::P => ph == 1.0 && m % 3 == 0,
                PoleSet::APoles => m == 0,
                PoleSet::Z => false,
            };
            if !excluded {
                out.push(C::from_polar(modulus, ph * PI));
            }
        }
    }
    out
}

fn guard_at(q: f64, y: C, dist: f64, sets: &[PoleSet]) -> Result<()> {
    if y.norm() < dist {
        return Err(Error::PoleProximity { point: fmt_c(y), distance: y.norm() });
    }
    for &set in sets {
        for p in nearby_points(q, y, set) {
            let d = (y - p).norm();
            if d < dist {
                return Err(Error::PoleProximity { point: fmt_c(y), distance: d });
            }
        }
    }
    Ok(())
}

fn fmt_c(y: C) -> String {
    format!("{}{:+}i", y.re, y.im)
}

/// `prod_{n>=0} (1 + a b^n)`.
fn poch(a: C, b: f64, eps: f64) -> Result<C> {
    let mut acc = C::new(1.0, 0.0);
    let mut t = a;
    for _ in 0..MAX_TERMS {
        if t.norm() < eps {
            return Ok(acc);
        }
        acc *= C::new(1.0, 0.0) + t;
        t *= b;
    }
    Err(Error::NonConvergent(format!("product with head {} did not settle", fmt_c(a))))
}

/// `sum_{n in Z} f(n)`, each direction stopped after three consecutive terms
/// below `eps`.
fn bilateral(f: impl Fn(i64) -> C, eps: f64) -> Result<C> {
    let mut sum = f(0);
    for dir in [1i64, -1] {
        let mut small = 0;
        let mut n = dir;
        loop {
            let t = f(n);
            sum += t;
            small = if t.norm() < eps { small + 1 } else { 0 };
            if small == 3 {
                break;
            }
            if n.unsigned_abs() as usize > MAX_TERMS {
                return Err(Error::NonConvergent("bilateral sum did not settle".into()));
            }
            n += dir;
        }
    }
    Ok(sum)
}

fn one() -> C {
    C::new(1.0, 0.0)
}

/// `((1-q)_q)^2 / ((1-qy)_q (1-q/y)_q)`.
fn a_raw(q: f64, eps: f64, y: C) -> Result<C> {
    let qq = poch(C::new(-q, 0.0), q, eps)?;
    Ok(qq * qq / (poch(-y * q, q, eps)? * poch(-(q / y), q, eps)?))
}

fn rhat_raw(q: f64, eps: f64, y: C) -> Result<C> {
    let m = poch(C::new(-q, 0.0), q, eps)?;
    let p = poch(C::new(q, 0.0), q, eps)?;
    let y3 = y * y * y;
    let num = 2.0 * m.powi(4) * p * p * poch(y3, q, eps)? * poch(q / y3, q, eps)?;
    let mut den = one();
    for ys in [y, y * y] {
        den *= poch(ys, q, eps)? * poch(q / ys, q, eps)? * poch(-ys, q, eps)? * poch(-(q / ys), q, eps)?;
    }
    Ok(num / den)
}

/// `sum_n q^n/((1+q^n y)(1+q^n y^2)) + q^n/((1-q^n y)(1-q^n y^2))`.
fn b_raw(q: f64, eps: f64, y: C) -> Result<C> {
    let y2 = y * y;
    bilateral(
        |n| {
            let qn = q.powi(n as i32);
            qn / ((1.0 + qn * y) * (1.0 + qn * y2)) + qn / ((1.0 - qn * y) * (1.0 - qn * y2))
        },
        eps,
    )
}

/// The second form of `B`, with the `1/(1-y)` pulled out.
fn b_second_raw(q: f64, eps: f64, y: C) -> Result<C> {
    let y2 = y * y;
    let s = bilateral(
        |n| {
            let qn = q.powi(n as i32);
            qn / (1.0 + qn * y) - qn * y / (1.0 + qn * y2) + qn / (1.0 - qn * y) - qn * y / (1.0 - qn * y2)
        },
        eps,
    )?;
    Ok(s / (1.0 - y))
}

/// Closed product for `A/R^` with denominator `2 prod_{n>=0} (1-q^(2n+2))^2 ...`.
fn a_over_rhat_product_raw(q: f64, eps: f64, y: C) -> Result<C> {
    let y3 = y * y * y;
    let mut num = (1.0 - y) * poch(-y * y, q, eps)? * poch(-(q / (y * y)), q, eps)?;
    for ys in [y, y * y] {
        num *= poch(ys, q, eps)? * poch(q / ys, q, eps)?;
    }
    let e = poch(C::new(-q * q, 0.0), q * q, eps)?;
    let den = 2.0 * e * e * poch(y3, q, eps)? * poch(q / y3, q, eps)?;
    Ok(num / den)
}

pub fn eval_a(cfg: &EvalConfig, y: C) -> Result<C> {
    cfg.guard(y, &[PoleSet::APoles])?;
    a_raw(cfg.q, cfg.tail_eps, y)
}

pub fn eval_b(cfg: &EvalConfig, y: C) -> Result<C> {
    cfg.guard(y, &[PoleSet::Z])?;
    b_raw(cfg.q, cfg.tail_eps, y)
}

pub fn eval_b_second_form(cfg: &EvalConfig, y: C) -> Result<C> {
    cfg.guard(y, &[PoleSet::Z])?;
    b_second_raw(cfg.q, cfg.tail_eps, y)
}

pub fn eval_rhat(cfg: &EvalConfig, y: C) -> Result<C> {
    cfg.guard(y, &[PoleSet::Z])?;
    rhat_raw(cfg.q, cfg.tail_eps, y)
}

pub fn eval_a_over_rhat(cfg: &EvalConfig, y: C) -> Result<C> {
    cfg.guard(y, &[PoleSet::APoles, PoleSet::P, PoleSet::Z])?;
    Ok(a_raw(cfg.q, cfg.tail_eps, y)? / rhat_raw(cfg.q, cfg.tail_eps, y)?)
}

pub fn eval_a_over_rhat_product(cfg: &EvalConfig, y: C) -> Result<C> {
    cfg.guard(y, &[PoleSet::P])?;
    a_over_rhat_product_raw(cfg.q, cfg.tail_eps, y)
}

/// `A B / R^` at `y`.
pub fn eval_ratio(cfg: &EvalConfig, y: C) -> Result<C> {
    cfg.guard(y, &[PoleSet::APoles, PoleSet::P, PoleSet::Z])?;
    ratio_raw(cfg.q, cfg.tail_eps, y)
}

fn ratio_raw(q: f64, eps: f64, y: C) -> Result<C> {
    Ok(a_raw(q, eps, y)? * b_raw(q, eps, y)? / rhat_raw(q, eps, y)?)
}

/// One evaluated quantity against its expected value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub label: String,
    pub y: [f64; 2],
    pub value: [f64; 2],
    pub expected: [f64; 2],
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticReport {
    pub check: String,
    pub tol: f64,
    pub passed: bool,
    pub max_deviation: f64,
    pub probes: Vec<Probe>,
}

impl AnalyticReport {
    fn new(check: &str, tol: f64, probes: Vec<Probe>) -> Self {
        let max_deviation = probes.iter().map(|p| p.deviation).fold(0.0, f64::max);
        AnalyticReport {
            check: check.to_string(),
            tol,
            passed: !probes.is_empty() && probes.iter().all(|p| p.deviation < tol),
            max_deviation,
            probes,
        }
    }
}

fn pair(c: C) -> [f64; 2] {
    [c.re, c.im]
}

fn probe(label: impl Into<String>, y: C, value: C, expected: C) -> Probe {
    Probe {
        label: label.into(),
        y: pair(y),
        value: pair(value),
        expected: pair(expected),
        deviation: (value - expected).norm(),
    }
}

/// Relative deviation of `value` from `expected`.
fn rel_probe(label: impl Into<String>, y: C, value: C, expected: C) -> Probe {
    let mut p = probe(label, y, value, expected);
    p.deviation /= expected.norm().max(f64::MIN_POSITIVE);
    p
}

/// `|A B / R^ - 1|` at every sample, plus the effect of halving `tail_eps`.
pub fn check_ratio_one(cfg: &EvalConfig) -> Result<Vec<AnalyticReport>> {
    cfg.validate()?;
    let probes: Vec<(Probe, Probe)> = cfg
        .samples
        .par_iter()
        .map(|&y| {
            let v = eval_ratio(cfg, y)?;
            let half = ratio_raw(cfg.q, cfg.tail_eps / 2.0, y)?;
            Ok((probe("AB/R^", y, v, one()), probe("tail_eps/2", y, half, v)))
        })
        .collect::<Result<_>>()?;
    let (main, tail): (Vec<_>, Vec<_>) = probes.into_iter().unzip();
    Ok(vec![
        AnalyticReport::new("ratio_one", cfg.tol, main),
        AnalyticReport::new("tail_bound", cfg.tol / 10.0, tail),
    ])
}

/// `(A/R^)(qy) = (A/R^)(y) q(1-qy)/(1-y)`, `B(qy)/B(y) = q^-1 (1-y)/(1-qy)` and
/// `(AB/R^)(qy) = (AB/R^)(y)`, all as relative deviations.
pub fn check_functional(cfg: &EvalConfig, y: C) -> Result<Vec<Probe>> {
    let q = cfg.q;
    let ar = eval_a_over_rhat(cfg, y)?;
    let ar_q = eval_a_over_rhat(cfg, y * q)?;
    let b = eval_b(cfg, y)?;
    let b_q = eval_b(cfg, y * q)?;
    Ok(vec![
        rel_probe("(A/R^)(qy)", y, ar_q, ar * q * (1.0 - q * y) / (1.0 - y)),
        rel_probe("B(qy)/B(y)", y, b_q / b, (1.0 - y) / (q * (1.0 - q * y))),
        rel_probe("(AB/R^)(qy)", y, ar_q * b_q, ar * b),
    ])
}

pub fn check_functional_all(cfg: &EvalConfig) -> Result<AnalyticReport> {
    cfg.validate()?;
    let probes: Vec<Vec<Probe>> = cfg.samples.par_iter().map(|&y| check_functional(cfg, y)).collect::<Result<_>>()?;
    Ok(AnalyticReport::new("functional_equations", cfg.tol, probes.concat()))
}

/// `|B|` on `P`: `y = q^(k/3) e^(+-i pi/3)` for `k = 1, 2`.
pub fn check_b_zeros(cfg: &EvalConfig) -> Result<AnalyticReport> {
    let mut probes = Vec::new();
    for k in [1.0, 2.0] {
        for s in [1.0, -1.0] {
            let y = C::from_polar(cfg.q.powf(k / 3.0), s * PI / 3.0);
            probes.push(probe("B on P", y, eval_b(cfg, y)?, C::new(0.0, 0.0)));
        }
    }
    Ok(AnalyticReport::new("b_zeros", cfg.tol, probes))
}

/// `(1-y)^2 B(y) -> 1/2` and `(y-1)^-2 (A/R^)(y) -> 2` along `y = 1 + h`.
pub fn check_limits(cfg: &EvalConfig, h: f64, tol: f64) -> Result<AnalyticReport> {
    let (q, eps) = (cfg.q, cfg.tail_eps);
    let y = C::new(1.0 + h, 0.0);
    let b = b_raw(q, eps, y)?;
    let ar = a_raw(q, eps, y)? / rhat_raw(q, eps, y)?;
    let d = (1.0 - y) * (1.0 - y);
    Ok(AnalyticReport::new(
        "limits_at_1",
        tol,
        vec![
            probe("(1-y)^2 B", y, d * b, C::new(0.5, 0.0)),
            probe("(y-1)^-2 A/R^", y, ar / d, C::new(2.0, 0.0)),
        ],
    ))
}

/// Vanishing orders of `A/R^` (product form): 2 at `y = 1`, 1 at `-1`,
/// `sqrt q` and `i sqrt q`, estimated as `log2 |f(y0+h) / f(y0+h/2)|`.
pub fn check_zero_orders(cfg: &EvalConfig, h: f64, tol: f64) -> Result<AnalyticReport> {
    let (q, eps) = (cfg.q, cfg.tail_eps);
    let sq = q.sqrt();
    let mut probes = Vec::new();
    for (y0, k) in [(one(), 2.0), (C::new(-1.0, 0.0), 1.0), (C::new(sq, 0.0), 1.0), (C::new(0.0, sq), 1.0)] {
        let f1 = a_over_rhat_product_raw(q, eps, y0 + h)?;
        let f2 = a_over_rhat_product_raw(q, eps, y0 + h / 2.0)?;
        let order = (f1.norm() / f2.norm()).log2();
        probes.push(probe("order at y0", y0, C::new(order, 0.0), C::new(k, 0.0)));
    }
    Ok(AnalyticReport::new("zero_orders", tol, probes))
}

/// `A/R^` via `A` and `R^` separately against its closed product form.
pub fn check_product_form(cfg: &EvalConfig) -> Result<AnalyticReport> {
    cfg.validate()?;
    let probes = cfg
        .samples
        .iter()
        .map(|&y| Ok(rel_probe("A/R^ closed form", y, eval_a_over_rhat_product(cfg, y)?, eval_a_over_rhat(cfg, y)?)))
        .collect::<Result<_>>()?;
    Ok(AnalyticReport::new("a_over_rhat_product", cfg.tol, probes))
}

/// The two displayed forms of `B` agree.
pub fn check_b_forms(cfg: &EvalConfig) -> Result<AnalyticReport> {
    cfg.validate()?;
    let probes = cfg
        .samples
        .iter()
        .map(|&y| Ok(rel_probe("B second form", y, eval_b_second_form(cfg, y)?, eval_b(cfg, y)?)))
        .collect::<Result<_>>()?;
    Ok(AnalyticReport::new("b_forms", cfg.tol, probes))
}

/// `a_n(x) = q^n/(1+q^n)^2 - q^n x/(1+q^n x)^2`.
pub fn a_n(q: f64, n: i64, x: f64) -> f64 {
    let qn = q.powi(n as i32);
    qn / ((1.0 + qn) * (1.0 + qn)) - qn * x / ((1.0 + qn * x) * (1.0 + qn * x))
}

/// `lim_{x->1} f(x)/(x-1)^2` for `f(1) = 0`, from
/// `g(h) = (f(1+h) + f(1-h)) / (2h^2)` with one Richardson step, refused
/// when two consecutive extrapolations differ by more than `tol/10`.
pub fn second_order_limit(f: impl Fn(f64) -> f64, h: f64, tol: f64) -> Result<f64> {
    let g = |t: f64| (f(1.0 + t) + f(1.0 - t)) / (2.0 * t * t);
    let (g1, g2, g3) = (g(h), g(h / 2.0), g(h / 4.0));
    let r1 = (4.0 * g2 - g1) / 3.0;
    let r2 = (4.0 * g3 - g2) / 3.0;
    if (r1 - r2).abs() > tol / 10.0 {
        return Err(Error::StepTooLarge(h));
    }
    Ok(r2)
}

/// `a_0/(x-1)^2 -> 1/16` and `(a_n + a_-n)/(x-1)^2 -> -q^n(q^2n - 4q^n + 1)/(1+q^n)^4`.
pub fn check_an_limits(q: f64, n_max: i64, h: f64, tol: f64) -> Result<AnalyticReport> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("q must lie in (0, 1), got {q}")));
    }
    let mut probes = Vec::new();
    for n in 0..=n_max {
        let (got, want) = if n == 0 {
            (second_order_limit(|x| a_n(q, 0, x), h, tol)?, 1.0 / 16.0)
        } else {
            let qn = q.powi(n as i32);
            (
                second_order_limit(|x| a_n(q, n, x) + a_n(q, -n, x), h, tol)?,
                -qn * (qn * qn - 4.0 * qn + 1.0) / (1.0 + qn).powi(4),
            )
        };
        probes.push(probe(format!("n={n}"), C::new(q, 0.0), C::new(got, 0.0), C::new(want, 0.0)));
    }
    Ok(AnalyticReport::new("an_limits", tol, probes))
}

/// Evaluates a truncated series at a point given per variable.
pub fn eval_series(s: &GradedSeries, point: &[C]) -> Result<C> {
    if point.len() != s.lattice().rank() {
        return Err(Error::DimensionMismatch { expected: s.lattice().rank(), got: point.len() });
    }
    let mut acc = C::new(0.0, 0.0);
    for (e, c) in s.terms() {
        let mut t = C::new(bigint_f64(c), 0.0);
        for (v, &k) in point.iter().zip(&e.0) {
            t *= v.powi(k as i32);
        }
        acc += t;
    }
    Ok(acc)
}

fn bigint_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// Closed form of the product side at `(q, x, y1, y2)`.
pub fn lhs_closed(p: [f64; 4], eps: f64) -> Result<f64> {
    let [q, x, y1, y2] = p;
    let f = |a: f64, s: f64| poch(C::new(s * a, 0.0), q, eps).map(|c| c.re);
    let mut v = f(x, -1.0)? * f(q / x, -1.0)? * f(x * y1 * y2, -1.0)? * f(q / (x * y1 * y2), -1.0)? * f(q, -1.0)?.powi(4);
    for y in [y1, y2] {
        v /= f(y, 1.0)? * f(q / y, 1.0)? * f(x * y, 1.0)? * f(q / (x * y), 1.0)?;
    }
    Ok(v)
}

/// Closed form of the prefactor times the orbit sum at `(q, x, y1, y2)`.
pub fn rhs_closed(p: [f64; 4], eps: f64) -> Result<f64> {
    let [q, x, y1, y2] = p;
    let f = |a: f64| poch(C::new(-a, 0.0), q, eps).map(|c| c.re);
    let pre = f(q)?.powi(2) / (f(q * y2 / y1)? * f(q * y1 / y2)?);
    let s = bilateral(
        |n| {
            let qn = q.powi(n as i32);
            let v = qn / ((1.0 + qn * y1) * (1.0 + qn * y2)) - qn * x / ((1.0 + qn * x * y1) * (1.0 + qn * x * y2));
            C::new(v, 0.0)
        },
        eps,
    )?;
    Ok(pre * s.re)
}

/// Truncated exact series evaluated at an interior point of the expansion
/// region, against the closed forms there.
pub fn check_series_consistency(
    lhs: &GradedSeries,
    rhs: &GradedSeries,
    point: [f64; 4],
    tol: f64,
) -> Result<AnalyticReport> {
    let pt: Vec<C> = point.iter().map(|&v| C::new(v, 0.0)).collect();
    let y = C::new(point[2], point[3]);
    let exact_l = lhs_closed(point, 1e-18)?;
    let exact_r = rhs_closed(point, 1e-18)?;
    Ok(AnalyticReport::new(
        "series_consistency",
        tol,
        vec![
            rel_probe("lhs series", y, eval_series(lhs, &pt)?, C::new(exact_l, 0.0)),
            rel_probe("rhs series", y, eval_series(rhs, &pt)?, C::new(exact_r, 0.0)),
            rel_probe("closed forms", y, C::new(exact_r, 0.0), C::new(exact_l, 0.0)),
        ],
    ))
}

/// Default probe step for the `a_n` limits.
pub const AN_STEP: f64 = 1e-2;
/// Step used for the limits at `y = 1`.
pub const LIMIT_STEP: f64 = 1e-4;

/// Every check at the given configuration.
pub fn run_all(cfg: &EvalConfig) -> Result<Vec<AnalyticReport>> {
    cfg.validate()?;
    let mut out = check_ratio_one(cfg)?;
    out.push(check_b_zeros(cfg)?);
    out.push(check_functional_all(cfg)?);
    out.push(check_limits(cfg, LIMIT_STEP, 1e-3)?);
    out.push(check_zero_orders(cfg, 1e-6, 1e-4)?);
    out.push(check_product_form(cfg)?);
    out.push(check_b_forms(cfg)?);
    out.push(check_an_limits(cfg.q, 4, AN_STEP, cfg.tol)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let cfg = EvalConfig::default();
        assert_eq!(cfg.samples.len(), 16);
        cfg.validate().unwrap();
    }

    #[test]
    fn guard_rejects_points_near_poles() {
        let cfg = EvalConfig::default();
        let near = C::new(cfg.q.sqrt() + 1e-6, 0.0);
        assert!(matches!(eval_b(&cfg, near), Err(Error::PoleProximity { .. })));
        assert!(matches!(eval_a(&cfg, C::new(0.1, 1e-7)), Err(Error::PoleProximity { .. })));
        let bad = EvalConfig { q: 1.5, ..EvalConfig::default() };
        assert!(matches!(bad.validate(), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn richardson_on_a_polynomial() {
        let v = second_order_limit(|x| 3.0 * (x - 1.0) * (x - 1.0), 1e-2, 1e-8).unwrap();
        assert!((v - 3.0).abs() < 1e-9);
        assert!(matches!(
            second_order_limit(|x| (10.0 * (x - 1.0)).cos() - 1.0, 0.5, 1e-8),
            Err(Error::StepTooLarge(_))
        ));
    }

    #[test]
    fn ratio_spot_values() {
        let cfg = EvalConfig::default();
        assert!((eval_ratio(&cfg, C::new(0.7, 0.0)).unwrap() - 1.0).norm() < 1e-8);
        let y = C::from_polar(0.9, PI / 5.0);
        assert!((eval_ratio(&cfg, y).unwrap() - 1.0).norm() < 1e-8);
        let cfg3 = EvalConfig::new(0.3, 1e-6);
        assert!((eval_ratio(&cfg3, C::new(1.3, 0.0)).unwrap() - 1.0).norm() < 1e-6);
    }
}
