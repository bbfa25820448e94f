//! Generalized-Beta tour-length model: density, truncated means, the
//! iterated truncation bound and its closed form, and moment fitting.

pub mod quad;
mod special;

use serde::{Deserialize, Serialize};

pub use special::{
    beta_fn, hypergeometric_f, incomplete_beta, incomplete_beta_quadrature, incomplete_beta_series,
    incomplete_beta_series_direct, truncation_ratio, QUADRATURE_SWITCH, SERIES_MAX_TERMS, SERIES_TOLERANCE,
};

use crate::error::{Error, Result};

/// Ratio the hardness-of-approximation argument compares against.
pub const TARGET_220_219: f64 = 220.0 / 219.0;

/// Shape and support of a Generalized-Beta law on `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbParams {
    pub alpha: f64,
    pub beta: f64,
    /// Lower end `A`, the optimum or its proxy.
    pub lower: f64,
    /// Upper end `B`, the longest tour or its proxy.
    pub upper: f64,
}

impl GbParams {
    pub fn new(alpha: f64, beta: f64, lower: f64, upper: f64) -> Result<Self> {
        let p = GbParams { alpha, beta, lower, upper };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.beta > 0.0 && self.alpha.is_finite() && self.beta.is_finite()) {
            return Err(Error::Domain(format!(
                "shapes must be positive, got alpha = {}, beta = {}",
                self.alpha, self.beta
            )));
        }
        if !(self.lower.is_finite() && self.upper.is_finite() && self.upper > self.lower) {
            return Err(Error::Domain(format!("need lower < upper, got [{}, {}]", self.lower, self.upper)));
        }
        Ok(())
    }

    /// The bound's derivation assumes both shapes exceed 1.
    pub fn shapes_above_one(&self) -> bool {
        self.alpha > 1.0 && self.beta > 1.0
    }

    fn span(&self) -> f64 {
        self.upper - self.lower
    }
}

/// One step of the truncation recursion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationState {
    pub k: usize,
    /// Normalized truncation point used for this step.
    pub b_hat: f64,
    /// Truncated mean after this step.
    pub mu: f64,
}

/// Numerical constants a bound was computed with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericSettings {
    pub series_tolerance: f64,
    pub series_max_terms: usize,
    pub quadrature_switch: f64,
}

impl Default for NumericSettings {
    fn default() -> Self {
        NumericSettings {
            series_tolerance: SERIES_TOLERANCE,
            series_max_terms: SERIES_MAX_TERMS,
            quadrature_switch: QUADRATURE_SWITCH,
        }
    }
}

/// Bound recursion plus the closed-form ratios at the same `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub params: GbParams,
    pub states: Vec<TruncationState>,
    /// `closed_form[i]` is the ratio at `K = i + 1`.
    pub closed_form: Vec<f64>,
    pub target_ratio: Option<f64>,
    pub required_k: Option<usize>,
    /// Set when `1.5 A >= B`, so the recursion starts untruncated.
    pub christofides_beyond_upper: bool,
    /// False when a fitted shape is at most 1.
    pub shape_precondition_met: bool,
    pub numerics: NumericSettings,
}

/// Normalized Generalized-Beta density on `[lower, upper]`.
pub fn gb_pdf(x: f64, p: &GbParams) -> Result<f64> {
    p.validate()?;
    if !(x >= p.lower && x <= p.upper) {
        return Err(Error::Domain(format!("x = {x} outside [{}, {}]", p.lower, p.upper)));
    }
    let span = p.span();
    let num = (x - p.lower).powf(p.alpha - 1.0) * (p.upper - x).powf(p.beta - 1.0);
    Ok(num / (span.powf(p.alpha + p.beta - 1.0) * beta_fn(p.alpha, p.beta)?))
}

/// Mean of the law truncated to `[A, A + (B - A) b_hat]`.
pub fn truncated_mean(p: &GbParams, b_hat: f64) -> Result<f64> {
    p.validate()?;
    if !(b_hat > 0.0 && b_hat <= 1.0) {
        return Err(Error::Domain(format!("b_hat must lie in (0, 1], got {b_hat}")));
    }
    Ok(p.lower + p.span() * truncation_ratio(b_hat, p.alpha, p.beta)?)
}

/// `1 + 0.5 ((alpha + 1) / (alpha + 2))^(K - 1)`.
pub fn closed_form_ratio(alpha: f64, k: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if k == 0 {
        return Err(Error::Domain("K starts at 1".into()));
    }
    let r = (alpha + 1.0) / (alpha + 2.0);
    Ok(1.0 + 0.5 * r.powi((k - 1) as i32))
}

/// Smallest `K` with `closed_form_ratio(alpha, K) <= target`.
pub fn iterations_for_target(alpha: f64, target: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if target.is_nan() || target <= 1.0 {
        return Err(Error::Domain(format!("target ratio {target}: ratio 1 unreachable in finite K")));
    }
    if target >= 1.5 {
        return Ok(1);
    }
    let r = (alpha + 1.0) / (alpha + 2.0);
    let estimate = 1.0 + ((2.0 * (target - 1.0)).ln() / r.ln()).ceil();
    let mut k = (estimate.max(1.0) as usize).max(1);
    // The logarithm can be off by one at the boundary; settle on the exact
    // integer inverse of the evaluated ratio.
    while k > 1 && closed_form_ratio(alpha, k - 1)? <= target {
        k -= 1;
    }
    while closed_form_ratio(alpha, k)? > target {
        k += 1;
    }
    Ok(k)
}

/// Runs the truncation recursion for `K = 1..=k_max`.
///
/// `K = 1` is the construction itself: `mu = 1.5 A` (capped at `B`) with no
/// truncation. Each later step truncates at the previous mean.
pub fn iterate_bound(p: &GbParams, k_max: usize) -> Result<BoundReport> {
    p.validate()?;
    if k_max == 0 {
        return Err(Error::Domain("K_max must be at least 1".into()));
    }
    let christofides_point = 1.5 * p.lower;
    let beyond = christofides_point >= p.upper;
    let mut states = Vec::with_capacity(k_max);
    states.push(TruncationState { k: 1, b_hat: 1.0, mu: if beyond { p.upper } else { christofides_point } });
    for k in 2..=k_max {
        let prev = states[k - 2].mu;
        let b_hat = ((prev - p.lower) / p.span()).clamp(f64::MIN_POSITIVE, 1.0);
        let mu = truncated_mean(p, b_hat)?;
        states.push(TruncationState { k, b_hat, mu });
    }
    let closed_form = (1..=k_max).map(|k| closed_form_ratio(p.alpha, k)).collect::<Result<Vec<_>>>()?;
    Ok(BoundReport {
        params: *p,
        states,
        closed_form,
        target_ratio: None,
        required_k: None,
        christofides_beyond_upper: beyond,
        shape_precondition_met: p.shapes_above_one(),
        numerics: NumericSettings::default(),
    })
}

/// Bound report for a target ratio: runs the recursion up to the `K` the
/// closed form needs.
pub fn bound_for_target(p: &GbParams, target: f64) -> Result<BoundReport> {
    let k = iterations_for_target(p.alpha, target)?;
    let mut report = iterate_bound(p, k)?;
    report.target_ratio = Some(target);
    report.required_k = Some(k);
    Ok(report)
}

/// Method-of-moments fit of the shapes to samples on `[lower, upper]`.
/// Uses the population variance (divisor `n`).
pub fn fit_params(samples: &[f64], lower: f64, upper: f64) -> Result<GbParams> {
    if samples.len() < 2 {
        return Err(Error::Usage(format!("need at least 2 samples, got {}", samples.len())));
    }
    if !(lower.is_finite() && upper.is_finite() && upper > lower) {
        return Err(Error::Domain(format!("need lower < upper, got [{lower}, {upper}]")));
    }
    if let Some(s) = samples.iter().find(|&&s| !(s >= lower && s <= upper)) {
        return Err(Error::Domain(format!("sample {s} outside [{lower}, {upper}]")));
    }
    let span = upper - lower;
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|s| (s - lower) / span).collect();
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n;
    let spread = xs.iter().fold(f64::NEG_INFINITY, |a, &x| a.max(x)) - xs.iter().fold(f64::INFINITY, |a, &x| a.min(x));
    if v <= 0.0 || spread == 0.0 {
        return Err(Error::Fit("samples have zero variance".into()));
    }
    let c = m * (1.0 - m) / v - 1.0;
    if c <= 0.0 {
        return Err(Error::Fit(format!(
            "samples are overdispersed for a Beta law (mean {m:.6}, variance {v:.6}); draw more samples"
        )));
    }
    GbParams::new(m * c, (1.0 - m) * c, lower, upper).map_err(|e| Error::Fit(e.to_string()))
}
