use statrs::function::gamma::ln_gamma;

use super::quad;
use crate::error::{Error, Result};

/// Series stops once a term falls below this fraction of the partial sum.
pub const SERIES_TOLERANCE: f64 = 1e-15;
/// Series gives up after this many terms.
pub const SERIES_MAX_TERMS: usize = 1_000_000;
/// Largest `t` at which the incomplete Beta uses the series.
pub const QUADRATURE_SWITCH: f64 = 0.9;

fn check_shapes(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::Domain(format!(
            "shape parameters must be positive and finite, got alpha = {alpha}, beta = {beta}"
        )));
    }
    Ok(())
}

/// Complete Beta function `B(alpha, beta)` from log-gamma.
pub fn beta_fn(alpha: f64, beta: f64) -> Result<f64> {
    check_shapes(alpha, beta)?;
    Ok((ln_gamma(alpha) + ln_gamma(beta) - ln_gamma(alpha + beta)).exp())
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Gauss hypergeometric series `2F1(a, b; c; x)`.
///
/// Defined for `0 <= x < 1`, or anywhere when `a` or `b` is a non-positive
/// integer and the series terminates.
pub fn hypergeometric_f(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!("c = {c} is a non-positive integer")));
    }
    let terminates = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if !terminates && !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("series needs 0 <= x < 1, got x = {x}")));
    }
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..SERIES_MAX_TERMS {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        if term == 0.0 || term.abs() <= SERIES_TOLERANCE * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Numeric(format!(
        "hypergeometric series F({a}, {b}, {c}, {x}) did not converge in {SERIES_MAX_TERMS} terms; \
         use the quadrature path"
    )))
}

/// `int_0^t x^(alpha-1) (1-x)^(beta-1) dx` via the series.
///
/// The direct form `t^alpha / alpha * F(alpha, 1 - beta; alpha + 1; t)`
/// alternates in sign for `beta > 1` and cancels badly near `t = 1`. Euler's
/// transformation turns it into
/// `t^alpha (1-t)^beta / alpha * F(1, alpha + beta; alpha + 1; t)`,
/// whose terms are all positive.
pub fn incomplete_beta_series(t: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_shapes(alpha, beta)?;
    if !(0.0..1.0).contains(&t) {
        return Err(Error::Domain(format!("series needs 0 <= t < 1, got t = {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let f = hypergeometric_f(1.0, alpha + beta, alpha + 1.0, t)?;
    Ok((alpha * t.ln() + beta * (-t).ln_1p()).exp() / alpha * f)
}

/// The untransformed series form, kept for cross-checks.
pub fn incomplete_beta_series_direct(t: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_shapes(alpha, beta)?;
    if !(0.0..1.0).contains(&t) {
        return Err(Error::Domain(format!("series needs 0 <= t < 1, got t = {t}")));
    }
    Ok(t.powf(alpha) / alpha * hypergeometric_f(alpha, 1.0 - beta, alpha + 1.0, t)?)
}

/// `int_0^t x^(alpha-1) (1-x)^(beta-1) dx` by adaptive quadrature.
pub fn incomplete_beta_quadrature(t: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_shapes(alpha, beta)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0, 1], got {t}")));
    }
    let split = t.min(0.5);
    // Left piece. For alpha < 1 the integrand blows up at 0; x = u^(1/alpha)
    // removes the singularity.
    let left = if alpha < 1.0 {
        let p = 1.0 / alpha;
        quad::integrate(|u| p * (1.0 - u.powf(p)).powf(beta - 1.0), 0.0, split.powf(alpha))?
    } else {
        quad::integrate(|x| x.powf(alpha - 1.0) * (1.0 - x).powf(beta - 1.0), 0.0, split)?
    };
    if t <= 0.5 {
        return Ok(left);
    }
    // Right piece, mirrored: 1 - x = y, y in [1 - t, 0.5].
    let lo = 1.0 - t;
    let right = if beta < 1.0 {
        let p = 1.0 / beta;
        quad::integrate(|v| p * (1.0 - v.powf(p)).powf(alpha - 1.0), lo.powf(beta), 0.5f64.powf(beta))?
    } else {
        quad::integrate(|y| y.powf(beta - 1.0) * (1.0 - y).powf(alpha - 1.0), lo, 0.5)?
    };
    Ok(left + right)
}

/// Lower incomplete Beta integral `int_0^t x^(alpha-1) (1-x)^(beta-1) dx`.
/// Series for `t <= 0.9`, quadrature above, the complete Beta at `t = 1`.
pub fn incomplete_beta(t: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_shapes(alpha, beta)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0, 1], got {t}")));
    }
    if t == 1.0 {
        beta_fn(alpha, beta)
    } else if t <= QUADRATURE_SWITCH {
        incomplete_beta_series(t, alpha, beta)
    } else {
        incomplete_beta_quadrature(t, alpha, beta)
    }
}

/// `B(t; alpha + 1, beta) / B(t; alpha, beta)`, the normalized mean of the
/// Beta law truncated to `[0, t]`.
pub fn truncation_ratio(t: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_shapes(alpha, beta)?;
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(format!("truncation point must lie in (0, 1], got {t}")));
    }
    if t <= QUADRATURE_SWITCH {
        // The prefactors cancel to t * alpha / (alpha + 1); this avoids
        // underflow of t^alpha for tiny t.
        let num = hypergeometric_f(1.0, alpha + beta + 1.0, alpha + 2.0, t)?;
        let den = hypergeometric_f(1.0, alpha + beta, alpha + 1.0, t)?;
        Ok(t * alpha / (alpha + 1.0) * num / den)
    } else {
        Ok(incomplete_beta(t, alpha + 1.0, beta)? / incomplete_beta(t, alpha, beta)?)
    }
}
