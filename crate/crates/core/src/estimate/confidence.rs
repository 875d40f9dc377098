//! Confidence radii for estimated rates.

use super::visits::EstimatedRates;
use crate::error::{EstimateError, Result};

/// Standard normal quantile by Acklam's rational approximation
/// (relative error below 1.2e-9 on (0, 1)).
pub fn normal_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.383577518672690e2,
        -3.066479806614716e1,
        2.506628277459239e0,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838e0,
        -2.549732539343734e0,
        4.374664141464968e0,
        2.938163982698783e0,
    ];
    const D: [f64; 4] = [7.784695709041462e-3, 3.224671290700398e-1, 2.445134137142996e0, 3.754408661907416e0];
    const P_LOW: f64 = 0.02425;

    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p > 1.0 - P_LOW {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// `z_alpha` with `P(-z_alpha <= Z <= z_alpha) = 1 - alpha`.
pub fn z_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(EstimateError::AlphaOutOfRange(alpha).into());
    }
    Ok(normal_quantile(1.0 - alpha / 2.0))
}

/// `max z_alpha sigma_z(x) / sqrt(|G_x|)` over every estimated `(z, x)`.
pub fn confidence_epsilon(est: &EstimatedRates, alpha: f64) -> Result<f64> {
    let z = z_alpha(alpha)?;
    if est.rates.is_empty() {
        return Err(EstimateError::EmptyStateSet.into());
    }
    let mut eps = 0.0f64;
    for (tz, x, _) in est.rates.iter() {
        let missing = || EstimateError::MissingVariance { z: tz.clone(), state: x.clone() };
        let sigma = est.sigma(tz, x).ok_or_else(missing)?;
        let visits = *est.visits.get(x).ok_or_else(missing)?;
        if visits == 0 || !sigma.is_finite() {
            return Err(missing().into());
        }
        eps = eps.max(z * sigma / (visits as f64).sqrt());
    }
    Ok(eps)
}
