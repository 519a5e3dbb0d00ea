//! Leading-order classical potential `V(beta) = N [beta^2 + alpha(-2 beta^2 + beta^4)]`.
//!
//! The O(1/N) remainder is dropped; every value here is leading order.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCurve {
    pub alpha: f64,
    pub beta_values: Vec<f64>,
    pub v_values: Vec<f64>,
    pub beta_min: f64,
    pub v_min: f64,
}

pub fn potential(alpha: f64, n_bosons: u32, beta: f64) -> Result<f64> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::Domain(format!(
            "deformation beta = {beta} must be >= 0"
        )));
    }
    let b2 = beta * beta;
    Ok(n_bosons as f64 * (b2 + alpha * (-2.0 * b2 + b2 * b2)))
}

pub fn beta_equilibrium(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha = {alpha} outside [0, 1]")));
    }
    if alpha <= 0.5 {
        Ok(0.0)
    } else {
        Ok(((2.0 * alpha - 1.0) / (2.0 * alpha)).sqrt())
    }
}

/// `d^2 V / d beta^2` at the spherical point.
pub fn curvature_at_origin(alpha: f64, n_bosons: u32) -> f64 {
    2.0 * n_bosons as f64 * (1.0 - 2.0 * alpha)
}

/// Locates the sign change of the spherical curvature on [0, 1] by bisection.
pub fn critical_alpha(n_bosons: u32) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > f64::EPSILON {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if curvature_at_origin(mid, n_bosons) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Samples `V` on `steps` evenly spaced points of `[0, beta_max]`.
pub fn potential_curve(
    alpha: f64,
    n_bosons: u32,
    beta_max: f64,
    steps: usize,
) -> Result<PotentialCurve> {
    if steps < 2 {
        return Err(Error::Domain(
            "potential curve needs at least 2 points".into(),
        ));
    }
    if beta_max.is_nan() || beta_max <= 0.0 {
        return Err(Error::Domain(format!("beta_max = {beta_max} must be > 0")));
    }
    let beta_min = beta_equilibrium(alpha)?;
    let beta_values: Vec<f64> = (0..steps)
        .map(|i| beta_max * i as f64 / (steps - 1) as f64)
        .collect();
    let v_values = beta_values
        .iter()
        .map(|&b| potential(alpha, n_bosons, b))
        .collect::<Result<_>>()?;
    Ok(PotentialCurve {
        alpha,
        beta_values,
        v_values,
        beta_min,
        v_min: potential(alpha, n_bosons, beta_min)?,
    })
}
