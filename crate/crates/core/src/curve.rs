//! Distance-comparison curves in the model planes.
//!
//! For unit tangent vectors `X`, `Y` at angle `theta`, the ratio
//! `g(t) = d(exp(tX), exp(tY)) / (t |X - Y|)` equals one in the flat plane,
//! stays below one on spheres and above one on hyperbolic planes. It is the
//! infinitesimal signature of the sign of sectional curvature.

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

use crate::model::Kappa;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("angle {0} is outside (0, pi)")]
    Angle(f64),
    #[error("parameter t = {t} is outside the chart (0, {limit})")]
    Domain { t: f64, limit: f64 },
}

/// Largest `t` for which the curve is defined in `M_kappa`.
pub fn curve_domain(kappa: Kappa) -> f64 {
    let k = kappa.value();
    if k > 0.0 {
        FRAC_PI_2 / k.sqrt()
    } else {
        f64::INFINITY
    }
}

/// Evaluates `g(t)` at every point of `t_grid`.
///
/// Uses the half-angle forms `sin(sqrt(k) d / 2) = sin(sqrt(k) t) sin(theta / 2)`
/// and its hyperbolic analogue, which avoid the cancellation of the law of
/// cosines at small `t`.
pub fn distance_comparison_curve(
    kappa: Kappa,
    theta: f64,
    t_grid: &[f64],
) -> Result<Vec<f64>, CurveError> {
    if !(theta > 0.0 && theta < PI) {
        return Err(CurveError::Angle(theta));
    }
    let limit = curve_domain(kappa);
    let k = kappa.value();
    let s = (0.5 * theta).sin();
    t_grid
        .iter()
        .map(|&t| {
            if !(t > 0.0 && t < limit) {
                return Err(CurveError::Domain { t, limit });
            }
            let d = if k > 0.0 {
                let r = k.sqrt();
                2.0 / r * ((r * t).sin() * s).asin()
            } else if k < 0.0 {
                let r = (-k).sqrt();
                2.0 / r * ((r * t).sinh() * s).asinh()
            } else {
                return Ok(1.0);
            };
            Ok(d / (2.0 * t * s))
        })
        .collect()
}
