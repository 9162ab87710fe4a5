//! Gromov four-point hyperbolicity.
//!
//! A finite space has no geodesic triangles to be thin, so `delta` is taken
//! from the four-point condition
//! `(x|y)_w >= min((x|z)_w, (z|y)_w) - delta`. On geodesic spaces this agrees
//! with the thin-triangle constant up to a bounded factor.

use rayon::prelude::*;
use thiserror::Error;

use crate::certifier::{certify, CertifyError, CurvatureQuery, TriangleDefect, TriplePolicy};
use crate::metric::FiniteMetricSpace;
use crate::model::Kappa;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperbolicityError {
    #[error("index {index} out of range for a space of {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("discretization allowance must be finite and nonnegative, got {0}")]
    InvalidAllowance(f64),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// `(x|y)_w = (d(x,w) + d(y,w) - d(x,y)) / 2`.
pub fn gromov_product(
    space: &FiniteMetricSpace,
    x: usize,
    y: usize,
    w: usize,
) -> Result<f64, HyperbolicityError> {
    let n = space.n();
    if let Some(&index) = [x, y, w].iter().find(|&&i| i >= n) {
        return Err(HyperbolicityError::IndexOutOfRange { index, n });
    }
    Ok(product(space, x, y, w))
}

#[inline]
fn product(space: &FiniteMetricSpace, x: usize, y: usize, w: usize) -> f64 {
    0.5 * (space.d(x, w) + space.d(y, w) - space.d(x, y))
}

/// The four-point expression `min((x|z)_w, (z|y)_w) - (x|y)_w`.
pub fn four_point(space: &FiniteMetricSpace, w: usize, x: usize, y: usize, z: usize) -> f64 {
    product(space, x, z, w).min(product(space, z, y, w)) - product(space, x, y, w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaResult {
    pub delta: f64,
    /// Lexicographically first `[w, x, y, z]` attaining `delta`; `None` for
    /// the empty space.
    pub witness: Option<[usize; 4]>,
}

type Best = (f64, [usize; 4]);

fn better(a: Best, b: Best) -> Best {
    if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
        a
    } else {
        b
    }
}

/// Exhaustive four-point `delta`: the maximum of [`four_point`] over ordered
/// quadruples. The quadruple `(w, w, w, w)` contributes 0, so `delta >= 0`.
///
/// Each base point `w` is scanned independently in parallel with its Gromov
/// products tabulated. The expression is symmetric in `x, y`, so only
/// `y >= x` is visited, and `z` is skipped when `(x|z)_w - min_y (x|y)_w`
/// cannot reach the incumbent.
pub fn delta_four_point(space: &FiniteMetricSpace) -> DeltaResult {
    let n = space.n();
    if n == 0 {
        return DeltaResult {
            delta: 0.0,
            witness: None,
        };
    }
    let (delta, witness) = (0..n)
        .into_par_iter()
        .map(|w| {
            let mut p = vec![0.0; n * n];
            for x in 0..n {
                for y in 0..n {
                    p[x * n + y] = product(space, x, y, w);
                }
            }
            let mut best: Best = (f64::NEG_INFINITY, [usize::MAX; 4]);
            for x in 0..n {
                let px = &p[x * n..(x + 1) * n];
                let floor = px[x..].iter().copied().fold(f64::INFINITY, f64::min);
                for z in 0..n {
                    let pxz = px[z];
                    if pxz - floor < best.0 {
                        continue;
                    }
                    let pz = &p[z * n..(z + 1) * n];
                    for y in x..n {
                        let v = pxz.min(pz[y]) - px[y];
                        if v >= best.0 {
                            best = better((v, [w, x, y, z]), best);
                        }
                    }
                }
            }
            best
        })
        .reduce(|| (f64::NEG_INFINITY, [usize::MAX; 4]), better);
    DeltaResult {
        delta,
        witness: Some(witness),
    }
}

/// Upper defect against the flat model versus the four-point `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedBound {
    pub epsilon_star_upper: f64,
    pub delta: DeltaResult,
    pub two_delta: f64,
    /// Discretization allowance.
    pub h: f64,
    /// `2 delta + h - epsilon_star_upper`; nonnegative when the relaxed bound
    /// holds.
    pub slack: f64,
    pub worst: Option<TriangleDefect>,
}

/// Compares `epsilon*` for `Curv <= 0` with `2 delta + h`.
///
/// Pair-triangles `(i, i, j)` are included, so missing midpoints count
/// towards `epsilon*`.
///
/// On a geodesic `delta`-hyperbolic space every defect is at most `2 delta`.
/// A vertex set only approximates geodesic midpoints, which `h` (typically
/// the longest edge) accounts for. The result is a diagnostic: a negative
/// slack is reported, not raised.
pub fn relaxed_npc_bound_check(
    space: &FiniteMetricSpace,
    h: f64,
) -> Result<RelaxedBound, HyperbolicityError> {
    if !(h.is_finite() && h >= 0.0) {
        return Err(HyperbolicityError::InvalidAllowance(h));
    }
    let query =
        CurvatureQuery::upper(Kappa::ZERO).with_triple_policy(TriplePolicy::WithDegeneratePairs);
    let verdict = certify(space, &query)?;
    let delta = delta_four_point(space);
    let two_delta = 2.0 * delta.delta;
    Ok(RelaxedBound {
        epsilon_star_upper: verdict.epsilon_star_upper,
        delta,
        two_delta,
        h,
        slack: two_delta + h - verdict.epsilon_star_upper,
        worst: verdict.worst_upper,
    })
}
