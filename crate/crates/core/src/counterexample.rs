//! Triangles in `(R^2, ||.||_p)` whose circumradius exceeds that of their
//! flat comparison triangle.
//!
//! For `p > 2` start from `A = (0, 1)`, `B = (-1, 0)`, `C = (1, 0)` and lift
//! `A` to `A' = (0, y)` so that `|A'B|_p = |A'C|_p = sqrt(2)`. For `1 < p < 2`
//! start from `A = (r, r)`, `B = (-r, r)`, `C = (r, -r)` on the unit sphere,
//! `r = 2^(-1/p)`, and push `A` out to `A' = (r', r')` with the same side
//! condition. Either way `|BC|_p = 2`, so the comparison triangle has sides
//! `(sqrt 2, sqrt 2, 2)`, is right-angled, and has circumradius 1, while the
//! `l_p` circumradius of `(A', B, C)` is strictly larger.

use thiserror::Error;

use crate::circumradius::{lp_circumradius, Center, CircumError};
use crate::lp::lp_distance;
use crate::metric::{from_lp_points, FiniteMetricSpace, MetricError, SideLengths};
use crate::model::{euclidean_circumradius, ModelError};

/// Margin by which a claimed strict inequality must be reproduced.
pub const STRICT_MARGIN: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CounterexampleError {
    #[error("exponent p = {0} is not supported (need p > 1 or p = inf)")]
    InvalidP(f64),
    #[error(transparent)]
    Circum(#[from] CircumError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// The base triangle `(A, B, C)` and the lifted apex `A'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpTriangle {
    pub p: f64,
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub c: [f64; 2],
    pub a_prime: [f64; 2],
}

/// Root of `(s + r)^p + (s - r)^p = 2^(p/2)` in `(r, 10)` by bisection.
fn lifted_diagonal(p: f64, r: f64) -> f64 {
    let target = 2f64.powf(0.5 * p);
    let f = |s: f64| (s + r).powf(p) + (s - r).powf(p) - target;
    let (mut lo, mut hi) = (r, 10.0);
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

pub fn lp_triangle(p: f64) -> Result<LpTriangle, CounterexampleError> {
    if p.is_nan() || p <= 1.0 {
        return Err(CounterexampleError::InvalidP(p));
    }
    Ok(if p < 2.0 {
        let r = 2f64.powf(-1.0 / p);
        let s = lifted_diagonal(p, r);
        LpTriangle {
            p,
            a: [r, r],
            b: [-r, r],
            c: [r, -r],
            a_prime: [s, s],
        }
    } else {
        let lift = 2f64.powf(0.5 * p);
        let y = if lift.is_finite() {
            (lift - 1.0).powf(1.0 / p)
        } else {
            // the same root, factored to stay finite for huge p
            std::f64::consts::SQRT_2 * (1.0 - 2f64.powf(-0.5 * p)).powf(1.0 / p)
        };
        LpTriangle {
            p,
            a: [0.0, 1.0],
            b: [-1.0, 0.0],
            c: [1.0, 0.0],
            a_prime: [0.0, y],
        }
    })
}

/// Comparison of `(A', B, C)` with its flat comparison triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub triangle: LpTriangle,
    /// `|A'B|_p`, `|A'C|_p`, `|BC|_p`.
    pub sides: [f64; 3],
    pub r_space: f64,
    pub center: Vec<f64>,
    pub r_model: f64,
    pub defect: f64,
    /// The upper bound `Curv <= 0` is expected to fail (`p` not 2 or inf).
    pub violation_expected: bool,
    /// The expected behavior was observed: a defect of at least
    /// [`STRICT_MARGIN`] when a violation is expected, none otherwise.
    pub reproduced: bool,
}

pub fn evaluate(p: f64) -> Result<LpOutcome, CounterexampleError> {
    let t = lp_triangle(p)?;
    let pts: [&[f64]; 3] = [&t.a_prime, &t.b, &t.c];
    let res = lp_circumradius(pts, p)?;
    let center = match res.center {
        Some(Center::Point(c)) => c,
        _ => unreachable!("l_p circumradius reports a coordinate center"),
    };
    let sides = [
        lp_distance(&t.a_prime, &t.b, p),
        lp_distance(&t.a_prime, &t.c, p),
        lp_distance(&t.b, &t.c, p),
    ];
    let r_model = euclidean_circumradius(&SideLengths::new(sides[0], sides[1], sides[2]))?.radius;
    let defect = res.radius - r_model;
    let violation_expected = p.is_finite() && p != 2.0;
    let reproduced = if violation_expected {
        defect >= STRICT_MARGIN
    } else {
        defect <= crate::certifier::DEFECT_TOLERANCE
    };
    Ok(LpOutcome {
        triangle: t,
        sides,
        r_space: res.radius,
        center,
        r_model,
        defect,
        violation_expected,
        reproduced,
    })
}

/// Five labeled points `A', B, C, A, O` of `(R^2, ||.||_p)`: the lifted
/// triangle, the unlifted apex and the origin. With every triple's continuous
/// circumcenter as a candidate (see [`circumcenter_candidates`]) the only
/// triangle with a positive upper defect is `(A', B, C)`.
///
/// [`circumcenter_candidates`]: crate::circumradius::circumcenter_candidates
pub fn fixture_space(p: f64) -> Result<FiniteMetricSpace, CounterexampleError> {
    let t = lp_triangle(p)?;
    let coords = vec![
        t.a_prime.to_vec(),
        t.b.to_vec(),
        t.c.to_vec(),
        t.a.to_vec(),
        vec![0.0, 0.0],
    ];
    let labels = ["A'", "B", "C", "A", "O"].map(String::from).to_vec();
    Ok(from_lp_points(coords, p)?.with_labels(labels)?)
}
