//! Model planes `M_kappa` and comparison geometry.
//!
//! Points of the model planes live in an embedding chart:
//!
//! - `kappa = 0`: the Euclidean plane, coordinates `(x, y)`;
//! - `kappa > 0`: the sphere `|p|^2 = 1/kappa` in `R^3`;
//! - `kappa < 0`: the upper sheet of the hyperboloid
//!   `x^2 + y^2 - t^2 = 1/kappa` in Minkowski space `R^{2,1}`.
//!
//! Distances are computed with cancellation-free formulas (`atan2` of cross
//! and dot products on the sphere, `asinh` of the Minkowski chord length on
//! the hyperboloid) so that short sides keep full relative precision.

mod circum;

use std::f64::consts::PI;

use thiserror::Error;

pub use circum::{euclidean_circumradius, model_circumradius};

use crate::metric::SideLengths;

/// Slack on the `kappa > 0` perimeter bound and the model diameter.
pub const MODEL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("curvature must be finite, got {0}")]
    InvalidKappa(f64),
    #[error("model points are not in the chart of kappa = {0}")]
    ChartMismatch(f64),
    #[error("side lengths ({0}, {1}, {2}) violate the triangle inequality")]
    TriangleInequalityViolation(f64, f64, f64),
    #[error("perimeter {perimeter} is too large for the model plane (limit {limit})")]
    TooLargeForModel { perimeter: f64, limit: f64 },
}

/// Curvature of a model plane.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Kappa(f64);

impl Kappa {
    pub const ZERO: Kappa = Kappa(0.0);

    pub fn new(kappa: f64) -> Result<Self, ModelError> {
        if kappa.is_finite() {
            Ok(Kappa(kappa))
        } else {
            Err(ModelError::InvalidKappa(kappa))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `pi / sqrt(kappa)` for `kappa > 0`, infinite otherwise.
    pub fn diameter(self) -> f64 {
        if self.0 > 0.0 {
            PI / self.0.sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// Perimeter bound `2 pi / sqrt(kappa)` beyond which triangles are
    /// "large" and have no comparison triangle.
    pub fn perimeter_limit(self) -> f64 {
        2.0 * self.diameter()
    }

    /// Whether a triangle with these sides has a comparison triangle, using
    /// `margin` as the slack below the perimeter bound.
    pub fn admits(self, sides: &SideLengths, margin: f64) -> bool {
        self.0 <= 0.0 || sides.perimeter() < self.perimeter_limit() - margin
    }

    fn check(self, sides: &SideLengths) -> Result<(), ModelError> {
        if !sides.is_valid() {
            return Err(ModelError::TriangleInequalityViolation(
                sides.a, sides.b, sides.c,
            ));
        }
        if !self.admits(sides, MODEL_TOLERANCE) {
            return Err(ModelError::TooLargeForModel {
                perimeter: sides.perimeter(),
                limit: self.perimeter_limit(),
            });
        }
        Ok(())
    }
}

/// A point of a model plane in its embedding chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelPoint {
    Euclidean([f64; 2]),
    Sphere([f64; 3]),
    Hyperboloid([f64; 3]),
}

impl ModelPoint {
    pub fn coords(&self) -> &[f64] {
        match self {
            ModelPoint::Euclidean(c) => c,
            ModelPoint::Sphere(c) | ModelPoint::Hyperboloid(c) => c,
        }
    }

    /// Whether the point lies in the chart of `kappa` (to `1e-12` relative).
    pub fn is_on_chart(&self, kappa: Kappa) -> bool {
        let k = kappa.value();
        match self {
            ModelPoint::Euclidean(_) => k == 0.0,
            ModelPoint::Sphere(c) => {
                k > 0.0 && ((c[0] * c[0] + c[1] * c[1] + c[2] * c[2]) * k - 1.0).abs() <= 1e-12
            }
            ModelPoint::Hyperboloid(c) => {
                k < 0.0
                    && c[2] > 0.0
                    && (minkowski(c, c) * k - 1.0).abs() <= 1e-12 * (1.0 + c[2] * c[2] * -k)
            }
        }
    }
}

#[inline]
pub(crate) fn minkowski(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] - u[2] * v[2]
}

#[inline]
pub(crate) fn cross(u: &[f64; 3], v: &[f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

#[inline]
fn norm3(u: &[f64; 3]) -> f64 {
    (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt()
}

/// Great-circle distance on the sphere of curvature `kappa > 0`.
pub fn sphere_distance(kappa: f64, u: &[f64; 3], v: &[f64; 3]) -> f64 {
    let dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    norm3(&cross(u, v)).atan2(dot) / kappa.sqrt()
}

/// Distance on the hyperboloid of curvature `kappa < 0`.
pub fn hyperboloid_distance(kappa: f64, u: &[f64; 3], v: &[f64; 3]) -> f64 {
    let r = 1.0 / (-kappa).sqrt();
    let q = -minkowski(u, v) / (r * r);
    if q > 2.0 {
        return r * q.acosh();
    }
    let d = [u[0] - v[0], u[1] - v[1], u[2] - v[2]];
    let chord = minkowski(&d, &d).max(0.0).sqrt();
    2.0 * r * (chord / (2.0 * r)).asinh()
}

/// Distance in the model plane of curvature `kappa`.
pub fn model_distance(p: &ModelPoint, q: &ModelPoint, kappa: Kappa) -> Result<f64, ModelError> {
    let k = kappa.value();
    match (p, q) {
        (ModelPoint::Euclidean(a), ModelPoint::Euclidean(b)) if k == 0.0 => {
            Ok((a[0] - b[0]).hypot(a[1] - b[1]))
        }
        (ModelPoint::Sphere(a), ModelPoint::Sphere(b)) if k > 0.0 => Ok(sphere_distance(k, a, b)),
        (ModelPoint::Hyperboloid(a), ModelPoint::Hyperboloid(b)) if k < 0.0 => {
            Ok(hyperboloid_distance(k, a, b))
        }
        _ => Err(ModelError::ChartMismatch(k)),
    }
}

/// Point at distance `len` from the chart origin in direction `phi`.
fn polar_point(kappa: f64, len: f64, phi: f64) -> ModelPoint {
    let (s, c) = phi.sin_cos();
    if kappa == 0.0 {
        ModelPoint::Euclidean([len * c, len * s])
    } else if kappa > 0.0 {
        let r = 1.0 / kappa.sqrt();
        let t = len / r;
        ModelPoint::Sphere([r * t.sin() * c, r * t.sin() * s, r * t.cos()])
    } else {
        let r = 1.0 / (-kappa).sqrt();
        let t = len / r;
        ModelPoint::Hyperboloid([r * t.sinh() * c, r * t.sinh() * s, r * t.cosh()])
    }
}

/// Angle at the vertex between sides `b` and `c`, opposite side `a`, by the
/// half-angle formula of the model plane.
fn vertex_angle(kappa: f64, sides: &SideLengths) -> f64 {
    let scale = if kappa == 0.0 {
        1.0
    } else {
        kappa.abs().sqrt()
    };
    let (a, b, c) = (sides.a * scale, sides.b * scale, sides.c * scale);
    let s = 0.5 * (a + b + c);
    let f: fn(f64) -> f64 = if kappa == 0.0 {
        |x| x
    } else if kappa > 0.0 {
        f64::sin
    } else {
        f64::sinh
    };
    let num = (f(s - b).max(0.0) * f(s - c).max(0.0)).sqrt();
    let den = (f(s).max(0.0) * f(s - a).max(0.0)).sqrt();
    2.0 * num.atan2(den)
}

/// A triangle in the model plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonTriangle {
    pub kappa: Kappa,
    /// `d(v1, v2) = a`, `d(v0, v2) = b`, `d(v0, v1) = c` for sorted sides
    /// `a >= b >= c`.
    pub vertices: [ModelPoint; 3],
}

impl ComparisonTriangle {
    /// Pairwise model distances `[d(v1,v2), d(v0,v2), d(v0,v1)]`.
    pub fn side_lengths(&self) -> [f64; 3] {
        let d = |i: usize, j: usize| {
            model_distance(&self.vertices[i], &self.vertices[j], self.kappa)
                .expect("vertices share the triangle's chart")
        };
        [d(1, 2), d(0, 2), d(0, 1)]
    }
}

/// Places the comparison triangle of `sides` in `M_kappa`.
///
/// The vertex opposite the longest side sits at the chart origin and the
/// vertex opposite the shortest side lies on the positive x-axis, so the
/// placement is deterministic.
pub fn comparison_triangle(
    sides: &SideLengths,
    kappa: Kappa,
) -> Result<ComparisonTriangle, ModelError> {
    kappa.check(sides)?;
    Ok(place(sides, kappa))
}

fn place(sides: &SideLengths, kappa: Kappa) -> ComparisonTriangle {
    let k = kappa.value();
    let gamma = vertex_angle(k, sides);
    ComparisonTriangle {
        kappa,
        vertices: [
            polar_point(k, 0.0, 0.0),
            polar_point(k, sides.c, 0.0),
            polar_point(k, sides.b, gamma),
        ],
    }
}
