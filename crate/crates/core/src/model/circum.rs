//! Circumradius of a comparison triangle: the radius of the smallest model
//! ball containing its three vertices.

use super::{
    comparison_triangle, cross, minkowski, model_distance, norm3, ComparisonTriangle, Kappa,
    ModelError, ModelPoint,
};
use crate::circumradius::{Center, CircumResult};
use crate::metric::SideLengths;

/// Triangles whose stable Heron area falls below this fraction of `a^2` are
/// treated as collinear.
const DEGENERATE_AREA: f64 = 1e-14;

/// Planar minimum enclosing circle radius of a triangle with these sides.
///
/// Right, obtuse and degenerate triangles (`a^2 >= b^2 + c^2`) have radius
/// `a/2`, centered at the midpoint of the longest side. Acute triangles have
/// the classical circumradius `abc / (4 area)`. The center witness is given in
/// the canonical placement of [`comparison_triangle`].
pub fn euclidean_circumradius(sides: &SideLengths) -> Result<CircumResult, ModelError> {
    let tri = comparison_triangle(sides, Kappa::ZERO)?;
    let (a, b, c) = (sides.a, sides.b, sides.c);
    let v = |i: usize| match tri.vertices[i] {
        ModelPoint::Euclidean(p) => p,
        _ => unreachable!("flat placement"),
    };
    let obtuse = a * a >= b * b + c * c;
    let area = 0.25
        * ((a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c)))
            .max(0.0)
            .sqrt();
    if obtuse || area < DEGENERATE_AREA * a * a {
        let (p, q) = (v(1), v(2));
        let center = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
        return Ok(CircumResult {
            radius: 0.5 * a,
            center: Some(Center::Model(ModelPoint::Euclidean(center))),
            attained: true,
            evaluations: 1,
        });
    }
    let radius = a * b * c / (4.0 * area);
    let p2 = v(2);
    // v0 = origin, v1 = (c, 0)
    let center = [0.5 * c, (b * b - c * p2[0]) / (2.0 * p2[1])];
    Ok(CircumResult {
        radius,
        center: Some(Center::Model(ModelPoint::Euclidean(center))),
        attained: true,
        evaluations: 1,
    })
}

/// Minimum enclosing ball radius of the comparison triangle in `M_kappa`.
///
/// For `kappa = 0` this is [`euclidean_circumradius`]. Otherwise the minimum
/// is taken over a finite candidate set that always contains the true
/// center: the point(s) equidistant from the three vertices (both antipodal
/// solutions on the sphere, the timelike solution on the hyperboloid) and the
/// three side midpoints.
pub fn model_circumradius(sides: &SideLengths, kappa: Kappa) -> Result<CircumResult, ModelError> {
    if kappa.value() == 0.0 {
        return euclidean_circumradius(sides);
    }
    let tri = comparison_triangle(sides, kappa)?;
    let candidates = candidates(&tri);
    let mut best: Option<(f64, ModelPoint)> = None;
    for cand in &candidates {
        let rho = tri
            .vertices
            .iter()
            .map(|v| model_distance(cand, v, kappa).expect("same chart"))
            .fold(0.0, f64::max);
        if best.is_none_or(|(r, _)| rho < r) {
            best = Some((rho, *cand));
        }
    }
    let (radius, center) = best.expect("midpoints are always candidates");
    Ok(CircumResult {
        radius,
        center: Some(Center::Model(center)),
        attained: true,
        evaluations: candidates.len(),
    })
}

fn raw(p: &ModelPoint) -> [f64; 3] {
    match p {
        ModelPoint::Sphere(c) | ModelPoint::Hyperboloid(c) => *c,
        ModelPoint::Euclidean(_) => unreachable!("curved charts only"),
    }
}

fn candidates(tri: &ComparisonTriangle) -> Vec<ModelPoint> {
    let k = tri.kappa.value();
    let v = [
        raw(&tri.vertices[0]),
        raw(&tri.vertices[1]),
        raw(&tri.vertices[2]),
    ];
    let sub = |p: &[f64; 3], q: &[f64; 3]| [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
    let add = |p: &[f64; 3], q: &[f64; 3]| [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
    let scale = |p: &[f64; 3], s: f64| [p[0] * s, p[1] * s, p[2] * s];
    let u = sub(&v[1], &v[0]);
    let w = sub(&v[2], &v[0]);
    let mut out = Vec::with_capacity(5);
    if k > 0.0 {
        let r = 1.0 / k.sqrt();
        let nrm = cross(&u, &w);
        let len = norm3(&nrm);
        if len > 0.0 && len.is_finite() {
            let c = scale(&nrm, r / len);
            out.push(ModelPoint::Sphere(c));
            out.push(ModelPoint::Sphere(scale(&c, -1.0)));
        }
        for (i, j) in [(1, 2), (0, 2), (0, 1)] {
            let m = add(&v[i], &v[j]);
            let len = norm3(&m);
            if len > 0.0 {
                out.push(ModelPoint::Sphere(scale(&m, r / len)));
            }
        }
    } else {
        let r = 1.0 / (-k).sqrt();
        let flip = |p: &[f64; 3]| [p[0], p[1], -p[2]];
        let nrm = cross(&flip(&u), &flip(&w));
        let q = minkowski(&nrm, &nrm);
        if q < 0.0 && q.is_finite() {
            let s = if nrm[2] > 0.0 { 1.0 } else { -1.0 };
            out.push(ModelPoint::Hyperboloid(scale(&nrm, s * r / (-q).sqrt())));
        }
        for (i, j) in [(1, 2), (0, 2), (0, 1)] {
            let m = add(&v[i], &v[j]);
            let q = minkowski(&m, &m);
            out.push(ModelPoint::Hyperboloid(scale(&m, r / (-q).sqrt())));
        }
    }
    out
}
