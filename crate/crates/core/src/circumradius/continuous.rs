//! Circumradius of three points in `(R^d, ||.||_p)`.
//!
//! `p = inf` and `p = 2` have exact constructions. Other exponents minimize
//! the convex function `x -> max_i ||x - a_i||_p` with a deep-cut ellipsoid
//! method. Every cut yields a lower bound `f(x_k) - sqrt(g' P g)` on the
//! minimum (the minimizer stays inside the ellipsoid), so the returned radius
//! carries a certified suboptimality gap.

use rayon::prelude::*;

use super::{CandidatePolicy, Center, CircumError, CircumResult};
use crate::lp::{lp_distance, lp_norm_gradient};
use crate::metric::{Embedding, FiniteMetricSpace};

/// Absolute accuracy promised for finite `p` (for coordinates of order one;
/// the solver's internal target is relative to the triangle's scale).
pub const LP_TOLERANCE: f64 = 1e-8;

const GAP_TARGET: f64 = 1e-10;
const MAX_ITERATIONS: usize = 100_000;

/// Exact circumcenter in the maximum norm: per coordinate, the midpoint of
/// the extreme values. The radius is half the largest coordinate range, which
/// is half the longest `l_inf` side.
///
/// # Panics
///
/// Panics if the points have different dimensions.
pub fn linf_circumcenter(points: [&[f64]; 3]) -> CircumResult {
    let d = points[0].len();
    assert!(
        points.iter().all(|p| p.len() == d),
        "points must share a dimension"
    );
    let mut center = Vec::with_capacity(d);
    let mut range = 0.0_f64;
    for l in 0..d {
        let lo = points.iter().map(|p| p[l]).fold(f64::INFINITY, f64::min);
        let hi = points
            .iter()
            .map(|p| p[l])
            .fold(f64::NEG_INFINITY, f64::max);
        center.push(0.5 * (lo + hi));
        range = range.max(hi - lo);
    }
    CircumResult {
        radius: 0.5 * range,
        center: Some(Center::Point(center)),
        attained: true,
        evaluations: 1,
    }
}

fn check(points: [&[f64]; 3], p: f64) -> Result<usize, CircumError> {
    if p.is_nan() || p <= 1.0 {
        return Err(CircumError::InvalidP(p));
    }
    let d = points[0].len();
    for q in &points[1..] {
        if q.len() != d {
            return Err(CircumError::DimensionMismatch {
                got: q.len(),
                expected: d,
            });
        }
    }
    if d == 0 {
        return Err(CircumError::DimensionMismatch {
            got: 0,
            expected: 1,
        });
    }
    Ok(d)
}

/// Circumradius of three points in `(R^d, ||.||_p)`, `p in (1, inf]`.
pub fn lp_circumradius(points: [&[f64]; 3], p: f64) -> Result<CircumResult, CircumError> {
    let d = check(points, p)?;
    // every norm on R^1 is |.|
    if p.is_infinite() || d == 1 {
        return Ok(linf_circumcenter(points));
    }

    // Longest side first: if its midpoint already covers the third point the
    // lower bound a/2 is attained.
    let pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];
    let (i, j, k) = pairs
        .iter()
        .copied()
        .max_by(|x, y| {
            lp_distance(points[x.0], points[x.1], p).total_cmp(&lp_distance(
                points[y.0],
                points[y.1],
                p,
            ))
        })
        .unwrap();
    let longest = lp_distance(points[i], points[j], p);
    let mid: Vec<f64> = points[i]
        .iter()
        .zip(points[j])
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    if lp_distance(&mid, points[k], p) <= 0.5 * longest {
        return Ok(CircumResult {
            radius: 0.5 * longest,
            center: Some(Center::Point(mid)),
            attained: true,
            evaluations: 1,
        });
    }

    if p == 2.0 {
        return Ok(euclidean_acute(points));
    }
    ellipsoid(points, p, d)
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Circumcenter of an acute triangle in `R^d`, inside its affine plane.
fn euclidean_acute(points: [&[f64]; 3]) -> CircumResult {
    let a = points[0];
    let u: Vec<f64> = points[1].iter().zip(a).map(|(x, y)| x - y).collect();
    let v: Vec<f64> = points[2].iter().zip(a).map(|(x, y)| x - y).collect();
    let (uu, uv, vv) = (dot(&u, &u), dot(&u, &v), dot(&v, &v));
    let det = uu * vv - uv * uv;
    let s = 0.5 * (uu * vv - vv * uv) / det;
    let t = 0.5 * (vv * uu - uu * uv) / det;
    let center: Vec<f64> = (0..a.len()).map(|l| a[l] + s * u[l] + t * v[l]).collect();
    let radius = points
        .iter()
        .map(|q| lp_distance(&center, q, 2.0))
        .fold(0.0, f64::max);
    CircumResult {
        radius,
        center: Some(Center::Point(center)),
        attained: true,
        evaluations: 1,
    }
}

struct Objective<'a> {
    points: [&'a [f64]; 3],
    p: f64,
    diff: Vec<f64>,
}

impl Objective<'_> {
    /// Value and a subgradient (gradient of an active term).
    fn eval(&mut self, x: &[f64], grad: &mut [f64]) -> f64 {
        let mut best = -1.0;
        let mut arg = 0;
        for (i, a) in self.points.iter().enumerate() {
            let v = lp_distance(x, a, self.p);
            if v > best {
                best = v;
                arg = i;
            }
        }
        for (l, dl) in self.diff.iter_mut().enumerate() {
            *dl = x[l] - self.points[arg][l];
        }
        lp_norm_gradient(&self.diff, self.p, grad);
        best
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            _ => {}
        }
    }
    false
}

fn ellipsoid(points: [&[f64]; 3], p: f64, d: usize) -> Result<CircumResult, CircumError> {
    let mut obj = Objective {
        points,
        p,
        diff: vec![0.0; d],
    };
    let mut x: Vec<f64> = (0..d)
        .map(|l| (points[0][l] + points[1][l] + points[2][l]) / 3.0)
        .collect();
    let mut g = vec![0.0; d];
    let f0 = obj.eval(&x, &mut g);
    // ||y||_2 <= d^(1/2 - 1/p) ||y||_p for p >= 2, <= ||y||_p for p <= 2
    let k = (d as f64).powf((0.5 - 1.0 / p).max(0.0));
    let r0 = k * f0 * (1.0 + 1e-9) + f64::MIN_POSITIVE;
    let mut pm = vec![0.0; d * d];
    for l in 0..d {
        pm[l * d + l] = r0 * r0;
    }

    let target = GAP_TARGET * f0.max(1.0);
    let mut best = f0;
    let mut best_x = x.clone();
    let mut lower = 0.0_f64;
    let mut pg = vec![0.0; d];
    let df = d as f64;
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let fx = obj.eval(&x, &mut g);
        if fx < best || (fx == best && lex_less(&x, &best_x)) {
            best = fx;
            best_x.copy_from_slice(&x);
        }
        if g.iter().all(|&v| v == 0.0) {
            lower = best;
            break;
        }
        for r in 0..d {
            pg[r] = (0..d).map(|c| pm[r * d + c] * g[c]).sum();
        }
        let gpg = dot(&g, &pg);
        if !(gpg > 0.0 && gpg.is_finite()) {
            break;
        }
        let width = gpg.sqrt();
        lower = lower.max(fx - width);
        if best - lower <= target {
            break;
        }
        // deep cut at level `best`; clamped for numerical safety
        let alpha = ((fx - best) / width).clamp(0.0, 0.5);
        for v in pg.iter_mut() {
            *v /= width;
        }
        let step = (1.0 + df * alpha) / (df + 1.0);
        for l in 0..d {
            x[l] -= step * pg[l];
        }
        let shrink = df * df * (1.0 - alpha * alpha) / (df * df - 1.0);
        let rank1 = 2.0 * (1.0 + df * alpha) / ((df + 1.0) * (1.0 + alpha));
        for r in 0..d {
            for c in r..d {
                let v = shrink * (pm[r * d + c] - rank1 * pg[r] * pg[c]);
                pm[r * d + c] = v;
                pm[c * d + r] = v;
            }
        }
    }

    let gap = best - lower;
    if gap > target {
        return Err(CircumError::NotConverged { gap });
    }
    Ok(CircumResult {
        radius: best,
        center: Some(Center::Point(best_x)),
        attained: true,
        evaluations: iterations,
    })
}

/// Continuous circumcenters of all triples `i < j < k` of an `l_p` sample,
/// in lexicographic triple order.
pub fn triple_circumcenters(space: &FiniteMetricSpace) -> Result<Vec<Vec<f64>>, CircumError> {
    let (p, coords) = match space.embedding() {
        Some(Embedding::Lp { p, coords }) => (*p, coords),
        _ => return Err(CircumError::MissingEmbedding),
    };
    let n = coords.len();
    let triples: Vec<[usize; 3]> = (0..n)
        .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| [i, j, k])))
        .collect();
    triples
        .par_iter()
        .map(|&[i, j, k]| {
            let res = lp_circumradius([&coords[i], &coords[j], &coords[k]], p)?;
            match res.center {
                Some(Center::Point(c)) => Ok(c),
                _ => unreachable!("l_p circumradius reports a coordinate center"),
            }
        })
        .collect()
}

/// [`CandidatePolicy::Augmented`] with every triple's continuous
/// circumcenter. Each triangle's finite circumradius then equals its `l_p`
/// circumradius up to the solver tolerance.
pub fn circumcenter_candidates(space: &FiniteMetricSpace) -> Result<CandidatePolicy, CircumError> {
    Ok(CandidatePolicy::Augmented(triple_circumcenters(space)?))
}
