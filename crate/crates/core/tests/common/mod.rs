//! Independent brute-force references shared by the integration tests.
//!
//! Nothing here prunes, sorts candidates or runs in parallel. The only
//! library code reused is the model circumradius for `kappa != 0`.

#![allow(dead_code)]

use metric_curv::metric::FiniteMetricSpace;
use metric_curv::model::{model_circumradius, Kappa, MODEL_TOLERANCE};
use metric_curv::{from_graph, SideLengths};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Flat circumradius from three side lengths: half the longest side for
/// non-acute triangles, `abc / 4K` otherwise.
pub fn flat_circumradius(x: f64, y: f64, z: f64) -> f64 {
    let mut s = [x, y, z];
    s.sort_by(|p, q| q.total_cmp(p));
    let [a, b, c] = s;
    if a * a >= b * b + c * c {
        return 0.5 * a;
    }
    // Kahan's stable Heron formula
    let k = 0.25 * ((a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))).sqrt();
    a * b * c / (4.0 * k)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteDefect {
    pub triple: [usize; 3],
    pub r_space: f64,
    pub r_model: f64,
    pub defect: f64,
}

pub fn brute_r_space(s: &FiniteMetricSpace, t: [usize; 3]) -> f64 {
    (0..s.n())
        .map(|c| s.d(c, t[0]).max(s.d(c, t[1])).max(s.d(c, t[2])))
        .fold(f64::INFINITY, f64::min)
}

/// Every distinct triangle `i < j < k` with all sides `>= beta`; `None`
/// entries are large triangles skipped for `kappa > 0`.
pub fn brute_defects(s: &FiniteMetricSpace, kappa: f64, beta: f64) -> Vec<Option<BruteDefect>> {
    let n = s.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (x, y, z) = (s.d(i, j), s.d(j, k), s.d(i, k));
                if x < beta || y < beta || z < beta {
                    continue;
                }
                let r_model = if kappa == 0.0 {
                    flat_circumradius(x, y, z)
                } else {
                    if kappa > 0.0
                        && x + y + z >= 2.0 * std::f64::consts::PI / kappa.sqrt() - MODEL_TOLERANCE
                    {
                        out.push(None);
                        continue;
                    }
                    let kk = Kappa::new(kappa).unwrap();
                    model_circumradius(&SideLengths::new(x, y, z), kk)
                        .unwrap()
                        .radius
                };
                let r_space = brute_r_space(s, [i, j, k]);
                out.push(Some(BruteDefect {
                    triple: [i, j, k],
                    r_space,
                    r_model,
                    defect: r_space - r_model,
                }));
            }
        }
    }
    out
}

/// Largest (or smallest) defect, first in lexicographic order among ties.
pub fn brute_extreme(defects: &[Option<BruteDefect>], largest: bool) -> Option<BruteDefect> {
    let mut best: Option<BruteDefect> = None;
    for d in defects.iter().flatten() {
        let better = match best {
            None => true,
            Some(b) => {
                if largest {
                    d.defect > b.defect
                } else {
                    d.defect < b.defect
                }
            }
        };
        if better {
            best = Some(*d);
        }
    }
    best
}

fn gp(s: &FiniteMetricSpace, x: usize, y: usize, w: usize) -> f64 {
    0.5 * (s.d(x, w) + s.d(y, w) - s.d(x, y))
}

/// Exhaustive four-point `delta` over all ordered quadruples, first
/// maximizer in lexicographic order.
pub fn brute_delta(s: &FiniteMetricSpace) -> (f64, [usize; 4]) {
    let n = s.n();
    let mut best = (f64::NEG_INFINITY, [0; 4]);
    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let v = gp(s, x, z, w).min(gp(s, z, y, w)) - gp(s, x, y, w);
                    if v > best.0 {
                        best = (v, [w, x, y, z]);
                    }
                }
            }
        }
    }
    best
}

/// Shortest-path metric of a complete graph with uniform random weights in
/// `[1, 3)`.
pub fn random_metric(n: usize, seed: u64) -> FiniteMetricSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, rng.random_range(1.0..3.0)));
        }
    }
    from_graph(&edges).unwrap()
}

/// Random connected weighted graph: a random spanning tree plus extra edges.
/// Returns the edges, so the caller knows the longest edge.
pub fn random_connected_graph(n: usize, seed: u64) -> Vec<(usize, usize, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u, v, rng.random_range(0.5..2.0)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < 0.15 {
                edges.push((u, v, rng.random_range(0.5..2.0)));
            }
        }
    }
    edges
}

pub fn cycle_edges(n: usize) -> Vec<(usize, usize, f64)> {
    (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect()
}

pub fn grid_edges(w: usize, h: usize) -> Vec<(usize, usize, f64)> {
    let mut e = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let id = y * w + x;
            if x + 1 < w {
                e.push((id, id + 1, 1.0));
            }
            if y + 1 < h {
                e.push((id, id + w, 1.0));
            }
        }
    }
    e
}

fn lp2(u: [f64; 2], p: f64) -> f64 {
    let (x, y) = (u[0].abs(), u[1].abs());
    if p == 2.0 {
        x.hypot(y)
    } else if p.is_infinite() {
        x.max(y)
    } else {
        (x.powf(p) + y.powf(p)).powf(1.0 / p)
    }
}

/// Bracket `[lower, upper]` of width at most `tol` on
/// `min_x max_i ||x - v_i||_p` over the plane.
///
/// Grid refinement with exact cell bounds: a cell's lower bound is the
/// largest `l_p` distance from a vertex to the cell (coordinatewise clamping
/// gives the nearest point), its center gives an upper bound. Cells whose
/// lower bound exceeds the best upper bound are dropped, the rest split in
/// four. The minimizer lies in the vertices' bounding box, so the starting
/// grid covers it.
pub fn minmax_bracket(vertices: &[[f64; 2]], p: f64, tol: f64) -> (f64, f64) {
    let f = |x: [f64; 2]| {
        vertices
            .iter()
            .map(|v| lp2([x[0] - v[0], x[1] - v[1]], p))
            .fold(0.0, f64::max)
    };
    let lb = |lo: [f64; 2], size: [f64; 2]| {
        vertices
            .iter()
            .map(|v| {
                let gap = [0, 1].map(|l| (lo[l] - v[l]).max(v[l] - lo[l] - size[l]).max(0.0));
                lp2(gap, p)
            })
            .fold(0.0, f64::max)
    };
    let lo = [0, 1].map(|l| vertices.iter().map(|v| v[l]).fold(f64::INFINITY, f64::min));
    let hi = [0, 1].map(|l| {
        vertices
            .iter()
            .map(|v| v[l])
            .fold(f64::NEG_INFINITY, f64::max)
    });
    let coarse = 8;
    let size = [0, 1].map(|l| (hi[l] - lo[l]).max(1e-12) / coarse as f64);
    let mut cells: Vec<[f64; 2]> = (0..coarse * coarse)
        .map(|c| {
            [
                lo[0] + size[0] * (c / coarse) as f64,
                lo[1] + size[1] * (c % coarse) as f64,
            ]
        })
        .collect();
    let mut size = size;
    let mut upper = f64::INFINITY;
    loop {
        for c in &cells {
            upper = upper.min(f([c[0] + 0.5 * size[0], c[1] + 0.5 * size[1]]));
        }
        let bounds: Vec<f64> = cells.iter().map(|&c| lb(c, size)).collect();
        let lower = bounds.iter().copied().fold(f64::INFINITY, f64::min);
        if upper - lower <= tol || size[0].max(size[1]) < 1e-15 {
            return (lower, upper);
        }
        let half = [0.5 * size[0], 0.5 * size[1]];
        cells = cells
            .iter()
            .zip(&bounds)
            .filter(|(_, &b)| b <= upper)
            .flat_map(|(c, _)| {
                [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]
                    .map(|o| [c[0] + o[0] * half[0], c[1] + o[1] * half[1]])
            })
            .collect();
        size = half;
    }
}
