//! Seeded generators for test spaces.
//!
//! Every generator is a pure function of its [`GeneratorSpec`]: the same
//! spec yields a bit-identical distance matrix. Conventions:
//!
//! - `euclidean`: uniform in the unit cube `[0, 1]^dim`.
//! - `sphere`: uniform on the 2-sphere of radius `1/sqrt(kappa)`, great-circle
//!   distance.
//! - `hyperbolic`: uniform (hyperbolic area) on a geodesic disk of the given
//!   radius in the hyperbolic plane of curvature `kappa`, exact distance.
//! - `lp`: uniform in the box `[-box, box]^dim`, `l_p` distance.
//! - `tree`: random recursive tree with unit-free edge length, each edge split
//!   into `2^k` equal segments; path-length metric.
//! - `grid`: `w x h` grid graph with unit edges.
//! - `random_graph`: random recursive spanning tree plus independent extra
//!   edges with the given probability, weights uniform in `[wmin, wmax]`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{from_graph, Embedding, FiniteMetricSpace, MetricError};
use crate::lp::lp_distance;
use crate::model;

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorKind {
    Euclidean {
        dim: usize,
        n: usize,
    },
    Sphere {
        kappa: f64,
        n: usize,
    },
    Hyperbolic {
        kappa: f64,
        n: usize,
        radius: Option<f64>,
    },
    Lp {
        p: f64,
        n: usize,
        half_width: f64,
        dim: usize,
    },
    Tree {
        n: usize,
        subdivision: u32,
        edge_length: f64,
    },
    Grid {
        w: usize,
        h: usize,
    },
    RandomGraph {
        n: usize,
        edge_prob: f64,
        w_min: f64,
        w_max: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, seed: u64) -> Self {
        GeneratorSpec { kind, seed }
    }
}

fn bad(msg: impl Into<String>) -> MetricError {
    MetricError::InvalidParameter(msg.into())
}

fn fmt_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        p.to_string()
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GeneratorKind::Euclidean { dim, n } => write!(f, "euclidean:dim={dim},n={n}")?,
            GeneratorKind::Sphere { kappa, n } => write!(f, "sphere:kappa={kappa},n={n}")?,
            GeneratorKind::Hyperbolic { kappa, n, radius } => {
                write!(f, "hyperbolic:kappa={kappa},n={n}")?;
                if let Some(r) = radius {
                    write!(f, ",radius={r}")?;
                }
            }
            GeneratorKind::Lp {
                p,
                n,
                half_width,
                dim,
            } => write!(f, "lp:p={},n={n},box={half_width},dim={dim}", fmt_p(*p))?,
            GeneratorKind::Tree {
                n,
                subdivision,
                edge_length,
            } => write!(f, "tree:n={n},k={subdivision},edge={edge_length}")?,
            GeneratorKind::Grid { w, h } => write!(f, "grid:w={w},h={h}")?,
            GeneratorKind::RandomGraph {
                n,
                edge_prob,
                w_min,
                w_max,
            } => write!(
                f,
                "random_graph:n={n},prob={edge_prob},wmin={w_min},wmax={w_max}"
            )?,
        }
        write!(f, ",seed={}", self.seed)
    }
}

struct Params<'a> {
    kind: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
    used: Vec<bool>,
}

impl<'a> Params<'a> {
    fn take(&mut self, key: &str) -> Option<&'a str> {
        let pos = self.pairs.iter().position(|(k, _)| *k == key)?;
        self.used[pos] = true;
        Some(self.pairs[pos].1)
    }

    fn parse<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, MetricError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| bad(format!("{}: cannot parse {key}={v}", self.kind))),
        }
    }

    fn required<T: FromStr>(&mut self, key: &str) -> Result<T, MetricError> {
        self.parse(key)?
            .ok_or_else(|| bad(format!("{}: missing parameter {key}", self.kind)))
    }

    fn float_or_inf(&mut self, key: &str) -> Result<Option<f64>, MetricError> {
        match self.take(key) {
            Some("inf") | Some("infinity") => Ok(Some(f64::INFINITY)),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| bad(format!("{}: cannot parse {key}={v}", self.kind))),
            None => Ok(None),
        }
    }

    fn finish(self) -> Result<(), MetricError> {
        for ((k, _), used) in self.pairs.iter().zip(&self.used) {
            if !used {
                return Err(bad(format!("{}: unknown parameter {k}", self.kind)));
            }
        }
        Ok(())
    }
}

impl FromStr for GeneratorSpec {
    type Err = MetricError;

    /// Parses `kind:key=value,...`, e.g. `sphere:kappa=1,n=40,seed=7`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let kind = kind.trim();
        let mut pairs = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {item:?}")))?;
            pairs.push((k.trim(), v.trim()));
        }
        let used = vec![false; pairs.len()];
        let mut p = Params { kind, pairs, used };
        let seed = p.parse("seed")?.unwrap_or(0);
        let kind = match kind {
            "euclidean" => GeneratorKind::Euclidean {
                dim: p.parse("dim")?.unwrap_or(2),
                n: p.required("n")?,
            },
            "sphere" => GeneratorKind::Sphere {
                kappa: p.required("kappa")?,
                n: p.required("n")?,
            },
            "hyperbolic" => GeneratorKind::Hyperbolic {
                kappa: p.required("kappa")?,
                n: p.required("n")?,
                radius: p.parse("radius")?,
            },
            "lp" | "lp_plane" => GeneratorKind::Lp {
                p: p.float_or_inf("p")?
                    .ok_or_else(|| bad("lp: missing parameter p"))?,
                n: p.required("n")?,
                half_width: p.parse("box")?.unwrap_or(1.0),
                dim: p.parse("dim")?.unwrap_or(2),
            },
            "tree" => GeneratorKind::Tree {
                n: p.required("n")?,
                subdivision: p.parse("k")?.unwrap_or(0),
                edge_length: p.parse("edge")?.unwrap_or(1.0),
            },
            "grid" => GeneratorKind::Grid {
                w: p.required("w")?,
                h: p.required("h")?,
            },
            "random_graph" => GeneratorKind::RandomGraph {
                n: p.required("n")?,
                edge_prob: p.required("prob")?,
                w_min: p.parse("wmin")?.unwrap_or(1.0),
                w_max: p.parse("wmax")?.unwrap_or(1.0),
            },
            other => return Err(bad(format!("unknown generator kind {other:?}"))),
        };
        p.finish()?;
        Ok(GeneratorSpec { kind, seed })
    }
}

fn matrix_from<F: Fn(usize, usize) -> f64>(n: usize, f: F) -> Vec<f64> {
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = f(i, j);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    dist
}

fn random_tree_edges(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|v| (rng.random_range(0..v), v)).collect()
}

/// Generates a finite metric space from a seeded spec.
pub fn sample_space(spec: &GeneratorSpec) -> Result<FiniteMetricSpace, MetricError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        GeneratorKind::Euclidean { dim, n } => {
            if dim == 0 || n == 0 {
                return Err(bad("euclidean: dim and n must be positive"));
            }
            let coords: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
                .collect();
            from_lp_points(coords, 2.0)
        }
        GeneratorKind::Lp {
            p,
            n,
            half_width,
            dim,
        } => {
            if !(p >= 1.0) || dim == 0 || n == 0 || !(half_width > 0.0 && half_width.is_finite()) {
                return Err(bad("lp: need p >= 1, dim > 0, n > 0, box > 0"));
            }
            let coords: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    (0..dim)
                        .map(|_| rng.random_range(-half_width..half_width))
                        .collect()
                })
                .collect();
            from_lp_points(coords, p)
        }
        GeneratorKind::Sphere { kappa, n } => {
            if !(kappa > 0.0 && kappa.is_finite()) || n == 0 {
                return Err(bad("sphere: need kappa > 0 and n > 0"));
            }
            let r = 1.0 / kappa.sqrt();
            let coords: Vec<[f64; 3]> = (0..n)
                .map(|_| loop {
                    let v: [f64; 3] = [
                        rng.sample(StandardNormal),
                        rng.sample(StandardNormal),
                        rng.sample(StandardNormal),
                    ];
                    let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                    if len > 1e-9 {
                        break [r * v[0] / len, r * v[1] / len, r * v[2] / len];
                    }
                })
                .collect();
            let dist = matrix_from(n, |i, j| {
                model::sphere_distance(kappa, &coords[i], &coords[j])
            });
            FiniteMetricSpace::from_trusted(n, dist)
                .with_embedding(Embedding::Sphere { kappa, coords })
        }
        GeneratorKind::Hyperbolic { kappa, n, radius } => {
            if !(kappa < 0.0 && kappa.is_finite()) || n == 0 {
                return Err(bad("hyperbolic: need kappa < 0 and n > 0"));
            }
            let curv_radius = 1.0 / (-kappa).sqrt();
            let disk = radius.unwrap_or(2.0 * curv_radius);
            if !(disk > 0.0 && disk.is_finite()) {
                return Err(bad("hyperbolic: radius must be positive"));
            }
            let s_max = disk / curv_radius;
            let coords: Vec<[f64; 3]> = (0..n)
                .map(|_| {
                    let u: f64 = rng.random();
                    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                    // area element sinh(s) ds: invert (cosh s - 1) / (cosh s_max - 1)
                    let s = (1.0 + u * (s_max.cosh() - 1.0)).acosh();
                    [
                        curv_radius * s.sinh() * phi.cos(),
                        curv_radius * s.sinh() * phi.sin(),
                        curv_radius * s.cosh(),
                    ]
                })
                .collect();
            let dist = matrix_from(n, |i, j| {
                model::hyperboloid_distance(kappa, &coords[i], &coords[j])
            });
            FiniteMetricSpace::from_trusted(n, dist)
                .with_embedding(Embedding::Hyperboloid { kappa, coords })
        }
        GeneratorKind::Tree {
            n,
            subdivision,
            edge_length,
        } => {
            if n == 0 || !(edge_length > 0.0 && edge_length.is_finite()) || subdivision > 16 {
                return Err(bad("tree: need n > 0, edge > 0, k <= 16"));
            }
            if n == 1 {
                return Ok(FiniteMetricSpace::from_trusted(1, vec![0.0]));
            }
            let segments = 1usize << subdivision;
            let h = edge_length / segments as f64;
            let mut next = n;
            let mut edges = Vec::new();
            for (u, v) in random_tree_edges(&mut rng, n) {
                let mut prev = u;
                for _ in 1..segments {
                    edges.push((prev, next, h));
                    prev = next;
                    next += 1;
                }
                edges.push((prev, v, h));
            }
            from_graph(&edges)
        }
        GeneratorKind::Grid { w, h } => {
            if w == 0 || h == 0 {
                return Err(bad("grid: need w, h > 0"));
            }
            if w * h == 1 {
                return Ok(FiniteMetricSpace::from_trusted(1, vec![0.0]));
            }
            let mut edges = Vec::new();
            for y in 0..h {
                for x in 0..w {
                    let id = y * w + x;
                    if x + 1 < w {
                        edges.push((id, id + 1, 1.0));
                    }
                    if y + 1 < h {
                        edges.push((id, id + w, 1.0));
                    }
                }
            }
            from_graph(&edges)
        }
        GeneratorKind::RandomGraph {
            n,
            edge_prob,
            w_min,
            w_max,
        } => {
            if n == 0
                || !(0.0..=1.0).contains(&edge_prob)
                || !(w_min > 0.0 && w_min <= w_max && w_max.is_finite())
            {
                return Err(bad(
                    "random_graph: need n > 0, prob in [0,1], 0 < wmin <= wmax",
                ));
            }
            if n == 1 {
                return Ok(FiniteMetricSpace::from_trusted(1, vec![0.0]));
            }
            let weight = |rng: &mut ChaCha8Rng| {
                if w_min == w_max {
                    w_min
                } else {
                    rng.random_range(w_min..w_max)
                }
            };
            let mut edges: Vec<(usize, usize, f64)> = Vec::new();
            for (u, v) in random_tree_edges(&mut rng, n) {
                let w = weight(&mut rng);
                edges.push((u, v, w));
            }
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random::<f64>() < edge_prob {
                        let w = weight(&mut rng);
                        edges.push((u, v, w));
                    }
                }
            }
            from_graph(&edges)
        }
    }
}

/// The points `coords` under the `l_p` distance (`p >= 1`), with the
/// coordinates attached as the embedding.
pub fn from_lp_points(coords: Vec<Vec<f64>>, p: f64) -> Result<FiniteMetricSpace, MetricError> {
    if !(p >= 1.0) {
        return Err(bad(format!("l_p exponent must be >= 1, got {p}")));
    }
    let dim = coords.first().map_or(0, Vec::len);
    if coords
        .iter()
        .any(|c| c.len() != dim || c.iter().any(|x| !x.is_finite()))
    {
        return Err(bad("points must be finite and share a dimension"));
    }
    let n = coords.len();
    let dist = matrix_from(n, |i, j| lp_distance(&coords[i], &coords[j], p));
    FiniteMetricSpace::from_trusted(n, dist).with_embedding(Embedding::Lp { p, coords })
}
