//! Finite metric spaces.
//!
//! [`FiniteMetricSpace`] is an immutable, validated distance matrix. It is
//! the universe of candidate circumcenters for every discrete circumradius
//! computed on it, and is safe to share read-only across threads.

mod graph;
mod sample;
mod triple;

use std::borrow::Cow;
use std::fmt;

use thiserror::Error;

pub use graph::{from_graph, from_labeled_graph};
pub use sample::{from_lp_points, sample_space, GeneratorKind, GeneratorSpec};
pub use triple::{SideLengths, Triple};

use crate::lp::lp_distance;
use crate::model;

/// Cap on the number of violations collected by [`validate_metric`].
pub const MAX_REPORTED_VIOLATIONS: usize = 256;

/// Relative slack for metric axioms: `1e-9 * (1 + scale)`.
pub fn metric_tolerance(scale: f64) -> f64 {
    1e-9 * (1.0 + scale)
}

/// A single failed metric axiom.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    NonFinite {
        i: usize,
        j: usize,
    },
    NonzeroDiagonal {
        i: usize,
    },
    NegativeEntry {
        i: usize,
        j: usize,
    },
    Asymmetry {
        i: usize,
        j: usize,
    },
    ZeroOffDiagonal {
        i: usize,
        j: usize,
    },
    /// `d(i, k) > d(i, j) + d(j, k) + tol`.
    TriangleViolation {
        i: usize,
        k: usize,
        j: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NotSquare { row, len, expected } => {
                write!(f, "row {row} has {len} entries, expected {expected}")
            }
            Violation::NonFinite { i, j } => write!(f, "non-finite entry at ({i}, {j})"),
            Violation::NonzeroDiagonal { i } => write!(f, "nonzero diagonal entry at ({i}, {i})"),
            Violation::NegativeEntry { i, j } => write!(f, "negative entry at ({i}, {j})"),
            Violation::Asymmetry { i, j } => write!(f, "asymmetric entries at ({i}, {j})"),
            Violation::ZeroOffDiagonal { i, j } => {
                write!(f, "zero distance between distinct points ({i}, {j})")
            }
            Violation::TriangleViolation { i, k, j } => {
                write!(
                    f,
                    "triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})"
                )
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("invalid metric: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("graph is disconnected: no path between vertices {0} and {1}")]
    DisconnectedGraph(usize, usize),
    #[error("edge ({0}, {1}) has non-positive or non-finite weight {2}")]
    NonpositiveWeight(usize, usize, f64),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("{0} labels supplied for {1} points")]
    LabelCount(usize, usize),
}

fn format_violations(v: &[Violation]) -> String {
    let mut s = v
        .iter()
        .take(8)
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ");
    if v.len() > 8 {
        s.push_str(&format!("; ... ({} total)", v.len()));
    }
    s
}

/// Coordinates attached to a sampled space, used to evaluate distances from
/// off-sample candidate points.
#[derive(Debug, Clone, PartialEq)]
pub enum Embedding {
    /// Points of `(R^d, ||.||_p)`.
    Lp { p: f64, coords: Vec<Vec<f64>> },
    /// Points on the sphere `|x|^2 = 1/kappa` in `R^3`.
    Sphere { kappa: f64, coords: Vec<[f64; 3]> },
    /// Points on the hyperboloid `x^2 + y^2 - t^2 = 1/kappa`, `t > 0`.
    Hyperboloid { kappa: f64, coords: Vec<[f64; 3]> },
}

impl Embedding {
    pub fn len(&self) -> usize {
        match self {
            Embedding::Lp { coords, .. } => coords.len(),
            Embedding::Sphere { coords, .. } | Embedding::Hyperboloid { coords, .. } => {
                coords.len()
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Ambient coordinate dimension of a point.
    pub fn dim(&self) -> usize {
        match self {
            Embedding::Lp { coords, .. } => coords.first().map_or(0, |c| c.len()),
            _ => 3,
        }
    }

    /// Distance from an arbitrary ambient point to embedded point `i`.
    pub fn distance_to(&self, point: &[f64], i: usize) -> f64 {
        match self {
            Embedding::Lp { p, coords } => lp_distance(point, &coords[i], *p),
            Embedding::Sphere { kappa, coords } => {
                model::sphere_distance(*kappa, &to3(point), &coords[i])
            }
            Embedding::Hyperboloid { kappa, coords } => {
                model::hyperboloid_distance(*kappa, &to3(point), &coords[i])
            }
        }
    }

    pub fn point(&self, i: usize) -> Vec<f64> {
        match self {
            Embedding::Lp { coords, .. } => coords[i].clone(),
            Embedding::Sphere { coords, .. } | Embedding::Hyperboloid { coords, .. } => {
                coords[i].to_vec()
            }
        }
    }

    fn select(&self, idx: &[usize]) -> Embedding {
        match self {
            Embedding::Lp { p, coords } => Embedding::Lp {
                p: *p,
                coords: idx.iter().map(|&i| coords[i].clone()).collect(),
            },
            Embedding::Sphere { kappa, coords } => Embedding::Sphere {
                kappa: *kappa,
                coords: idx.iter().map(|&i| coords[i]).collect(),
            },
            Embedding::Hyperboloid { kappa, coords } => Embedding::Hyperboloid {
                kappa: *kappa,
                coords: idx.iter().map(|&i| coords[i]).collect(),
            },
        }
    }
}

fn to3(p: &[f64]) -> [f64; 3] {
    assert_eq!(p.len(), 3, "expected a 3-coordinate embedding point");
    [p[0], p[1], p[2]]
}

/// A validated finite metric space.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Vec<f64>,
    labels: Option<Vec<String>>,
    embedding: Option<Embedding>,
    zero_pairs: Vec<(usize, usize)>,
}

impl FiniteMetricSpace {
    /// Builds a space from a row-major matrix already known to be a metric.
    pub(crate) fn from_trusted(n: usize, dist: Vec<f64>) -> Self {
        debug_assert_eq!(dist.len(), n * n);
        FiniteMetricSpace {
            n,
            dist,
            labels: None,
            embedding: None,
            zero_pairs: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    /// Row-major distance matrix.
    pub fn as_flat(&self) -> &[f64] {
        &self.dist
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of point `i`, or its index when the space is unlabeled.
    pub fn label(&self, i: usize) -> Cow<'_, str> {
        match &self.labels {
            Some(l) => Cow::Borrowed(l[i].as_str()),
            None => Cow::Owned(i.to_string()),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, MetricError> {
        if labels.len() != self.n {
            return Err(MetricError::LabelCount(labels.len(), self.n));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    /// Attaches coordinates. The caller vouches that the distances are the
    /// embedding's distances.
    pub fn with_embedding(mut self, embedding: Embedding) -> Result<Self, MetricError> {
        if embedding.len() != self.n {
            return Err(MetricError::LabelCount(embedding.len(), self.n));
        }
        self.embedding = Some(embedding);
        Ok(self)
    }

    /// Distinct index pairs at distance zero (only in pseudo-metric mode).
    pub fn zero_pairs(&self) -> &[(usize, usize)] {
        &self.zero_pairs
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().fold(0.0, |m, &x| m.max(x))
    }

    /// Smallest positive off-diagonal distance, `None` for `n < 2`.
    pub fn min_positive_distance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let d = self.d(i, j);
                if d > 0.0 && best.is_none_or(|b| d < b) {
                    best = Some(d);
                }
            }
        }
        best
    }

    /// The same space with every distance multiplied by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Self {
        assert!(lambda > 0.0 && lambda.is_finite(), "scale must be positive");
        FiniteMetricSpace {
            n: self.n,
            dist: self.dist.iter().map(|d| d * lambda).collect(),
            labels: self.labels.clone(),
            embedding: None,
            zero_pairs: self.zero_pairs.clone(),
        }
    }

    /// Induced subspace on `idx` (in that order).
    pub fn subspace(&self, idx: &[usize]) -> Self {
        let m = idx.len();
        let mut dist = vec![0.0; m * m];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                dist[a * m + b] = self.d(i, j);
            }
        }
        FiniteMetricSpace {
            n: m,
            dist,
            labels: self
                .labels
                .as_ref()
                .map(|l| idx.iter().map(|&i| l[i].clone()).collect()),
            embedding: self.embedding.as_ref().map(|e| e.select(idx)),
            zero_pairs: Vec::new(),
        }
    }

    /// Relabeling: new point `a` is old point `perm[a]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length");
        self.subspace(perm)
    }

    /// Quotient by zero-distance pairs. Returns the collapsed space and the
    /// class index of every original point.
    pub fn collapse_duplicates(&self) -> (Self, Vec<usize>) {
        let mut class = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for i in 0..self.n {
            if class[i] != usize::MAX {
                continue;
            }
            class[i] = reps.len();
            for j in i + 1..self.n {
                if class[j] == usize::MAX && self.d(i, j) == 0.0 {
                    class[j] = reps.len();
                }
            }
            reps.push(i);
        }
        (self.subspace(&reps), class)
    }
}

/// Validates a square matrix as a metric.
///
/// With `pseudo_ok`, zero distances between distinct points are admitted and
/// recorded in [`FiniteMetricSpace::zero_pairs`].
pub fn validate_metric(
    matrix: &[Vec<f64>],
    pseudo_ok: bool,
) -> Result<FiniteMetricSpace, MetricError> {
    let n = matrix.len();
    let mut v = Vec::new();
    for (row, r) in matrix.iter().enumerate() {
        if r.len() != n {
            v.push(Violation::NotSquare {
                row,
                len: r.len(),
                expected: n,
            });
        }
    }
    if !v.is_empty() {
        return Err(MetricError::Invalid(v));
    }

    let push = |v: &mut Vec<Violation>, x: Violation| {
        if v.len() < MAX_REPORTED_VIOLATIONS {
            v.push(x);
        }
    };
    let mut scale = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let x = matrix[i][j];
            if !x.is_finite() {
                push(&mut v, Violation::NonFinite { i, j });
            } else {
                scale = scale.max(x.abs());
            }
        }
    }
    if !v.is_empty() {
        return Err(MetricError::Invalid(v));
    }

    let mut zero_pairs = Vec::new();
    for i in 0..n {
        if matrix[i][i] != 0.0 {
            push(&mut v, Violation::NonzeroDiagonal { i });
        }
        for j in 0..n {
            if i != j && matrix[i][j] < 0.0 {
                push(&mut v, Violation::NegativeEntry { i, j });
            }
        }
        for j in i + 1..n {
            if matrix[i][j] != matrix[j][i] {
                push(&mut v, Violation::Asymmetry { i, j });
            } else if matrix[i][j] == 0.0 {
                if pseudo_ok {
                    zero_pairs.push((i, j));
                } else {
                    push(&mut v, Violation::ZeroOffDiagonal { i, j });
                }
            }
        }
    }
    if !v.is_empty() {
        return Err(MetricError::Invalid(v));
    }

    let tol = metric_tolerance(scale);
    for i in 0..n {
        for k in i + 1..n {
            let dik = matrix[i][k];
            for j in 0..n {
                if j != i && j != k && dik > matrix[i][j] + matrix[j][k] + tol {
                    push(&mut v, Violation::TriangleViolation { i, k, j });
                }
            }
        }
    }
    if !v.is_empty() {
        return Err(MetricError::Invalid(v));
    }

    let mut dist = Vec::with_capacity(n * n);
    for r in matrix {
        dist.extend_from_slice(r);
    }
    Ok(FiniteMetricSpace {
        n,
        dist,
        labels: None,
        embedding: None,
        zero_pairs,
    })
}
