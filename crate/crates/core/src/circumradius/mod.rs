//! Circumradius inside the space under test.
//!
//! For a finite space the infimum `inf_x max_i d(x, a_i)` is a minimum over a
//! candidate set, scanned with early exit (see [`CandidateTable`]). For
//! coordinate points in `(R^d, ||.||_p)` see [`lp_circumradius`].

mod continuous;

use thiserror::Error;

pub use continuous::{
    circumcenter_candidates, linf_circumcenter, lp_circumradius, triple_circumcenters, LP_TOLERANCE,
};

use crate::metric::{Embedding, FiniteMetricSpace, Triple};
use crate::model::ModelPoint;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircumError {
    #[error("index {index} out of range for a space of {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("candidate set is empty")]
    EmptyCandidateSet,
    #[error("augmented candidates need a space with coordinates")]
    MissingEmbedding,
    #[error("candidate point has dimension {got}, embedding has {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("exponent p = {0} is not supported (need p > 1 or p = inf)")]
    InvalidP(f64),
    #[error("min-max solver stopped with certified gap {gap:e} above tolerance")]
    NotConverged { gap: f64 },
}

/// Where a circumradius is attained.
#[derive(Debug, Clone, PartialEq)]
pub enum Center {
    /// A point of the finite space.
    Index(usize),
    /// An ambient coordinate point (augmented candidates, `l_p` planes).
    Point(Vec<f64>),
    /// A point of a model plane.
    Model(ModelPoint),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircumResult {
    pub radius: f64,
    pub center: Option<Center>,
    pub attained: bool,
    /// Candidates inspected or solver iterations run.
    pub evaluations: usize,
}

/// Which points may serve as circumcenters.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum CandidatePolicy {
    /// Every point of the space.
    #[default]
    AllPoints,
    /// Only the listed point indices.
    Subset(Vec<usize>),
    /// Every point of the space plus extra ambient points, measured through
    /// the space's [`Embedding`].
    Augmented(Vec<Vec<f64>>),
}

/// Precomputed candidate distances and per-vertex scan orders.
///
/// Candidate `c < n_points` of the table is a space point (its index in the
/// space for [`CandidatePolicy::AllPoints`]/`Augmented`, the subset member
/// otherwise); the rest are augmented coordinate points. For each vertex `v`
/// the candidates are sorted by distance to `v`, so a scan that starts at the
/// triple's first vertex can stop as soon as that distance alone exceeds the
/// best radius found.
#[derive(Debug, Clone)]
pub struct CandidateTable {
    n: usize,
    /// candidate id -> center reported for it
    ids: Vec<Center>,
    /// candidate-major distances: `dist[c * n + v]`
    dist: Vec<f64>,
    /// `order[v * m .. (v + 1) * m]`: candidates sorted by distance to `v`
    order: Vec<u32>,
}

impl CandidateTable {
    pub fn new(space: &FiniteMetricSpace, policy: &CandidatePolicy) -> Result<Self, CircumError> {
        let n = space.n();
        let (ids, dist) = match policy {
            CandidatePolicy::AllPoints => (
                (0..n).map(Center::Index).collect::<Vec<_>>(),
                space.as_flat().to_vec(),
            ),
            CandidatePolicy::Subset(sub) => {
                if sub.is_empty() {
                    return Err(CircumError::EmptyCandidateSet);
                }
                let mut sub = sub.clone();
                sub.sort_unstable();
                sub.dedup();
                let mut dist = Vec::with_capacity(sub.len() * n);
                for &c in &sub {
                    if c >= n {
                        return Err(CircumError::IndexOutOfRange { index: c, n });
                    }
                    dist.extend_from_slice(space.row(c));
                }
                (sub.into_iter().map(Center::Index).collect(), dist)
            }
            CandidatePolicy::Augmented(extra) => {
                let emb: &Embedding = space.embedding().ok_or(CircumError::MissingEmbedding)?;
                let mut ids: Vec<Center> = (0..n).map(Center::Index).collect();
                let mut dist = space.as_flat().to_vec();
                for p in extra {
                    if p.len() != emb.dim() {
                        return Err(CircumError::DimensionMismatch {
                            got: p.len(),
                            expected: emb.dim(),
                        });
                    }
                    dist.extend((0..n).map(|v| emb.distance_to(p, v)));
                    ids.push(Center::Point(p.clone()));
                }
                (ids, dist)
            }
        };
        if ids.is_empty() {
            return Err(CircumError::EmptyCandidateSet);
        }
        let m = ids.len();
        let mut order = Vec::with_capacity(n * m);
        let mut idx: Vec<u32> = (0..m as u32).collect();
        for v in 0..n {
            idx.sort_by(|&x, &y| {
                dist[x as usize * n + v]
                    .total_cmp(&dist[y as usize * n + v])
                    .then(x.cmp(&y))
            });
            order.extend_from_slice(&idx);
        }
        Ok(CandidateTable {
            n,
            ids,
            dist,
            order,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn center(&self, candidate: usize) -> &Center {
        &self.ids[candidate]
    }

    #[inline]
    fn d(&self, c: usize, v: usize) -> f64 {
        self.dist[c * self.n + v]
    }

    /// `(radius, candidate, inspected)` for the triple. Ties go to the lowest
    /// candidate id.
    pub fn min_max(&self, t: Triple) -> (f64, usize, usize) {
        let m = self.ids.len();
        let scan = &self.order[t.i * m..(t.i + 1) * m];
        let mut best = f64::INFINITY;
        let mut best_c = usize::MAX;
        let mut inspected = 0;
        for &c in scan {
            let c = c as usize;
            let di = self.d(c, t.i);
            if di > best {
                break;
            }
            inspected += 1;
            let mut rho = di.max(self.d(c, t.j));
            if rho > best {
                continue;
            }
            rho = rho.max(self.d(c, t.k));
            if rho < best || (rho == best && c < best_c) {
                best = rho;
                best_c = c;
            }
        }
        (best, best_c, inspected)
    }

    pub fn evaluate(&self, t: Triple) -> CircumResult {
        let (radius, c, inspected) = self.min_max(t);
        CircumResult {
            radius,
            center: Some(self.ids[c].clone()),
            attained: true,
            evaluations: inspected,
        }
    }
}

fn check_triple(space: &FiniteMetricSpace, t: Triple) -> Result<(), CircumError> {
    if t.max_index() >= space.n() {
        return Err(CircumError::IndexOutOfRange {
            index: t.max_index(),
            n: space.n(),
        });
    }
    Ok(())
}

/// `min_x max_i d(x, a_i)` over the candidate set, with the lowest-index
/// attaining candidate as center.
///
/// Builds a [`CandidateTable`] on every call; reuse a table when evaluating
/// many triples of the same space.
pub fn discrete_circumradius(
    space: &FiniteMetricSpace,
    t: Triple,
    policy: &CandidatePolicy,
) -> Result<CircumResult, CircumError> {
    check_triple(space, t)?;
    Ok(CandidateTable::new(space, policy)?.evaluate(t))
}

/// Smallest realized radius `r` for which the closed balls `B(a_i, r)` share
/// a candidate point.
///
/// This is the ball-intersection reading of the circumradius; it must agree
/// exactly with [`discrete_circumradius`].
pub fn ball_intersection_radius(
    space: &FiniteMetricSpace,
    t: Triple,
    policy: &CandidatePolicy,
) -> Result<f64, CircumError> {
    check_triple(space, t)?;
    let table = CandidateTable::new(space, policy)?;
    let m = table.len();
    let mut radii: Vec<f64> = (0..m)
        .flat_map(|c| t.indices().map(|v| table.d(c, v)))
        .collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let meets = |r: f64| (0..m).any(|c| t.indices().iter().all(|&v| table.d(c, v) <= r));
    // smallest realized radius whose balls intersect; the largest always does
    let (mut lo, mut hi) = (0usize, radii.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if meets(radii[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(radii[lo])
}
