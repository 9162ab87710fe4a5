//! Signed circumradius defects and curvature verdicts.
//!
//! The defect of a triangle is `r_space - r_model`: its circumradius in the
//! space under test minus the circumradius of its comparison triangle in
//! `M_kappa`. `Curv <= kappa` asks for every defect to be at most `epsilon`;
//! `Curv >= kappa` asks for every defect to be at least `-epsilon`.
//!
//! Scans run in parallel over the first triple index. Reductions keep the
//! extreme defect and break ties by canonical triple order, so verdicts and
//! witnesses do not depend on the thread count.

mod local;
mod profile;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

pub use local::{local_defect_map, midpoint_defect, MidpointDefects, PairDefect};
pub use profile::{defect_profile, defect_profile_for, BetaPoint, DefectReport, Histogram};

use crate::circumradius::{CandidatePolicy, CandidateTable, CircumError};
use crate::metric::{FiniteMetricSpace, SideLengths, Triple};
use crate::model::{model_circumradius, Kappa, ModelError, MODEL_TOLERANCE};

/// Absolute slack on defects when deciding a verdict.
pub const DEFECT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(transparent)]
    Circum(#[from] CircumError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `Curv <= kappa`: circumradii at most the model's.
    Upper,
    /// `Curv >= kappa`: circumradii at least the model's.
    Lower,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Upper => "upper",
            Direction::Lower => "lower",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "upper" | "le" | "<=" => Ok(Direction::Upper),
            "lower" | "ge" | ">=" => Ok(Direction::Lower),
            _ => Err(format!("unknown direction {s:?} (expected upper or lower)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TriplePolicy {
    /// Triples of three distinct points.
    #[default]
    Distinct,
    /// Distinct triples plus one pair-triangle `(i, i, j)` per pair.
    WithDegeneratePairs,
}

/// A curvature condition to test.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureQuery {
    pub kappa: Kappa,
    pub direction: Direction,
    /// Only triangles whose distinct sides are all `>= beta` are tested.
    pub beta: f64,
    /// Additive slack allowed on every defect.
    pub epsilon: f64,
    pub triple_policy: TriplePolicy,
    pub candidate_policy: CandidatePolicy,
    /// For `kappa > 0`, triangles with perimeter `>= 2 pi / sqrt(kappa) - margin`
    /// are skipped and counted.
    pub large_triangle_margin: f64,
}

impl CurvatureQuery {
    pub fn new(kappa: Kappa, direction: Direction) -> Self {
        CurvatureQuery {
            kappa,
            direction,
            beta: 0.0,
            epsilon: 0.0,
            triple_policy: TriplePolicy::Distinct,
            candidate_policy: CandidatePolicy::AllPoints,
            large_triangle_margin: MODEL_TOLERANCE,
        }
    }

    pub fn upper(kappa: Kappa) -> Self {
        Self::new(kappa, Direction::Upper)
    }

    pub fn lower(kappa: Kappa) -> Self {
        Self::new(kappa, Direction::Lower)
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_triple_policy(mut self, policy: TriplePolicy) -> Self {
        self.triple_policy = policy;
        self
    }

    pub fn with_candidates(mut self, policy: CandidatePolicy) -> Self {
        self.candidate_policy = policy;
        self
    }

    pub fn with_large_triangle_margin(mut self, margin: f64) -> Self {
        self.large_triangle_margin = margin;
        self
    }

    pub fn validate(&self) -> Result<(), CertifyError> {
        for (name, v) in [
            ("beta", self.beta),
            ("epsilon", self.epsilon),
            ("large-triangle margin", self.large_triangle_margin),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CertifyError::InvalidQuery(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Comparison data of one triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleDefect {
    pub triple: Triple,
    pub sides: SideLengths,
    pub r_space: f64,
    pub r_model: f64,
    /// `r_space - r_model`.
    pub defect: f64,
}

impl TriangleDefect {
    /// Violation of the upper bound, `max(defect, 0)`.
    pub fn upper(&self) -> f64 {
        self.defect.max(0.0)
    }

    /// Violation of the lower bound, `max(-defect, 0)`.
    pub fn lower(&self) -> f64 {
        (-self.defect).max(0.0)
    }

    pub fn violation(&self, direction: Direction) -> f64 {
        match direction {
            Direction::Upper => self.upper(),
            Direction::Lower => self.lower(),
        }
    }
}

/// Outcome of [`certify`].
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    /// Worst violator in the query direction, present when the query fails.
    pub witness: Option<TriangleDefect>,
    /// Smallest `epsilon` for which the query holds.
    pub epsilon_needed: f64,
    pub epsilon_star_upper: f64,
    pub epsilon_star_lower: f64,
    /// Triangles with the largest and smallest signed defect.
    pub worst_upper: Option<TriangleDefect>,
    pub worst_lower: Option<TriangleDefect>,
    /// Large triangles excluded for `kappa > 0`.
    pub skipped: usize,
    /// Triangles compared.
    pub evaluated: usize,
}

/// Computes defects of many triangles of one space, sharing the candidate
/// table.
pub struct DefectEvaluator<'a> {
    space: &'a FiniteMetricSpace,
    table: CandidateTable,
    kappa: Kappa,
    margin: f64,
}

impl<'a> DefectEvaluator<'a> {
    pub fn new(
        space: &'a FiniteMetricSpace,
        kappa: Kappa,
        candidates: &CandidatePolicy,
        large_triangle_margin: f64,
    ) -> Result<Self, CertifyError> {
        Ok(DefectEvaluator {
            space,
            table: CandidateTable::new(space, candidates)?,
            kappa,
            margin: large_triangle_margin,
        })
    }

    pub fn for_query(
        space: &'a FiniteMetricSpace,
        q: &CurvatureQuery,
    ) -> Result<Self, CertifyError> {
        Self::new(space, q.kappa, &q.candidate_policy, q.large_triangle_margin)
    }

    pub fn table(&self) -> &CandidateTable {
        &self.table
    }

    /// `Ok(None)` for a large triangle that has no comparison triangle.
    pub fn evaluate(&self, t: Triple) -> Result<Option<TriangleDefect>, ModelError> {
        let sides = SideLengths::of(self.space, t);
        if !self.kappa.admits(&sides, self.margin) {
            return Ok(None);
        }
        let r_model = match model_circumradius(&sides, self.kappa) {
            Ok(r) => r.radius,
            Err(ModelError::TooLargeForModel { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let (r_space, _, _) = self.table.min_max(t);
        Ok(Some(TriangleDefect {
            triple: t,
            sides,
            r_space,
            r_model,
            defect: r_space - r_model,
        }))
    }
}

/// Defect of a single triangle; `None` when it is skipped as too large.
pub fn triangle_defect(
    space: &FiniteMetricSpace,
    t: Triple,
    kappa: Kappa,
    candidates: &CandidatePolicy,
) -> Result<Option<TriangleDefect>, CertifyError> {
    if t.max_index() >= space.n() {
        return Err(CircumError::IndexOutOfRange {
            index: t.max_index(),
            n: space.n(),
        }
        .into());
    }
    Ok(DefectEvaluator::new(space, kappa, candidates, MODEL_TOLERANCE)?.evaluate(t)?)
}

/// Admissible triples with smallest index `i`, in lexicographic order.
pub(crate) fn triples_from(
    space: &FiniteMetricSpace,
    i: usize,
    policy: TriplePolicy,
    beta: f64,
) -> impl Iterator<Item = Triple> + '_ {
    let n = space.n();
    let pairs = (i + 1..n)
        .filter(move |&j| policy == TriplePolicy::WithDegeneratePairs && space.d(i, j) >= beta)
        .map(move |j| Triple { i, j: i, k: j });
    let distinct = (i + 1..n)
        .filter(move |&j| space.d(i, j) >= beta)
        .flat_map(move |j| {
            (j + 1..n)
                .filter(move |&k| space.d(i, k) >= beta && space.d(j, k) >= beta)
                .map(move |k| Triple { i, j, k })
        });
    pairs.chain(distinct)
}

/// All admissible triples in lexicographic order. `beta` constrains sides
/// between distinct indices only.
pub fn enumerate_triples(
    space: &FiniteMetricSpace,
    policy: TriplePolicy,
    beta: f64,
) -> impl Iterator<Item = Triple> + '_ {
    (0..space.n()).flat_map(move |i| triples_from(space, i, policy, beta))
}

/// Running extremes of a defect scan.
#[derive(Debug, Clone, Default)]
pub(crate) struct Extremes {
    pub upper: Option<TriangleDefect>,
    pub lower: Option<TriangleDefect>,
    pub evaluated: usize,
    pub skipped: usize,
}

fn wins(cand: &TriangleDefect, inc: &Option<TriangleDefect>, larger: bool) -> bool {
    match inc {
        None => true,
        Some(b) => {
            let better = if larger {
                cand.defect > b.defect
            } else {
                cand.defect < b.defect
            };
            better || (cand.defect == b.defect && cand.triple < b.triple)
        }
    }
}

impl Extremes {
    pub fn push(&mut self, d: TriangleDefect) {
        self.evaluated += 1;
        if wins(&d, &self.upper, true) {
            self.upper = Some(d);
        }
        if wins(&d, &self.lower, false) {
            self.lower = Some(d);
        }
    }

    pub fn merge(mut self, other: Extremes) -> Extremes {
        self.evaluated += other.evaluated;
        self.skipped += other.skipped;
        if let Some(d) = other.upper {
            if wins(&d, &self.upper, true) {
                self.upper = Some(d);
            }
        }
        if let Some(d) = other.lower {
            if wins(&d, &self.lower, false) {
                self.lower = Some(d);
            }
        }
        self
    }

    pub fn epsilon_upper(&self) -> f64 {
        self.upper.map_or(0.0, |d| d.upper())
    }

    pub fn epsilon_lower(&self) -> f64 {
        self.lower.map_or(0.0, |d| d.lower())
    }
}

/// Tests the query on every admissible triangle.
///
/// The upper direction holds iff `r_space <= r_model + epsilon + 1e-12` for
/// every admissible triangle; the lower direction iff
/// `r_space >= r_model - epsilon - 1e-12`. Large triangles (`kappa > 0`) are
/// skipped and counted, never treated as failures.
pub fn certify(space: &FiniteMetricSpace, query: &CurvatureQuery) -> Result<Verdict, CertifyError> {
    query.validate()?;
    let eval = DefectEvaluator::for_query(space, query)?;
    let ext = (0..space.n())
        .into_par_iter()
        .map(|i| {
            let mut acc = Extremes::default();
            for t in triples_from(space, i, query.triple_policy, query.beta) {
                match eval.evaluate(t)? {
                    Some(d) => acc.push(d),
                    None => acc.skipped += 1,
                }
            }
            Ok::<_, ModelError>(acc)
        })
        .try_reduce(Extremes::default, |a, b| Ok(a.merge(b)))?;
    Ok(verdict_from(&ext, query))
}

pub(crate) fn verdict_from(ext: &Extremes, query: &CurvatureQuery) -> Verdict {
    let (needed, worst) = match query.direction {
        Direction::Upper => (ext.epsilon_upper(), ext.upper),
        Direction::Lower => (ext.epsilon_lower(), ext.lower),
    };
    let holds = needed <= query.epsilon + DEFECT_TOLERANCE;
    Verdict {
        holds,
        witness: if holds { None } else { worst },
        epsilon_needed: needed,
        epsilon_star_upper: ext.epsilon_upper(),
        epsilon_star_lower: ext.epsilon_lower(),
        worst_upper: ext.upper,
        worst_lower: ext.lower,
        skipped: ext.skipped,
        evaluated: ext.evaluated,
    }
}
