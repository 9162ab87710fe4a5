//! Circumradius-comparison curvature bounds for metric spaces.
//!
//! A triangle `(a1, a2, a3)` in a metric space `X` has circumradius
//! `r = inf_x max_i d(x, a_i)`. The space satisfies `Curv X <= kappa` when
//! every triangle's circumradius is at most the circumradius of its comparison
//! triangle in the model plane `M_kappa`, and `Curv X >= kappa` when it is at
//! least that. This crate evaluates these conditions on finite metric spaces
//! (distance matrices, graph metrics, samples of model spaces) and on `l_p`
//! planes, together with the scale-`beta` and `epsilon`-relaxed variants and
//! the Gromov four-point hyperbolicity constant.
//!
//! # Layout
//!
//! - [`metric`]: validated distance matrices, graph ingestion, generators.
//! - [`model`]: model planes, comparison triangles and model circumradii.
//! - [`circumradius`]: circumradius inside the space under test.
//! - [`certifier`]: triangle enumeration, signed defects and verdicts.
//! - [`hyperbolicity`]: four-point `delta` and the `2 delta` relaxation check.
//! - [`counterexample`]: the explicit `l_p` triangles that break `Curv <= 0`.
//! - [`report`] and [`cli`]: JSON reports and the `curv` command line.
//!
//! Runnable walkthroughs of each capability live in the crate's `examples/`
//! directory (`cargo run --example <name>`).

pub mod certifier;
pub mod circumradius;
pub mod cli;
pub mod counterexample;
pub mod curve;
pub mod hyperbolicity;
pub mod io;
pub mod lp;
pub mod metric;
pub mod model;
pub mod parallel;
pub mod report;

pub use certifier::{
    certify, defect_profile, enumerate_triples, local_defect_map, midpoint_defect, triangle_defect,
    CurvatureQuery, DefectReport, Direction, TriangleDefect, TriplePolicy, Verdict,
};
pub use circumradius::{
    discrete_circumradius, linf_circumcenter, lp_circumradius, CandidatePolicy, Center,
    CircumResult,
};
pub use hyperbolicity::{delta_four_point, gromov_product, relaxed_npc_bound_check, DeltaResult};
pub use metric::{
    from_graph, sample_space, validate_metric, FiniteMetricSpace, GeneratorKind, GeneratorSpec,
    SideLengths, Triple,
};
pub use model::{
    comparison_triangle, euclidean_circumradius, model_circumradius, model_distance,
    ComparisonTriangle, Kappa, ModelPoint,
};
