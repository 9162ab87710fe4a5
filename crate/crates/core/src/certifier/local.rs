//! Midpoint defects and local defect maps.

use rayon::prelude::*;

use super::{CertifyError, DefectEvaluator};
use crate::circumradius::{CandidatePolicy, CandidateTable};
use crate::metric::{FiniteMetricSpace, Triple};
use crate::model::{Kappa, ModelError, MODEL_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDefect {
    pub i: usize,
    pub j: usize,
    /// `min_x max(d(x, i), d(x, j)) - d(i, j) / 2`.
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MidpointDefects {
    /// One entry per pair `i < j`, lexicographic.
    pub pairs: Vec<PairDefect>,
    pub max: f64,
    /// First pair attaining `max`.
    pub argmax: Option<(usize, usize)>,
}

/// How far each pair is from having a midpoint in the space. Zero for every
/// pair exactly when the space has all midpoints.
pub fn midpoint_defect(space: &FiniteMetricSpace) -> MidpointDefects {
    let n = space.n();
    let table = CandidateTable::new(space, &CandidatePolicy::AllPoints)
        .expect("all-points candidates of a nonempty space");
    let pairs: Vec<PairDefect> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let table = &table;
            (i + 1..n).map(move |j| {
                let (r, _, _) = table.min_max(Triple { i, j: i, k: j });
                // the triangle inequality gives r >= d/2; clamp rounding
                PairDefect {
                    i,
                    j,
                    defect: (r - 0.5 * space.d(i, j)).max(0.0),
                }
            })
        })
        .collect();
    let mut max = 0.0;
    let mut argmax = None;
    for p in &pairs {
        if argmax.is_none() || p.defect > max {
            max = p.defect;
            argmax = Some((p.i, p.j));
        }
    }
    MidpointDefects { pairs, max, argmax }
}

/// Colex rank of `i < j < k` among all 3-subsets.
#[inline]
fn rank(i: usize, j: usize, k: usize) -> usize {
    k * (k - 1) * (k - 2) / 6 + j * (j - 1) / 2 + i
}

/// For every point `x`, the largest upper defect among distinct triangles
/// contained in the closed ball `B(x, radius)`.
///
/// Circumradii are taken in the whole space, so the map is nondecreasing in
/// `radius` and reaches the global `epsilon*` once the ball covers the space.
/// Large triangles (`kappa > 0`) contribute nothing.
pub fn local_defect_map(
    space: &FiniteMetricSpace,
    radius: f64,
    kappa: Kappa,
) -> Result<Vec<f64>, CertifyError> {
    if !(radius > 0.0) {
        return Err(CertifyError::InvalidQuery(format!(
            "neighborhood radius must be positive, got {radius}"
        )));
    }
    let n = space.n();
    let eval = DefectEvaluator::new(space, kappa, &CandidatePolicy::AllPoints, MODEL_TOLERANCE)?;
    // blocks by largest index k: (j, i) ascending, which is colex order
    let blocks = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut out = Vec::with_capacity(k * k.saturating_sub(1) / 2);
            for j in 0..k {
                for i in 0..j {
                    let d = eval.evaluate(Triple { i, j, k })?;
                    out.push(d.map_or(0.0, |d| d.upper()));
                }
            }
            Ok::<_, ModelError>(out)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let upper: Vec<f64> = blocks.concat();

    Ok((0..n)
        .into_par_iter()
        .map(|x| {
            let ball: Vec<usize> = (0..n).filter(|&y| space.d(x, y) <= radius).collect();
            let mut best = 0.0_f64;
            for (c, &k) in ball.iter().enumerate() {
                for (b, &j) in ball[..c].iter().enumerate() {
                    for &i in &ball[..b] {
                        best = best.max(upper[rank(i, j, k)]);
                    }
                }
            }
            best
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certifier::{certify, CurvatureQuery};
    use crate::metric::{from_graph, validate_metric};

    fn k(x: f64) -> Kappa {
        Kappa::new(x).unwrap()
    }

    #[test]
    fn colex_rank_is_dense() {
        let mut seen = Vec::new();
        for kk in 0..7 {
            for j in 0..kk {
                for i in 0..j {
                    seen.push(rank(i, j, kk));
                }
            }
        }
        assert_eq!(seen, (0..35).collect::<Vec<_>>());
    }

    #[test]
    fn path_neighbors_have_no_midpoint() {
        let s = from_graph(&[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let m = midpoint_defect(&s);
        assert_eq!(m.pairs.len(), 6);
        for p in &m.pairs {
            let expected = if p.j == p.i + 1 {
                0.5
            } else if p.j == p.i + 2 {
                0.0
            } else {
                0.5
            };
            assert_eq!(p.defect, expected, "pair ({}, {})", p.i, p.j);
        }
        assert_eq!((m.max, m.argmax), (0.5, Some((0, 1))));
    }

    #[test]
    fn complete_graph_pairs_have_defect_one_half() {
        let rows: Vec<Vec<f64>> = (0..5)
            .map(|i| (0..5).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        let m = midpoint_defect(&validate_metric(&rows, false).unwrap());
        assert!(m.pairs.iter().all(|p| p.defect == 0.5));
    }

    #[test]
    fn single_point_has_no_pairs() {
        let m = midpoint_defect(&validate_metric(&[vec![0.0]], false).unwrap());
        assert!(m.pairs.is_empty());
        assert_eq!((m.max, m.argmax), (0.0, None));
    }

    #[test]
    fn local_map_interpolates_between_zero_and_global() {
        let edges: Vec<_> = (0..7)
            .map(|i| (i, i + 1, 1.0))
            .chain([(3, 8, 1.0), (8, 9, 1.0)])
            .collect();
        let s = from_graph(&edges).unwrap();
        let global = certify(&s, &CurvatureQuery::upper(k(0.0)))
            .unwrap()
            .epsilon_needed;
        let tiny = local_defect_map(&s, 0.5, k(0.0)).unwrap();
        assert!(tiny.iter().all(|&v| v == 0.0));
        let full = local_defect_map(&s, s.diameter(), k(0.0)).unwrap();
        assert!(full.iter().all(|&v| v == global));
        let mut prev = tiny;
        for r in [1.0, 1.5, 2.0, 3.0, 4.0, 6.0] {
            let cur = local_defect_map(&s, r, k(0.0)).unwrap();
            assert!(cur.iter().zip(&prev).all(|(c, p)| c >= p));
            prev = cur;
        }
        assert!(local_defect_map(&s, 0.0, k(0.0)).is_err());
    }
}
