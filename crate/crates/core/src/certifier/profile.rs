//! Full defect profiles: every triangle once, then `epsilon*(beta)` by
//! filtering the stored defects.

use rayon::prelude::*;

use super::{CertifyError, CurvatureQuery, DefectEvaluator, Extremes, TriangleDefect};
use crate::metric::FiniteMetricSpace;
use crate::model::{Kappa, ModelError};

/// Number of histogram bins over `[-diameter, diameter]`.
pub const HISTOGRAM_BINS: usize = 40;

/// Equal-width histogram of signed defects. Values outside `[lo, hi]` land in
/// the end bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    fn new(lo: f64, hi: f64, bins: usize) -> Self {
        Histogram {
            lo,
            hi,
            counts: vec![0; bins],
        }
    }

    fn add(&mut self, x: f64) {
        let bins = self.counts.len();
        let pos = (x - self.lo) / (self.hi - self.lo) * bins as f64;
        let b = if pos.is_nan() {
            0
        } else {
            (pos.max(0.0) as usize).min(bins - 1)
        };
        self.counts[b] += 1;
    }

    pub fn edges(&self) -> Vec<f64> {
        let bins = self.counts.len();
        (0..=bins)
            .map(|b| self.lo + (self.hi - self.lo) * b as f64 / bins as f64)
            .collect()
    }

    /// `bin_lo,bin_hi,count` rows with a header line.
    pub fn to_csv(&self) -> String {
        let e = self.edges();
        let mut out = String::from("bin_lo,bin_hi,count\n");
        for (b, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{:.16e},{:.16e},{}\n", e[b], e[b + 1], c));
        }
        out
    }
}

/// `epsilon*` restricted to triangles whose distinct sides are all `>= beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaPoint {
    pub beta: f64,
    pub epsilon_upper: f64,
    pub epsilon_lower: f64,
    pub triples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    pub kappa: Kappa,
    pub epsilon_star_upper: f64,
    pub epsilon_star_lower: f64,
    pub worst_upper: Option<TriangleDefect>,
    pub worst_lower: Option<TriangleDefect>,
    pub histogram: Histogram,
    pub skipped: usize,
    pub beta_curve: Vec<BetaPoint>,
    /// Every compared triangle, in lexicographic triple order.
    pub defects: Vec<TriangleDefect>,
}

impl DefectReport {
    /// `beta,epsilon_upper,epsilon_lower,triples` rows with a header line.
    pub fn beta_curve_csv(&self) -> String {
        let mut out = String::from("beta,epsilon_upper,epsilon_lower,triples\n");
        for p in &self.beta_curve {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{}\n",
                p.beta, p.epsilon_upper, p.epsilon_lower, p.triples
            ));
        }
        out
    }
}

/// Upper-direction profile at curvature `kappa` over all distinct triangles.
pub fn defect_profile(
    space: &FiniteMetricSpace,
    kappa: Kappa,
    beta_grid: &[f64],
) -> Result<DefectReport, CertifyError> {
    defect_profile_for(space, &CurvatureQuery::upper(kappa), beta_grid)
}

/// Profile using the query's curvature, triple and candidate policies. The
/// query's `beta` filters the enumeration; `beta_grid` then filters further.
pub fn defect_profile_for(
    space: &FiniteMetricSpace,
    query: &CurvatureQuery,
    beta_grid: &[f64],
) -> Result<DefectReport, CertifyError> {
    query.validate()?;
    if beta_grid.iter().any(|b| !(b.is_finite() && *b >= 0.0))
        || beta_grid.windows(2).any(|w| w[0] > w[1])
    {
        return Err(CertifyError::InvalidQuery(
            "beta grid must be ascending, finite and nonnegative".into(),
        ));
    }
    let eval = DefectEvaluator::for_query(space, query)?;
    let chunks = (0..space.n())
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let mut skipped = 0;
            for t in super::triples_from(space, i, query.triple_policy, query.beta) {
                match eval.evaluate(t)? {
                    Some(d) => out.push(d),
                    None => skipped += 1,
                }
            }
            Ok::<_, ModelError>((out, skipped))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut ext = Extremes::default();
    let mut defects = Vec::new();
    for (chunk, skipped) in chunks {
        ext.skipped += skipped;
        for d in &chunk {
            ext.push(*d);
        }
        defects.extend(chunk);
    }

    let diam = space.diameter();
    let span = if diam > 0.0 { diam } else { 1.0 };
    let mut histogram = Histogram::new(-span, span, HISTOGRAM_BINS);
    for d in &defects {
        histogram.add(d.defect);
    }

    // sort by smallest distinct side, descending; prefix maxima answer every
    // beta with one binary search
    let mut keyed: Vec<(f64, f64, f64)> = defects
        .iter()
        .map(|d| (d.triple.min_distinct_side(space), d.upper(), d.lower()))
        .collect();
    keyed.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut up = 0.0_f64;
    let mut lo = 0.0_f64;
    let prefix: Vec<(f64, f64)> = keyed
        .iter()
        .map(|&(_, u, l)| {
            up = up.max(u);
            lo = lo.max(l);
            (up, lo)
        })
        .collect();
    let beta_curve = beta_grid
        .iter()
        .map(|&beta| {
            let count = keyed.partition_point(|x| x.0 >= beta);
            let (epsilon_upper, epsilon_lower) = if count == 0 {
                (0.0, 0.0)
            } else {
                prefix[count - 1]
            };
            BetaPoint {
                beta,
                epsilon_upper,
                epsilon_lower,
                triples: count,
            }
        })
        .collect();

    Ok(DefectReport {
        kappa: query.kappa,
        epsilon_star_upper: ext.epsilon_upper(),
        epsilon_star_lower: ext.epsilon_lower(),
        worst_upper: ext.upper,
        worst_lower: ext.lower,
        histogram,
        skipped: ext.skipped,
        beta_curve,
        defects,
    })
}
