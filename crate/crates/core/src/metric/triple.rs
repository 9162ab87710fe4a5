use std::fmt;

use super::{metric_tolerance, FiniteMetricSpace};

/// A triangle as a canonically ordered index triple `i <= j <= k`.
///
/// Repeated indices are allowed: `(i, i, j)` is a degenerate pair-triangle
/// and `(i, i, i)` a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Triple {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable();
        Triple {
            i: v[0],
            j: v[1],
            k: v[2],
        }
    }

    pub fn indices(&self) -> [usize; 3] {
        [self.i, self.j, self.k]
    }

    pub fn is_degenerate(&self) -> bool {
        self.i == self.j || self.j == self.k
    }

    /// Largest index, for range checks.
    pub fn max_index(&self) -> usize {
        self.k
    }

    /// Smallest distance between distinct indices (`+inf` for a point).
    pub fn min_distinct_side(&self, space: &FiniteMetricSpace) -> f64 {
        let mut m = f64::INFINITY;
        for (a, b) in [(self.i, self.j), (self.i, self.k), (self.j, self.k)] {
            if a != b {
                m = m.min(space.d(a, b));
            }
        }
        m
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.i, self.j, self.k)
    }
}

/// Side lengths of a triangle, sorted so that `a >= b >= c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideLengths {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SideLengths {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        let mut v = [x, y, z];
        v.sort_by(|p, q| q.total_cmp(p));
        SideLengths {
            a: v[0],
            b: v[1],
            c: v[2],
        }
    }

    pub fn of(space: &FiniteMetricSpace, t: Triple) -> Self {
        SideLengths::new(space.d(t.i, t.j), space.d(t.j, t.k), space.d(t.i, t.k))
    }

    pub fn longest(&self) -> f64 {
        self.a
    }

    pub fn perimeter(&self) -> f64 {
        self.a + self.b + self.c
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        SideLengths {
            a: self.a * lambda,
            b: self.b * lambda,
            c: self.c * lambda,
        }
    }

    /// Nonnegative, finite and `a <= b + c` up to the metric tolerance.
    pub fn is_valid(&self) -> bool {
        self.c >= 0.0 && self.a.is_finite() && self.a <= self.b + self.c + metric_tolerance(self.a)
    }
}
