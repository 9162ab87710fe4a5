//! `l_p` norms on coordinate tuples.
//!
//! `p = f64::INFINITY` selects the maximum norm. Finite exponents are
//! evaluated with a max-abs rescaling so large or tiny coordinates neither
//! overflow nor underflow.

/// `||v||_p` for `p >= 1` (or `p = inf`).
pub fn lp_norm(v: &[f64], p: f64) -> f64 {
    let m = v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    if p.is_infinite() || m == 0.0 {
        return m;
    }
    if p == 2.0 {
        let s: f64 = v.iter().map(|x| (x / m) * (x / m)).sum();
        return m * s.sqrt();
    }
    if p == 1.0 {
        return v.iter().map(|x| x.abs()).sum();
    }
    let s: f64 = v.iter().map(|x| (x.abs() / m).powf(p)).sum();
    m * s.powf(1.0 / p)
}

/// `||a - b||_p`. Panics if the lengths differ.
pub fn lp_distance(a: &[f64], b: &[f64], p: f64) -> f64 {
    assert_eq!(a.len(), b.len(), "coordinate dimension mismatch");
    let mut diff = [0.0_f64; 16];
    if a.len() <= diff.len() {
        for (k, (x, y)) in a.iter().zip(b).enumerate() {
            diff[k] = x - y;
        }
        lp_norm(&diff[..a.len()], p)
    } else {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        lp_norm(&d, p)
    }
}

/// Gradient of `v -> ||v||_p` at `v != 0`, written into `out`.
///
/// The gradient is the dual unit vector: `<g, v> = ||v||_p` and
/// `||g||_q = 1` with `1/p + 1/q = 1`. At `v = 0` the zero vector is
/// returned, which is a valid subgradient.
pub(crate) fn lp_norm_gradient(v: &[f64], p: f64, out: &mut [f64]) {
    let n = lp_norm(v, p);
    if n == 0.0 {
        out.iter_mut().for_each(|g| *g = 0.0);
        return;
    }
    if p.is_infinite() {
        // first coordinate attaining the maximum
        let k = v
            .iter()
            .position(|x| x.abs() == n)
            .expect("max coordinate exists");
        out.iter_mut().for_each(|g| *g = 0.0);
        out[k] = v[k].signum();
        return;
    }
    for (g, x) in out.iter_mut().zip(v) {
        *g = x.signum() * (x.abs() / n).powf(p - 1.0);
    }
}

#[cfg(test)]
/// Dual exponent `q` with `1/p + 1/q = 1`.
pub(crate) fn dual_exponent(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}
