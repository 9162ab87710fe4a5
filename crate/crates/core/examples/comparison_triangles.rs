//! Places one triangle in the three model planes and compares circumradii
//! and the distance-comparison curve.

use std::f64::consts::FRAC_PI_2;

use metric_curv::curve::distance_comparison_curve;
use metric_curv::model::{comparison_triangle, model_circumradius, Kappa};
use metric_curv::SideLengths;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sides = SideLengths::new(1.2, 1.0, 0.9);
    for k in [-1.0, 0.0, 1.0] {
        let kappa = Kappa::new(k)?;
        let tri = comparison_triangle(&sides, kappa)?;
        let r = model_circumradius(&sides, kappa)?;
        println!("kappa {k:>4}: vertices {:?}", tri.vertices);
        println!("            circumradius {:.12}", r.radius);
    }

    // the octant triangle of the unit sphere
    let q = FRAC_PI_2;
    let r = model_circumradius(&SideLengths::new(q, q, q), Kappa::new(1.0)?)?;
    println!("octant circumradius {:.12} (arccos(1/sqrt 3))", r.radius);

    let ts = [0.1, 0.25, 0.5, 1.0];
    for k in [-1.0, 0.0, 1.0] {
        let g = distance_comparison_curve(Kappa::new(k)?, FRAC_PI_2, &ts)?;
        println!("g_{k}(t) at t = {ts:?}: {g:.6?}");
    }
    Ok(())
}
