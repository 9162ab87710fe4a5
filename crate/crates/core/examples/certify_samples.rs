//! Upper and lower curvature queries on sampled model spaces.

use metric_curv::certifier::{certify, CurvatureQuery, Direction};
use metric_curv::metric::{sample_space, GeneratorSpec};
use metric_curv::model::Kappa;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("euclidean:dim=2,n=60,seed=1", 0.0),
        ("sphere:kappa=1,n=40,seed=1", 1.0),
        ("hyperbolic:kappa=-1,n=40,seed=1", -1.0),
        ("tree:n=30,seed=1", 0.0),
    ];
    for (spec, k) in cases {
        let space = sample_space(&spec.parse::<GeneratorSpec>()?)?;
        let kappa = Kappa::new(k)?;
        for dir in [Direction::Upper, Direction::Lower] {
            let q = CurvatureQuery::new(kappa, dir).with_large_triangle_margin(0.1);
            let v = certify(&space, &q)?;
            println!(
                "{spec:<34} {dir:?}: holds {:<5} epsilon needed {:.3e} ({} compared, {} skipped)",
                v.holds, v.epsilon_needed, v.evaluated, v.skipped
            );
        }
    }
    Ok(())
}
