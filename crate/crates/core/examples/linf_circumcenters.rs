//! In `l_inf` every triangle's circumradius is half its longest side, so
//! augmenting the candidate set with those centers makes `Curv <= 0` hold.

use metric_curv::certifier::{certify, CurvatureQuery};
use metric_curv::circumradius::{circumcenter_candidates, linf_circumcenter};
use metric_curv::metric::{sample_space, GeneratorSpec};
use metric_curv::model::Kappa;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = linf_circumcenter([&[0.0, 0.0, 0.0], &[2.0, 1.0, -1.0], &[1.0, 3.0, 0.5]]);
    println!("radius {} at {:?}", r.radius, r.center);

    let space = sample_space(&"lp:p=inf,n=20,dim=3,seed=11".parse::<GeneratorSpec>()?)?;
    let plain = certify(&space, &CurvatureQuery::upper(Kappa::ZERO))?;
    println!(
        "vertex candidates only: epsilon* = {:.6}",
        plain.epsilon_star_upper
    );
    let q = CurvatureQuery::upper(Kappa::ZERO).with_candidates(circumcenter_candidates(&space)?);
    let aug = certify(&space, &q)?;
    println!(
        "with circumcenters:     epsilon* = {:.3e}, holds = {}",
        aug.epsilon_star_upper, aug.holds
    );
    Ok(())
}
