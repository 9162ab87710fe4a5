//! How the defect of a grid graph shrinks as small triangles are excluded.

use metric_curv::certifier::defect_profile;
use metric_curv::metric::{sample_space, GeneratorSpec};
use metric_curv::model::Kappa;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = sample_space(&"grid:w=5,h=5".parse::<GeneratorSpec>()?)?;
    let betas: Vec<f64> = (0..=8).map(f64::from).collect();
    let report = defect_profile(&grid, Kappa::ZERO, &betas)?;
    print!("{}", report.beta_curve_csv());
    println!("worst triangle: {:?}", report.worst_upper);
    // nonempty bins only
    for line in report
        .histogram
        .to_csv()
        .lines()
        .filter(|l| !l.ends_with(",0"))
    {
        println!("{line}");
    }
    Ok(())
}
