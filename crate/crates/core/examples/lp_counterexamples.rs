//! The `l_p` triangles whose circumradius beats their flat comparison
//! triangle, for a sweep of exponents.

use metric_curv::counterexample::evaluate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>6} {:>14} {:>14} {:>12}  verdict",
        "p", "r_space", "r_model", "defect"
    );
    for p in [1.1, 1.25, 1.5, 1.75, 2.0, 3.0, 4.0, 8.0, f64::INFINITY] {
        let o = evaluate(p)?;
        let verdict = if o.defect > 1e-12 {
            "Curv <= 0 fails"
        } else {
            "no violation"
        };
        println!(
            "{p:>6} {:>14.10} {:>14.10} {:>12.3e}  {verdict}",
            o.r_space, o.r_model, o.defect
        );
    }
    Ok(())
}
