//! Midpoint defects and the local defect map of a graph with one long
//! shortcut.

use metric_curv::certifier::{local_defect_map, midpoint_defect};
use metric_curv::metric::from_graph;
use metric_curv::model::Kappa;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a path 0..=5 with a chord between its ends
    let mut edges: Vec<_> = (0..5).map(|i| (i, i + 1, 1.0)).collect();
    edges.push((0, 5, 2.0));
    let g = from_graph(&edges)?;

    let m = midpoint_defect(&g);
    println!("largest midpoint defect {} at {:?}", m.max, m.argmax);

    for radius in [1.0, 2.0, 3.0] {
        let map = local_defect_map(&g, radius, Kappa::ZERO)?;
        println!("R = {radius}: {map:?}");
    }
    Ok(())
}
