//! Four-point `delta` of cycles and trees, and the relaxed bound
//! `epsilon* <= 2 delta + h`.

use metric_curv::metric::{from_graph, sample_space, GeneratorSpec};
use metric_curv::{delta_four_point, relaxed_npc_bound_check};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in [4, 6, 9, 12] {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
        let cycle = from_graph(&edges)?;
        let r = relaxed_npc_bound_check(&cycle, 1.0)?;
        println!(
            "C{n:<3} delta {:<5} epsilon* {:<5} slack {:<5} witness {:?}",
            r.delta.delta, r.epsilon_star_upper, r.slack, r.delta.witness
        );
    }
    let tree = sample_space(&"tree:n=25,seed=4".parse::<GeneratorSpec>()?)?;
    println!("random tree: delta = {}", delta_four_point(&tree).delta);
    Ok(())
}
