//! Reads a distance matrix, an edge list and a point file from memory,
//! reports what validation finds, and writes one of them back out.
//!
//! ```text
//! cargo run --example validate_and_ingest
//! ```

use metric_curv::io::{
    format_edge_list, parse_edge_list, parse_matrix, parse_points, space_from_edges,
    space_from_points,
};
use metric_curv::metric::{validate_metric, MetricError};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let good = "3\n0,3,4\n3,0,5\n4,5,0\n";
    let space = validate_metric(&parse_matrix(good)?, false)?;
    println!("matrix: n = {}, diameter = {}", space.n(), space.diameter());

    // 1 + 1 < 3 breaks the triangle inequality
    let bad = "3\n0,1,3\n1,0,1\n3,1,0\n";
    match validate_metric(&parse_matrix(bad)?, false) {
        Err(MetricError::Invalid(v)) => {
            for violation in v {
                println!("rejected: {violation}");
            }
        }
        other => println!("unexpected: {other:?}"),
    }

    let edges =
        parse_edge_list("# path with a shortcut\nhome shop 2\nshop park 2\nhome park 3.5\n")?;
    let graph = space_from_edges(&edges)?;
    println!("edge list: d(home, park) = {}", graph.d(0, 2));
    print!("{}", format_edge_list(&graph));

    let pts = space_from_points(parse_points("p inf\nx 0 0\ny 3 1\nz 1 2\n")?)?;
    println!(
        "l_inf points: d(x, y) = {}, d(y, z) = {}",
        pts.d(0, 1),
        pts.d(1, 2)
    );
    Ok(())
}
