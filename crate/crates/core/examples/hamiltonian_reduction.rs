//! Builds `T_G` for a few cubic graphs and compares the surface search with
//! a direct Hamiltonian cycle search.

use std::time::Instant;

use normsurf::detect::{find_connected_spanning_central_with, DEFAULT_BUDGET};
use normsurf::gadgets::{build_t_g, extract_cycle, hamiltonian_oracle, CubicGraph};

fn main() {
    let graphs = [
        ("K4", CubicGraph::k4()),
        ("prism", CubicGraph::prism()),
        ("K33", CubicGraph::k33()),
        ("Petersen", CubicGraph::petersen()),
    ];
    for (name, g) in graphs {
        let r = build_t_g(&g);
        let start = Instant::now();
        let (found, stats) = find_connected_spanning_central_with(&r.tri, DEFAULT_BUDGET).expect("within budget");
        let elapsed = start.elapsed();
        let oracle = hamiltonian_oracle(&g).unwrap();
        println!(
            "{name}: tetrahedra={} surface={} hamiltonian={} nodes={} time={:.3}s",
            r.tri.size(),
            found.is_some(),
            oracle.is_some(),
            stats.nodes,
            elapsed.as_secs_f64()
        );
        if let Some(x) = found {
            println!("  cycle {:?}", extract_cycle(&r, &x).unwrap());
        }
    }
}
