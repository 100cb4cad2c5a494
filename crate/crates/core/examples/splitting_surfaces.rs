//! Splitting surfaces by propagation, and spanning central surfaces by
//! backtracking, on pillows, pillow chains and the node gadget.

use std::time::Instant;

use normsurf::detect::{enumerate_spanning_central, find_splitting_surface};
use normsurf::gadgets::{node_gadget, pillow_chain, triangular_pillow, triangular_solid_torus};
use normsurf::normal::surface_complex;

fn main() {
    let pillow = triangular_pillow();
    for x in enumerate_spanning_central(&pillow).unwrap() {
        let info = surface_complex(&pillow, &x).unwrap();
        println!("pillow surface {:?} chi={} connected={}", x.coords(), info.euler, info.connected);
    }
    for (name, tri) in [("torus", triangular_solid_torus()), ("node gadget", node_gadget().0)] {
        let s = find_splitting_surface(&tri).unwrap();
        println!("{name}: splitting surface {}", if s.is_some() { "found" } else { "absent" });
    }
    for k in [1, 10, 50, 100] {
        let chain = pillow_chain(k);
        let start = Instant::now();
        let s = find_splitting_surface(&chain).unwrap();
        println!("pillow chain with {} tetrahedra: {} in {:?}", chain.size(), s.is_some(), start.elapsed());
    }
}
