//! The triangular pillow, the triangular solid torus and the node gadget,
//! with their skeleta and vertex links.

use normsurf::gadgets::{node_gadget, triangular_pillow, triangular_solid_torus};
use normsurf::{vertex_links, Skeleton, Triangulation};

fn report(name: &str, tri: &Triangulation) {
    let skel = Skeleton::compute(tri);
    let boundary_degrees: Vec<usize> = {
        let mut d: Vec<usize> = skel.edges.iter().filter(|e| e.boundary).map(|e| e.degree()).collect();
        d.sort_unstable();
        d
    };
    let links = vertex_links(tri).expect("valid triangulation");
    println!("{name}: {} tetrahedra, {} gluings", tri.size(), tri.num_gluings());
    println!(
        "  vertices {} ({} boundary), edges {}, boundary faces {}",
        skel.vertices.len(),
        skel.vertices.iter().filter(|v| v.boundary).count(),
        skel.edges.len(),
        skel.boundary_faces.len()
    );
    println!("  boundary edge degrees {boundary_degrees:?}");
    println!("  vertex links {:?}", links.iter().map(|l| l.shape).collect::<Vec<_>>());
}

fn main() {
    report("pillow", &triangular_pillow());
    report("solid torus", &triangular_solid_torus());
    let (gadget, labels) = node_gadget();
    report("node gadget", &gadget);
    print!("{}", labels.to_text());
}
