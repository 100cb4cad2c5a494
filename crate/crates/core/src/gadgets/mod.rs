//! Small building blocks and the node gadget.
//!
//! Tetrahedra are written with vertex letters in label order: the solid
//! torus uses `ABCD`, `EFGH`, `IJKL` and the pillow `ABCD`, `EFGH`.

mod graph;
mod reduction;

use std::fmt;

pub use graph::{
    hamiltonian_oracle, hamiltonian_oracle_bounded, is_hamiltonian_cycle, random_cubic_graph, CubicGraph,
    GraphError, DEFAULT_ORACLE_BOUND,
};
pub use reduction::{
    build_t_g, build_t_g_with, classify_local, extract_cycle, surface_from_cycle, AnnulusGluing, GraphReduction,
    LocalSurface, ReductionError,
};

use crate::perm::Perm4;
use crate::skeleton::Skeleton;
use crate::triangulation::{edge_index, face_vertices, Gluing, LabelKey, Triangulation, TriangulationError};

fn perm(images: [u8; 4]) -> Perm4 {
    Perm4::new(images).expect("valid permutation")
}

/// Three tetrahedra stacked in a cycle: `ABD~GFH`, `EGH~IKJ`, `BCD~IKL`.
pub fn triangular_solid_torus() -> Triangulation {
    Triangulation::from_gluings(
        3,
        [
            Gluing::new(0, 2, 1, 0, perm([2, 1, 0, 3])),
            Gluing::new(1, 1, 2, 3, perm([0, 3, 2, 1])),
            Gluing::new(0, 0, 2, 1, perm([1, 0, 2, 3])),
        ],
    )
    .expect("torus gluings are valid")
}

fn bare_pillow() -> Triangulation {
    let p = perm([0, 1, 3, 2]);
    Triangulation::from_gluings(2, [Gluing::new(0, 2, 1, 3, p), Gluing::new(0, 1, 1, 1, p), Gluing::new(0, 0, 1, 0, p)])
        .expect("pillow gluings are valid")
}

/// Two tetrahedra glued along three faces: `ABD~EFG`, `ACD~EHG`, `BCD~FHG`.
///
/// The boundary is the pair of triangles `ABC` (face 3 of tetrahedron 0)
/// and `EFH` (face 2 of tetrahedron 1), which share the edges
/// `a = AB~EF`, `b = BC~FH` and `c = AC~EH`.
pub fn triangular_pillow() -> Triangulation {
    let mut t = bare_pillow();
    t.set_label(LabelKey::Face(0, 3), "ABC");
    t.set_label(LabelKey::Face(1, 2), "EFH");
    for (tet, x, y, name) in [(0, 0, 1, "a"), (0, 1, 2, "b"), (0, 0, 2, "c"), (1, 0, 1, "a"), (1, 1, 3, "b"), (1, 0, 3, "c")] {
        t.set_label(LabelKey::Edge(tet, edge_index(x, y) as u8), name);
    }
    t
}

/// `k` pillows in a row, the `EFH` face of each glued to the `ABC` face of
/// the next by `E~A`, `F~B`, `H~C`. Pillow `i` occupies tetrahedra `2i`, `2i+1`.
pub fn pillow_chain(k: usize) -> Triangulation {
    assert!(k >= 1, "a chain needs at least one pillow");
    let mut t = bare_pillow();
    for i in 1..k {
        t.append(&bare_pillow());
        t.glue(Gluing::new(2 * i - 1, 2, 2 * i, 3, perm([0, 1, 3, 2]))).expect("fresh faces");
    }
    t
}

/// Replaces the face identification `g` by a pillow placed between the two faces.
///
/// The first slot of `g` meets the pillow's `ABC` face with its face
/// vertices taken in increasing order; the second meets `EFH` through
/// `A~E`, `B~F`, `C~H`. Each normal arc thus passes through the pillow to
/// the same arc `g` used to reach. The pillow occupies the two new last
/// tetrahedra.
pub fn insert_pillow(tri: &Triangulation, g: Gluing) -> Result<Triangulation, TriangulationError> {
    match tri.gluing_at(g.tet, g.face) {
        Some(h) if h == g => {}
        _ => return Err(TriangulationError::NotAGluing { tet: g.tet, face: g.face }),
    }
    let mut out = tri.clone();
    out.unglue(g.tet, g.face)?;
    let p0 = out.append(&bare_pillow());
    let [a, b, c] = face_vertices(g.face);
    let mut sigma = [0u8; 4];
    sigma[a as usize] = 0;
    sigma[b as usize] = 1;
    sigma[c as usize] = 2;
    sigma[g.face as usize] = 3;
    out.glue(Gluing::new(g.tet, g.face, p0, 3, perm(sigma)))?;
    let tau = [g.perm.apply(a), g.perm.apply(b), g.other_face, g.perm.apply(c)];
    out.glue(Gluing::new(p0 + 1, 2, g.other_tet, g.other_face, perm(tau)))?;
    Ok(out)
}

/// Boundary edge kinds of the solid torus, named by edge degree there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Axis,
    Minor,
    Major,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::Axis => "axis",
            EdgeKind::Minor => "minor",
            EdgeKind::Major => "major",
        })
    }
}

/// An axis edge with its assigned direction, in tetrahedron-local labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxisEdge {
    pub tet: usize,
    pub tail: u8,
    pub head: u8,
}

impl AxisEdge {
    pub fn edge(&self) -> usize {
        edge_index(self.tail, self.head)
    }
}

/// A boundary triangle of the gadget with its three edges sorted by kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryTriangle {
    pub tet: usize,
    pub face: u8,
    /// Tetrahedron edge indices of the axis, minor and major edges.
    pub axis: usize,
    pub minor: usize,
    pub major: usize,
}

impl BoundaryTriangle {
    pub fn kind_of(&self, edge: usize) -> Option<EdgeKind> {
        if edge == self.axis {
            Some(EdgeKind::Axis)
        } else if edge == self.minor {
            Some(EdgeKind::Minor)
        } else if edge == self.major {
            Some(EdgeKind::Major)
        } else {
            None
        }
    }
}

/// Annulus `i` of the boundary: `plus` contains axis edge `i+1`, `minus` axis edge `i-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Annulus {
    pub plus: BoundaryTriangle,
    pub minus: BoundaryTriangle,
}

/// Labels on the boundary of the node gadget, indexed `0..3`.
///
/// Axis edge `i` and vertex `i` lie in tetrahedron `i`; annulus `i` is made
/// of boundary triangles from the other two tetrahedra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeGadgetLabels {
    pub axes: [AxisEdge; 3],
    pub annuli: [Annulus; 3],
    /// Vertex classes of the gadget at the boundary vertices.
    pub vertices: [usize; 3],
}

impl NodeGadgetLabels {
    /// Structured text sidecar.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.axes.iter().enumerate() {
            out.push_str(&format!("axis {i} tet {} tail {} head {}\n", a.tet, a.tail, a.head));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("vertex {i} class {v}\n"));
        }
        for (i, an) in self.annuli.iter().enumerate() {
            for (sign, t) in [("+", an.plus), ("-", an.minus)] {
                out.push_str(&format!(
                    "annulus {i} {sign} tet {} face {} axis {} minor {} major {}\n",
                    t.tet, t.face, t.axis, t.minor, t.major
                ));
            }
        }
        out
    }
}

/// Which way the boundary orientation is read when directing axis edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    #[default]
    Standard,
    Reversed,
}

/// The solid torus with a pillow inserted along each of its three internal faces.
pub fn node_gadget() -> (Triangulation, NodeGadgetLabels) {
    node_gadget_with(Convention::Standard)
}

pub fn node_gadget_with(convention: Convention) -> (Triangulation, NodeGadgetLabels) {
    let torus = triangular_solid_torus();
    let mut tri = torus.clone();
    for g in torus.gluings() {
        tri = insert_pillow(&tri, g).expect("torus gluing exists");
    }
    let labels = gadget_labels(&torus, &tri, convention);
    for (i, a) in labels.axes.iter().enumerate() {
        tri.set_label(LabelKey::Edge(a.tet, a.edge() as u8), format!("axis{i}"));
    }
    for (i, an) in labels.annuli.iter().enumerate() {
        for (sign, t) in [("+", an.plus), ("-", an.minus)] {
            tri.set_label(LabelKey::Face(t.tet, t.face), format!("T{sign}{i}"));
            tri.set_label(LabelKey::Edge(t.tet, t.minor as u8), "minor");
            tri.set_label(LabelKey::Edge(t.tet, t.major as u8), "major");
        }
    }
    (tri, labels)
}

fn gadget_labels(torus: &Triangulation, gadget: &Triangulation, convention: Convention) -> NodeGadgetLabels {
    let sk = Skeleton::compute(torus);
    let kind = |t: usize, e: usize| match sk.edge_degree(t, e) {
        1 => EdgeKind::Axis,
        2 => EdgeKind::Minor,
        3 => EdgeKind::Major,
        d => panic!("unexpected boundary edge degree {d}"),
    };

    let triangle = |t: usize, f: u8| {
        let [x, y, z] = face_vertices(f);
        let mut tri = BoundaryTriangle { tet: t, face: f, axis: 6, minor: 6, major: 6 };
        for e in [edge_index(x, y), edge_index(y, z), edge_index(x, z)] {
            match kind(t, e) {
                EdgeKind::Axis => tri.axis = e,
                EdgeKind::Minor => tri.minor = e,
                EdgeKind::Major => tri.major = e,
            }
        }
        assert!(tri.axis < 6 && tri.minor < 6 && tri.major < 6, "boundary triangle lacks an edge kind");
        tri
    };
    let boundary: Vec<BoundaryTriangle> = torus.boundary_faces().into_iter().map(|(t, f)| triangle(t, f)).collect();

    // Annulus i pairs the two triangles sharing minor and major edges and avoiding tetrahedron i.
    let mut annulus_faces: [Vec<BoundaryTriangle>; 3] = Default::default();
    for (k, a) in boundary.iter().enumerate() {
        for b in &boundary[k + 1..] {
            if a.tet != b.tet
                && sk.edge_of[a.tet][a.minor] == sk.edge_of[b.tet][b.minor]
                && sk.edge_of[a.tet][a.major] == sk.edge_of[b.tet][b.major]
            {
                let excluded = 3 - a.tet - b.tet;
                annulus_faces[excluded].push(*a);
                annulus_faces[excluded].push(*b);
            }
        }
    }
    let annuli: [Annulus; 3] = std::array::from_fn(|i| {
        let faces = &annulus_faces[i];
        assert_eq!(faces.len(), 2, "annulus {i} not found");
        let plus = *faces.iter().find(|t| t.tet == (i + 1) % 3).unwrap();
        let minus = *faces.iter().find(|t| t.tet == (i + 2) % 3).unwrap();
        Annulus { plus, minus }
    });

    // Direct axis edge i so that the triangle from annulus i+1 lies on its
    // left, reading each boundary triangle's induced orientation as
    // counterclockwise from outside.
    let signs = gadget.orientation().expect("connected").expect("gadget is orientable");
    let axes: [AxisEdge; 3] = std::array::from_fn(|i| {
        let left = annuli[(i + 1) % 3].minus;
        let right = annuli[(i + 2) % 3].plus;
        assert_eq!((left.tet, right.tet), (i, i));
        let [a, b] = crate::triangulation::EDGE_VERTICES[left.axis];
        let along_left = boundary_runs(signs[i], left.face, a, b);
        let along_right = boundary_runs(signs[i], right.face, a, b);
        assert_ne!(along_left, along_right, "adjacent triangles induce opposite directions");
        let forward = along_left == (convention == Convention::Standard);
        let (tail, head) = if forward { (a, b) } else { (b, a) };
        AxisEdge { tet: i, tail, head }
    });

    let gsk = Skeleton::compute(gadget);
    let vertices = std::array::from_fn(|i| {
        let a = axes[i];
        assert_eq!(gsk.vertex_of[i][a.tail as usize], gsk.vertex_of[i][a.head as usize], "axis edges are loops");
        gsk.vertex_of[i][a.tail as usize]
    });
    NodeGadgetLabels { axes, annuli, vertices }
}

/// Whether the induced boundary orientation of face `f` of a tetrahedron
/// with orientation `sign` traverses the edge from `a` to `b`.
pub(crate) fn boundary_runs(sign: i8, f: u8, a: u8, b: u8) -> bool {
    let [x, y, z] = face_vertices(f);
    let ascending = [(x, y), (y, z), (z, x)].contains(&(a, b));
    let positive = (sign > 0) == f.is_multiple_of(2);
    ascending == positive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skeleton::{vertex_links, LinkShape};

    #[test]
    fn torus_skeleton() {
        let t = triangular_solid_torus();
        let sk = Skeleton::compute(&t);
        assert_eq!(sk.vertices.len(), 3);
        assert!(sk.vertices.iter().all(|v| v.boundary));
        let mut d = sk.degree_multiset();
        d.sort();
        assert_eq!(d, vec![1, 1, 1, 2, 2, 2, 3, 3, 3]);
        assert_eq!(t.boundary_faces().len(), 6);
    }

    #[test]
    fn pillow_skeleton() {
        let t = triangular_pillow();
        let sk = Skeleton::compute(&t);
        assert_eq!(sk.vertices.len(), 4);
        assert_eq!(sk.vertices.iter().filter(|v| v.boundary).count(), 3);
        let links = vertex_links(&t).unwrap();
        assert_eq!(links.iter().filter(|l| l.shape == LinkShape::Sphere).count(), 1);
        assert_eq!(links.iter().filter(|l| l.shape == LinkShape::Disc).count(), 3);
        // Labelled boundary edges really are identified.
        for (x, y) in [(0u8, 1u8), (1, 2), (0, 2)] {
            let e0 = edge_index(x, y);
            let name = t.label(&LabelKey::Edge(0, e0 as u8)).unwrap();
            let partner = (0..6).find(|&e| t.label(&LabelKey::Edge(1, e as u8)) == Some(name)).unwrap();
            assert_eq!(sk.edge_of[0][e0], sk.edge_of[1][partner]);
        }
    }

    #[test]
    fn insertion_counts() {
        let t = triangular_solid_torus();
        let g = t.gluings()[0];
        let u = insert_pillow(&t, g).unwrap();
        assert_eq!(u.size(), 5);
        assert_eq!(u.num_gluings(), 3 - 1 + 3 + 2);
        let bogus = Gluing::new(0, 3, 1, 3, Perm4::IDENTITY);
        assert!(matches!(insert_pillow(&t, bogus), Err(TriangulationError::NotAGluing { .. })));
    }

    #[test]
    fn node_gadget_shape() {
        let (t, labels) = node_gadget();
        assert_eq!(t.size(), 9);
        let sk = Skeleton::compute(&t);
        assert_eq!(sk.vertices.iter().filter(|v| !v.boundary).count(), 3);
        assert_eq!(sk.edges.iter().filter(|e| !e.boundary).count(), 9);
        assert_eq!(t.boundary_faces().len(), 6);
        for (i, an) in labels.annuli.iter().enumerate() {
            assert_eq!(an.plus.tet, (i + 1) % 3);
            assert_eq!(an.minus.tet, (i + 2) % 3);
            assert_eq!(an.plus.axis, labels.axes[(i + 1) % 3].edge());
            assert_eq!(an.minus.axis, labels.axes[(i + 2) % 3].edge());
        }
        let mut v = labels.vertices.to_vec();
        v.sort();
        v.dedup();
        assert_eq!(v.len(), 3);
    }
}
