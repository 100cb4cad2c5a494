//! Edges, vertices and faces of a triangulation, plus vertex links and the
//! 3-manifold test built on them.

use crate::perm::Perm4;
use crate::triangulation::{
    edge_index, face_vertices, Triangulation, TriangulationError, EDGE_VERTICES,
};

/// Union-find with a parity bit per element relative to its root.
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
    rank: Vec<u8>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind { parent: (0..n).collect(), parity: vec![false; n], rank: vec![0; n] }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, par) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= par;
        (root, self.parity[x])
    }

    /// Records that `a` and `b` differ by `flip`. Returns false on a contradiction.
    fn union(&mut self, a: usize, b: usize, flip: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == flip;
        }
        let (ra, rb) = if self.rank[ra] < self.rank[rb] { (rb, ra) } else { (ra, rb) };
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ flip;
        if self.rank[ra] == self.rank[rb] {
            self.rank[ra] += 1;
        }
        true
    }
}

/// Plain union-find, used where orientation does not matter.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }

    /// Dense class ids `0..k` in order of first appearance, and `k`.
    pub(crate) fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut next = 0;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            out[x] = id[r];
        }
        (out, next)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    /// `(tetrahedron, index into EDGE_VERTICES)` for every slot in the class.
    pub slots: Vec<(usize, u8)>,
    pub boundary: bool,
    pub invalid: bool,
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.slots.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClass {
    /// `(tetrahedron, vertex label)` for every slot in the class.
    pub slots: Vec<(usize, u8)>,
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub edges: Vec<EdgeClass>,
    pub vertices: Vec<VertexClass>,
    /// Edge class of each `(tet, edge)` slot.
    pub edge_of: Vec<[usize; 6]>,
    /// Vertex class of each `(tet, vertex)` slot.
    pub vertex_of: Vec<[usize; 4]>,
    pub internal_faces: usize,
    pub boundary_faces: Vec<(usize, u8)>,
}

impl Skeleton {
    pub fn compute(tri: &Triangulation) -> Skeleton {
        let n = tri.size();
        let mut edges = ParityUnionFind::new(6 * n);
        let mut verts = UnionFind::new(4 * n);
        let mut invalid_roots = Vec::new();
        for g in tri.gluings() {
            let fv = face_vertices(g.face);
            for &v in &fv {
                verts.union(4 * g.tet + v as usize, 4 * g.other_tet + g.perm.apply(v) as usize);
            }
            for (i, &a) in fv.iter().enumerate() {
                for &b in &fv[i + 1..] {
                    let (ia, ib) = (g.perm.apply(a), g.perm.apply(b));
                    let flip = ia > ib;
                    let s = 6 * g.tet + edge_index(a, b);
                    let t = 6 * g.other_tet + edge_index(ia, ib);
                    if !edges.union(s, t, flip) {
                        invalid_roots.push(s);
                    }
                }
            }
        }
        let invalid_roots: Vec<usize> = invalid_roots.into_iter().map(|s| edges.find(s).0).collect();

        let boundary_faces = tri.boundary_faces();
        let mut edge_boundary_slot = vec![false; 6 * n];
        let mut vertex_boundary_slot = vec![false; 4 * n];
        for &(t, f) in &boundary_faces {
            let fv = face_vertices(f);
            for (i, &a) in fv.iter().enumerate() {
                vertex_boundary_slot[4 * t + a as usize] = true;
                for &b in &fv[i + 1..] {
                    edge_boundary_slot[6 * t + edge_index(a, b)] = true;
                }
            }
        }

        let mut root_id = vec![usize::MAX; 6 * n];
        let mut edge_classes: Vec<EdgeClass> = Vec::new();
        let mut edge_of = vec![[0usize; 6]; n];
        for s in 0..6 * n {
            let (r, _) = edges.find(s);
            if root_id[r] == usize::MAX {
                root_id[r] = edge_classes.len();
                edge_classes.push(EdgeClass {
                    slots: Vec::new(),
                    boundary: false,
                    invalid: invalid_roots.contains(&r),
                });
            }
            let c = &mut edge_classes[root_id[r]];
            c.slots.push((s / 6, (s % 6) as u8));
            c.boundary |= edge_boundary_slot[s];
            edge_of[s / 6][s % 6] = root_id[r];
        }

        let (vid, count) = verts.classes();
        let mut vertex_classes =
            vec![VertexClass { slots: Vec::new(), boundary: false }; count];
        let mut vertex_of = vec![[0usize; 4]; n];
        for s in 0..4 * n {
            let c = &mut vertex_classes[vid[s]];
            c.slots.push((s / 4, (s % 4) as u8));
            c.boundary |= vertex_boundary_slot[s];
            vertex_of[s / 4][s % 4] = vid[s];
        }

        Skeleton {
            edges: edge_classes,
            vertices: vertex_classes,
            edge_of,
            vertex_of,
            internal_faces: tri.num_gluings(),
            boundary_faces,
        }
    }

    pub fn has_invalid_edge(&self) -> bool {
        self.edges.iter().any(|e| e.invalid)
    }

    /// Sorted list of edge degrees.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.edges.iter().map(EdgeClass::degree).collect();
        d.sort_unstable();
        d
    }

    pub fn edge_degree(&self, tet: usize, edge: usize) -> usize {
        self.edges[self.edge_of[tet][edge]].degree()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkShape {
    Sphere,
    Disc,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLink {
    pub euler: i64,
    pub connected: bool,
    pub closed: bool,
    pub shape: LinkShape,
}

/// Builds the link of every vertex as a triangulated surface: one triangle per
/// tetrahedron corner, glued along the face identifications.
pub fn vertex_links(tri: &Triangulation) -> Result<Vec<VertexLink>, TriangulationError> {
    let skel = Skeleton::compute(tri);
    if skel.has_invalid_edge() {
        return Err(TriangulationError::InvalidEdgePresent);
    }
    let n = tri.size();
    // Link triangles are corners (t, v); their vertices are (t, v, w) for w != v,
    // i.e. the ends of tetrahedron edges at v.
    let corner = |t: usize, v: u8, w: u8| 12 * t + 3 * v as usize + if w < v { w } else { w - 1 } as usize;
    let mut link_verts = UnionFind::new(12 * n);
    let mut link_tris = UnionFind::new(4 * n);
    let mut boundary_sides = vec![0usize; skel.vertices.len()];
    let mut internal_sides = vec![0usize; skel.vertices.len()];
    for t in 0..n {
        for f in 0..4u8 {
            let fv = face_vertices(f);
            match tri.dest(t, f) {
                None => {
                    for &v in &fv {
                        boundary_sides[skel.vertex_of[t][v as usize]] += 1;
                    }
                }
                Some(d) => {
                    let p: Perm4 = d.perm;
                    for &v in &fv {
                        if (t, f) < (d.tet, d.face) {
                            internal_sides[skel.vertex_of[t][v as usize]] += 1;
                        }
                        link_tris.union(4 * t + v as usize, 4 * d.tet + p.apply(v) as usize);
                        for &w in &fv {
                            if w != v {
                                link_verts.union(
                                    corner(t, v, w),
                                    corner(d.tet, p.apply(v), p.apply(w)),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    let (vid, _) = link_verts.classes();
    let (tid, _) = link_tris.classes();
    let mut out = Vec::with_capacity(skel.vertices.len());
    for (ci, class) in skel.vertices.iter().enumerate() {
        let mut verts: Vec<usize> = Vec::new();
        let mut comps: Vec<usize> = Vec::new();
        for &(t, v) in &class.slots {
            comps.push(tid[4 * t + v as usize]);
            for w in (0..4u8).filter(|&w| w != v) {
                verts.push(vid[corner(t, v, w)]);
            }
        }
        verts.sort_unstable();
        verts.dedup();
        comps.sort_unstable();
        comps.dedup();
        let faces = class.slots.len() as i64;
        let edges = (internal_sides[ci] + boundary_sides[ci]) as i64;
        let euler = verts.len() as i64 - edges + faces;
        let connected = comps.len() == 1;
        let closed = boundary_sides[ci] == 0;
        let shape = if closed && connected && euler == 2 {
            LinkShape::Sphere
        } else if !closed && connected && euler == 1 {
            LinkShape::Disc
        } else {
            LinkShape::Other
        };
        out.push(VertexLink { euler, connected, closed, shape });
    }
    Ok(out)
}

/// True iff there are no invalid edges and every link is a sphere (internal
/// vertex) or a disc (boundary vertex).
pub fn is_3manifold(tri: &Triangulation) -> bool {
    let skel = Skeleton::compute(tri);
    let Ok(links) = vertex_links(tri) else {
        return false;
    };
    skel.vertices.iter().zip(&links).all(|(v, l)| {
        if v.boundary {
            l.shape == LinkShape::Disc
        } else {
            l.shape == LinkShape::Sphere
        }
    })
}

/// Endpoints of edge `e` of a tetrahedron.
pub fn edge_vertices(e: usize) -> [u8; 2] {
    EDGE_VERTICES[e]
}
