//! Triangulations `T_G` assembled from node gadgets along the arcs of a cubic graph.

use std::fmt::Write as _;
use std::sync::OnceLock;

use thiserror::Error;

use super::graph::{is_hamiltonian_cycle, CubicGraph, GraphError};
use super::{node_gadget, node_gadget_with, AxisEdge, BoundaryTriangle, Convention, NodeGadgetLabels};
use crate::detect::{enumerate_connected_spanning_central, verify_certificate, DEFAULT_BUDGET};
use crate::disc::DiscType;
use crate::normal::{surface_complex, NormalVector};
use crate::perm::Perm4;
use crate::triangulation::{face_vertices, Gluing, LabelKey, Triangulation};

/// Tetrahedra per node gadget.
pub const GADGET_SIZE: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("node sequence is not a Hamiltonian cycle")]
    NotHamiltonian,
    #[error("vector is not a connected spanning central surface")]
    CertificateInvalid,
    #[error("surface meets node gadget {0} in a Mobius strip")]
    LocalMoebiusFound(usize),
    #[error("surface meets node gadget {0} in neither a tube nor a Mobius strip")]
    UnexpectedLocalSurface(usize),
    #[error("no consistent choice of tubes along the cycle")]
    NoConsistentSurface,
}

/// How one arc of the graph was realised.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusGluing {
    pub node: usize,
    pub annulus: usize,
    pub other_node: usize,
    pub other_annulus: usize,
    /// `T+` of the first annulus to `T-` of the second, then `T-` to `T+`.
    pub gluings: [Gluing; 2],
}

#[derive(Clone, Debug)]
pub struct GraphReduction {
    pub graph: CubicGraph,
    pub tri: Triangulation,
    pub labels: NodeGadgetLabels,
    /// One record per arc, in the graph's sorted arc order.
    pub arcs: Vec<AnnulusGluing>,
    /// For each node and annulus, the index of the arc glued there.
    pub annulus_arc: Vec<[usize; 3]>,
}

impl GraphReduction {
    /// First tetrahedron of the gadget for `node`.
    pub fn offset(node: usize) -> usize {
        GADGET_SIZE * node
    }

    /// Label sidecar: gadget labels followed by one line per glued triangle pair.
    pub fn labels_text(&self) -> String {
        let mut out = String::from("gadget\n");
        out.push_str(&self.labels.to_text());
        writeln!(out, "nodes {} gadget_size {GADGET_SIZE}", self.graph.nodes()).unwrap();
        for (k, r) in self.arcs.iter().enumerate() {
            writeln!(out, "arc {k} node {} annulus {} node {} annulus {}", r.node, r.annulus, r.other_node, r.other_annulus)
                .unwrap();
            for g in r.gluings {
                writeln!(out, "  glue {} {} {} {} {}", g.tet, g.face, g.other_tet, g.other_face, g.perm).unwrap();
            }
        }
        out
    }
}

fn annulus_perm(from: &BoundaryTriangle, from_axis: &AxisEdge, to: &BoundaryTriangle, to_axis: &AxisEdge, flip: bool) -> Perm4 {
    let third = |t: &BoundaryTriangle, a: &AxisEdge| {
        face_vertices(t.face).into_iter().find(|&v| v != a.tail && v != a.head).unwrap()
    };
    let (tail, head) = if flip { (to_axis.head, to_axis.tail) } else { (to_axis.tail, to_axis.head) };
    let mut images = [0u8; 4];
    images[from_axis.tail as usize] = tail;
    images[from_axis.head as usize] = head;
    images[third(from, from_axis) as usize] = third(to, to_axis);
    images[from.face as usize] = to.face;
    Perm4::new(images).expect("bijective")
}

pub fn build_t_g(g: &CubicGraph) -> GraphReduction {
    build_t_g_with(g, Convention::Standard, None)
}

/// `T_G` under a given direction convention. `flipped_arc` reverses the
/// axis identification on the first triangle pair of one arc, which breaks
/// the construction and exists for testing.
pub fn build_t_g_with(g: &CubicGraph, convention: Convention, flipped_arc: Option<usize>) -> GraphReduction {
    let (gadget, labels) = node_gadget_with(convention);
    let n = g.nodes();
    let mut tri = gadget.clone();
    for _ in 1..n {
        tri.append(&gadget);
    }
    for k in 0..n {
        tri.set_label(LabelKey::Tet(GraphReduction::offset(k)), format!("node{k}"));
    }
    let mut next_annulus = vec![0usize; n];
    let mut annulus_arc = vec![[usize::MAX; 3]; n];
    let mut arcs = Vec::with_capacity(g.arcs().len());
    let ax = |i: usize| labels.axes[i % 3];
    for (idx, &(u, v)) in g.arcs().iter().enumerate() {
        let i = next_annulus[u];
        next_annulus[u] += 1;
        let j = next_annulus[v];
        next_annulus[v] += 1;
        annulus_arc[u][i] = idx;
        annulus_arc[v][j] = idx;
        let (ou, ov) = (GraphReduction::offset(u), GraphReduction::offset(v));
        let (a, b) = (labels.annuli[i], labels.annuli[j]);
        let p1 = annulus_perm(&a.plus, &ax(i + 1), &b.minus, &ax(j + 2), flipped_arc == Some(idx));
        let p2 = annulus_perm(&a.minus, &ax(i + 2), &b.plus, &ax(j + 1), false);
        let g1 = Gluing::new(ou + a.plus.tet, a.plus.face, ov + b.minus.tet, b.minus.face, p1);
        let g2 = Gluing::new(ou + a.minus.tet, a.minus.face, ov + b.plus.tet, b.plus.face, p2);
        tri.glue(g1).expect("annulus triangles are unglued");
        tri.glue(g2).expect("annulus triangles are unglued");
        arcs.push(AnnulusGluing { node: u, annulus: i, other_node: v, other_annulus: j, gluings: [g1, g2] });
    }
    GraphReduction { graph: g.clone(), tri, labels, arcs, annulus_arc }
}

/// How a connected spanning central surface of the node gadget looks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalSurface {
    /// An annulus meeting the two listed boundary annuli (ascending).
    Tube(usize, usize),
    Moebius,
}

struct Template {
    discs: Vec<DiscType>,
    kind: LocalSurface,
}

fn annuli_met(labels: &NodeGadgetLabels, discs: &[DiscType]) -> Vec<usize> {
    (0..3)
        .filter(|&i| {
            let a = labels.annuli[i];
            [a.plus, a.minus].iter().any(|t| discs[t.tet].arc_in_face(t.face).is_some())
        })
        .collect()
}

fn templates() -> &'static [Template] {
    static CELL: OnceLock<Vec<Template>> = OnceLock::new();
    CELL.get_or_init(|| {
        let (tri, labels) = node_gadget();
        let (found, _) = enumerate_connected_spanning_central(&tri, DEFAULT_BUDGET).expect("gadget search is small");
        found
            .into_iter()
            .map(|x| {
                let info = surface_complex(&tri, &x).expect("admissible");
                let discs = x.one_disc_per_tet().unwrap();
                let met = annuli_met(&labels, &discs);
                let kind = match (info.orientable, met.as_slice()) {
                    (true, &[a, b]) => LocalSurface::Tube(a, b),
                    (false, _) => LocalSurface::Moebius,
                    _ => panic!("orientable gadget surface meeting annuli {met:?}"),
                };
                Template { discs, kind }
            })
            .collect()
    })
}

/// Identifies the restriction of a surface to one gadget, if it is one of the
/// gadget's connected spanning central surfaces.
pub fn classify_local(discs: &[DiscType]) -> Option<LocalSurface> {
    templates().iter().find(|t| t.discs == discs).map(|t| t.kind)
}

/// Assembles tubes along a Hamiltonian cycle into a connected spanning
/// central surface of `T_G`.
pub fn surface_from_cycle(r: &GraphReduction, cycle: &[usize]) -> Result<NormalVector, ReductionError> {
    let g = &r.graph;
    let n = g.nodes();
    if !is_hamiltonian_cycle(g, cycle) {
        return Err(ReductionError::NotHamiltonian);
    }
    // Arc used between consecutive cycle nodes.
    let mut used = vec![false; r.arcs.len()];
    let mut step_arc = Vec::with_capacity(n);
    for m in 0..n {
        let (u, v) = (cycle[m], cycle[(m + 1) % n]);
        let idx = (0..r.arcs.len())
            .find(|&k| {
                let a = &r.arcs[k];
                !used[k] && ((a.node, a.other_node) == (u, v) || (a.node, a.other_node) == (v, u))
            })
            .ok_or(ReductionError::NotHamiltonian)?;
        used[idx] = true;
        step_arc.push(idx);
    }
    let annulus_on = |node: usize, arc: usize| (0..3).find(|&i| r.annulus_arc[node][i] == arc).unwrap();
    let mut wanted = vec![(0, 0); n];
    for m in 0..n {
        let node = cycle[m];
        let a = annulus_on(node, step_arc[m]);
        let b = annulus_on(node, step_arc[(m + n - 1) % n]);
        wanted[node] = (a.min(b), a.max(b));
    }
    let candidates: Vec<Vec<&Template>> = (0..n)
        .map(|k| templates().iter().filter(|t| t.kind == LocalSurface::Tube(wanted[k].0, wanted[k].1)).collect())
        .collect();

    let mut discs: Vec<Option<DiscType>> = vec![None; r.tri.size()];
    if !place(r, cycle, &candidates, 0, &mut discs) {
        return Err(ReductionError::NoConsistentSurface);
    }
    let discs: Vec<DiscType> = discs.into_iter().map(Option::unwrap).collect();
    let x = NormalVector::from_discs(&discs);
    if !verify_certificate(&r.tri, &x) {
        return Err(ReductionError::NoConsistentSurface);
    }
    Ok(x)
}

fn place(
    r: &GraphReduction,
    cycle: &[usize],
    candidates: &[Vec<&Template>],
    m: usize,
    discs: &mut Vec<Option<DiscType>>,
) -> bool {
    if m == cycle.len() {
        return true;
    }
    let node = cycle[m];
    let off = GraphReduction::offset(node);
    for t in &candidates[node] {
        for (i, &d) in t.discs.iter().enumerate() {
            discs[off + i] = Some(d);
        }
        let consistent = (off..off + GADGET_SIZE).all(|tet| {
            let d = discs[tet].unwrap();
            (0..4u8).all(|f| match r.tri.dest(tet, f) {
                Some(dest) => match discs[dest.tet] {
                    Some(e) => d.arc_in_face(f).map(|v| dest.perm.apply(v)) == e.arc_in_face(dest.face),
                    None => true,
                },
                None => true,
            })
        });
        if consistent && place(r, cycle, candidates, m + 1, discs) {
            return true;
        }
    }
    for i in 0..GADGET_SIZE {
        discs[off + i] = None;
    }
    false
}

/// Reads the Hamiltonian cycle off a connected spanning central surface of
/// `T_G`, starting at node 0.
pub fn extract_cycle(r: &GraphReduction, x: &NormalVector) -> Result<Vec<usize>, ReductionError> {
    if !verify_certificate(&r.tri, x) {
        return Err(ReductionError::CertificateInvalid);
    }
    let discs = x.one_disc_per_tet().unwrap();
    let n = r.graph.nodes();
    let mut chosen = Vec::with_capacity(n);
    for k in 0..n {
        let off = GraphReduction::offset(k);
        match classify_local(&discs[off..off + GADGET_SIZE]) {
            Some(LocalSurface::Tube(a, b)) => chosen.push([r.annulus_arc[k][a], r.annulus_arc[k][b]]),
            Some(LocalSurface::Moebius) => return Err(ReductionError::LocalMoebiusFound(k)),
            None => return Err(ReductionError::UnexpectedLocalSurface(k)),
        }
    }
    let mut cycle = vec![0usize];
    let mut arc = chosen[0][0];
    while cycle.len() < n {
        let here = *cycle.last().unwrap();
        let rec = &r.arcs[arc];
        let next = if rec.node == here { rec.other_node } else { rec.node };
        if !chosen[next].contains(&arc) {
            return Err(ReductionError::CertificateInvalid);
        }
        cycle.push(next);
        arc = if chosen[next][0] == arc { chosen[next][1] } else { chosen[next][0] };
    }
    if !is_hamiltonian_cycle(&r.graph, &cycle) {
        return Err(ReductionError::CertificateInvalid);
    }
    Ok(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skeleton::{vertex_links, LinkShape, Skeleton};

    fn global_checks(t: &Triangulation) -> bool {
        !Skeleton::compute(t).has_invalid_edge()
            && t.is_closed()
            && t.is_orientable().unwrap()
            && vertex_links(t).map(|l| l.iter().all(|v| v.shape == LinkShape::Sphere)).unwrap_or(false)
    }

    #[test]
    fn gadget_templates() {
        let t = templates();
        assert_eq!(t.len(), 32);
        assert_eq!(t.iter().filter(|t| t.kind == LocalSurface::Moebius).count(), 8);
        for pair in [(0, 1), (0, 2), (1, 2)] {
            assert_eq!(t.iter().filter(|t| t.kind == LocalSurface::Tube(pair.0, pair.1)).count(), 8);
        }
    }

    #[test]
    fn k4_reduction_is_a_closed_orientable_manifold() {
        let r = build_t_g(&CubicGraph::k4());
        assert_eq!(r.tri.size(), 36);
        assert!(global_checks(&r.tri));
        let r = build_t_g_with(&CubicGraph::k4(), Convention::Reversed, None);
        assert!(global_checks(&r.tri));
        let r = build_t_g_with(&CubicGraph::k4(), Convention::Standard, Some(0));
        assert!(!global_checks(&r.tri));
    }

    #[test]
    fn cycle_round_trip() {
        let r = build_t_g(&CubicGraph::k4());
        let x = surface_from_cycle(&r, &[0, 1, 2, 3]).unwrap();
        let c = extract_cycle(&r, &x).unwrap();
        assert!(c == vec![0, 1, 2, 3] || c == vec![0, 3, 2, 1]);
        assert_eq!(surface_from_cycle(&r, &[0, 1, 2]), Err(ReductionError::NotHamiltonian));
    }
}
