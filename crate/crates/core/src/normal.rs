//! Standard normal coordinates over a triangulation.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::disc::{arc_endpoints, DiscType};
use crate::skeleton::{Skeleton, UnionFind};
use crate::triangulation::{face_vertices, Gluing, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalError {
    #[error("vector has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector is not admissible")]
    NotAdmissible,
    #[error("only {{0,1}} vectors with one disc per tetrahedron are supported")]
    UnsupportedVector,
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A vector of 7 coordinates per tetrahedron: `q1 q2 q3 t0 t1 t2 t3`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalVector {
    coords: Vec<i64>,
}

impl NormalVector {
    pub fn zeros(tets: usize) -> NormalVector {
        NormalVector { coords: vec![0; 7 * tets] }
    }

    /// Panics unless the length is a multiple of 7.
    pub fn from_coords(coords: Vec<i64>) -> NormalVector {
        assert_eq!(coords.len() % 7, 0, "normal vectors have 7 coordinates per tetrahedron");
        NormalVector { coords }
    }

    /// The `{0,1}` vector with exactly the given disc in each tetrahedron.
    pub fn from_discs(discs: &[DiscType]) -> NormalVector {
        let mut v = NormalVector::zeros(discs.len());
        for (t, d) in discs.iter().enumerate() {
            v.coords[7 * t + d.offset()] = 1;
        }
        v
    }

    pub fn tets(&self) -> usize {
        self.coords.len() / 7
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    #[inline]
    pub fn get(&self, tet: usize, disc: DiscType) -> i64 {
        self.coords[7 * tet + disc.offset()]
    }

    pub fn set(&mut self, tet: usize, disc: DiscType, value: i64) {
        self.coords[7 * tet + disc.offset()] = value;
    }

    /// The disc in each tetrahedron, if this is a `{0,1}` vector with exactly one disc per tetrahedron.
    pub fn one_disc_per_tet(&self) -> Option<Vec<DiscType>> {
        let mut out = Vec::with_capacity(self.tets());
        for t in 0..self.tets() {
            let block = &self.coords[7 * t..7 * t + 7];
            if block.iter().any(|&c| c != 0 && c != 1) || block.iter().sum::<i64>() != 1 {
                return None;
            }
            out.push(DiscType::from_offset(block.iter().position(|&c| c == 1).unwrap()));
        }
        Some(out)
    }

    pub fn is_all_quad(&self) -> bool {
        (0..self.tets()).all(|t| self.coords[7 * t + 3..7 * t + 7].iter().all(|&c| c == 0))
    }

    /// Restriction to a set of tetrahedra, in the given order.
    pub fn restrict(&self, tets: &[usize]) -> NormalVector {
        let mut coords = Vec::with_capacity(7 * tets.len());
        for &t in tets {
            coords.extend_from_slice(&self.coords[7 * t..7 * t + 7]);
        }
        NormalVector { coords }
    }

    /// One line of 7 integers per tetrahedron.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for block in self.coords.chunks(7) {
            let line: Vec<String> = block.iter().map(i64::to_string).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }
}

impl fmt::Display for NormalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for NormalVector {
    type Err = NormalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut coords = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let vals: Result<Vec<i64>, _> = text.split_whitespace().map(str::parse).collect();
            let vals = vals.map_err(|_| NormalError::Parse { line: i + 1, message: "bad integer".into() })?;
            if vals.len() != 7 {
                return Err(NormalError::Parse {
                    line: i + 1,
                    message: format!("expected 7 coordinates, found {}", vals.len()),
                });
            }
            coords.extend(vals);
        }
        Ok(NormalVector { coords })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowOrigin {
    /// Arcs cutting off vertex `arc_vertex` of `gluing.face` (parallel to the opposite edge).
    Gluing { gluing: Gluing, arc_vertex: u8 },
    Abstract,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingRow {
    /// Sparse `(coordinate, coefficient)` pairs with non-zero coefficients, sorted by coordinate.
    pub coeffs: Vec<(usize, i64)>,
    pub origin: RowOrigin,
}

impl MatchingRow {
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, i64)>, origin: RowOrigin) -> MatchingRow {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (i, c) in terms {
            *acc.entry(i).or_default() += c;
        }
        MatchingRow { coeffs: acc.into_iter().filter(|&(_, c)| c != 0).collect(), origin }
    }

    pub fn eval(&self, x: &[i64]) -> i64 {
        self.coeffs.iter().map(|&(i, c)| c * x[i]).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingSystem {
    pub dim: usize,
    pub rows: Vec<MatchingRow>,
}

impl MatchingSystem {
    /// `row col coeff` triples, one per line.
    pub fn to_triples(&self) -> String {
        let mut out = String::new();
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in &row.coeffs {
                writeln!(out, "{r} {c} {v}").unwrap();
            }
        }
        out
    }

    pub fn is_satisfied(&self, x: &[i64]) -> bool {
        self.rows.iter().all(|r| r.eval(x) == 0)
    }
}

/// Coordinates counting arcs that cut off `v` in face `f` of `tet`.
fn arc_terms(tet: usize, f: u8, v: u8) -> [usize; 2] {
    [7 * tet + DiscType::triangle(v).offset(), 7 * tet + DiscType::quad_pairing(f, v).offset()]
}

/// Three matching equations per gluing, one per arc type in the glued face.
pub fn matching_system(tri: &Triangulation) -> MatchingSystem {
    let mut rows = Vec::with_capacity(3 * tri.num_gluings());
    for g in tri.gluings() {
        for v in face_vertices(g.face) {
            let lhs = arc_terms(g.tet, g.face, v);
            let rhs = arc_terms(g.other_tet, g.other_face, g.perm.apply(v));
            let terms = lhs.iter().map(|&i| (i, 1)).chain(rhs.iter().map(|&i| (i, -1)));
            rows.push(MatchingRow::from_terms(terms, RowOrigin::Gluing { gluing: g, arc_vertex: v }));
        }
    }
    MatchingSystem { dim: 7 * tri.size(), rows }
}

fn check_dim(tri: &Triangulation, x: &NormalVector) -> Result<(), NormalError> {
    if x.coords.len() != 7 * tri.size() {
        return Err(NormalError::DimensionMismatch { expected: 7 * tri.size(), found: x.coords.len() });
    }
    Ok(())
}

pub fn satisfies_quad_constraints(x: &NormalVector) -> bool {
    (0..x.tets()).all(|t| x.coords[7 * t..7 * t + 3].iter().filter(|&&c| c != 0).count() <= 1)
}

/// Non-negative, satisfies every matching equation, and at most one
/// non-zero quadrilateral coordinate per tetrahedron.
pub fn is_admissible(tri: &Triangulation, x: &NormalVector) -> Result<bool, NormalError> {
    check_dim(tri, x)?;
    Ok(x.coords.iter().all(|&c| c >= 0)
        && satisfies_quad_constraints(x)
        && matching_system(tri).is_satisfied(&x.coords))
}

/// A linear functional on normal coordinates whose value is the Euler
/// characteristic of the surface.
///
/// Each disc contributes `1 - Σ_sides 1/ι + Σ_corners 1/deg`, where `ι` is 2
/// for a side on an internal face and 1 on a boundary face, and `deg` is the
/// degree of the triangulation edge carrying the corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerFunctional {
    weights: Vec<BigRational>,
    scale: BigInt,
}

impl EulerFunctional {
    pub fn new(tri: &Triangulation) -> EulerFunctional {
        let skel = Skeleton::compute(tri);
        let mut weights = Vec::with_capacity(7 * tri.size());
        let mut scale = BigInt::from(2);
        for t in 0..tri.size() {
            for d in DiscType::ALL {
                let mut w = BigRational::one();
                for f in 0..4u8 {
                    if d.arc_in_face(f).is_some() {
                        let iota = if tri.dest(t, f).is_some() { 2 } else { 1 };
                        w -= BigRational::new(BigInt::one(), BigInt::from(iota));
                    }
                }
                for e in d.corners() {
                    let deg = BigInt::from(skel.edge_degree(t, e));
                    scale = scale.lcm(&deg);
                    w += BigRational::new(BigInt::one(), deg);
                }
                weights.push(w);
            }
        }
        EulerFunctional { weights, scale }
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// Positive integer `L` with `L * weight` integral for every weight.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// `L * weights`, all integers.
    pub fn scaled_weights(&self) -> Vec<BigInt> {
        self.weights
            .iter()
            .map(|w| {
                let s = w * BigRational::from_integer(self.scale.clone());
                debug_assert!(s.is_integer());
                s.to_integer()
            })
            .collect()
    }

    pub fn value(&self, x: &NormalVector) -> BigRational {
        self.weights
            .iter()
            .zip(&x.coords)
            .filter(|(_, &c)| c != 0)
            .map(|(w, &c)| w * BigRational::from_integer(BigInt::from(c)))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn value_big(&self, x: &[BigInt]) -> BigRational {
        self.weights
            .iter()
            .zip(x)
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| w * BigRational::from_integer(c.clone()))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

/// Euler characteristic of the surface realized by an admissible vector.
pub fn euler_value(
    tri: &Triangulation,
    functional: &EulerFunctional,
    x: &NormalVector,
) -> Result<BigRational, NormalError> {
    if !is_admissible(tri, x)? {
        return Err(NormalError::NotAdmissible);
    }
    Ok(functional.value(x))
}

/// Link of vertex class `v`: one triangle at every tetrahedron corner in the class.
pub fn vertex_link_vector(tri: &Triangulation, v: usize) -> Result<NormalVector, NormalError> {
    let skel = Skeleton::compute(tri);
    vertex_link_vector_in(&skel, tri.size(), v)
}

pub(crate) fn vertex_link_vector_in(skel: &Skeleton, n: usize, v: usize) -> Result<NormalVector, NormalError> {
    let class = skel.vertices.get(v).ok_or(NormalError::NoSuchVertex(v))?;
    let mut x = NormalVector::zeros(n);
    for &(t, i) in &class.slots {
        x.coords[7 * t + DiscType::triangle(i).offset()] += 1;
    }
    Ok(x)
}

/// A union of vertex links: no quadrilaterals, and triangle coordinates
/// constant across each vertex class. The zero vector counts as trivial.
pub fn is_trivial(tri: &Triangulation, x: &NormalVector) -> Result<bool, NormalError> {
    if !is_admissible(tri, x)? {
        return Err(NormalError::NotAdmissible);
    }
    if (0..x.tets()).any(|t| x.coords[7 * t..7 * t + 3].iter().any(|&c| c != 0)) {
        return Ok(false);
    }
    let skel = Skeleton::compute(tri);
    Ok(skel.vertices.iter().all(|class| {
        let (t0, i0) = class.slots[0];
        let c0 = x.coords[7 * t0 + 3 + i0 as usize];
        class.slots.iter().all(|&(t, i)| x.coords[7 * t + 3 + i as usize] == c0)
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceInfo {
    pub euler: i64,
    pub orientable: bool,
    pub boundary_components: usize,
    pub connected: bool,
}

/// Cell structure of a surface with exactly one disc in each tetrahedron.
pub(crate) struct DiscComplex {
    pub components: usize,
    pub euler: i64,
    pub orientable: bool,
    pub boundary_components: usize,
}

impl DiscComplex {
    pub(crate) fn build(tri: &Triangulation, discs: &[DiscType]) -> DiscComplex {
        let n = tri.size();
        // Corners are identified by (tet, edge); one disc per tetrahedron.
        let mut corner_uf = UnionFind::new(6 * n);
        let mut disc_uf = UnionFind::new(n);
        // Parity union-find over discs for orientation.
        let mut orient: Vec<Option<bool>> = vec![None; n];
        let mut orient_edges: Vec<(usize, usize, bool)> = Vec::new();
        let mut matched = 0usize;
        let mut boundary_sides: Vec<[usize; 2]> = Vec::new();
        let mut used = vec![false; 6 * n];

        for t in 0..n {
            let d = discs[t];
            let cyc = d.corners();
            for &c in &cyc {
                used[6 * t + c] = true;
            }
            for f in 0..4u8 {
                let Some(v) = d.arc_in_face(f) else { continue };
                let ends = arc_endpoints(f, v);
                match tri.dest(t, f) {
                    None => boundary_sides.push([6 * t + ends[0], 6 * t + ends[1]]),
                    Some(dest) => {
                        if (t, f) > (dest.tet, dest.face) {
                            continue;
                        }
                        matched += 1;
                        disc_uf.union(t, dest.tet);
                        let p = dest.perm;
                        let img = |e: usize| {
                            let [a, b] = crate::triangulation::EDGE_VERTICES[e];
                            crate::triangulation::edge_index(p.apply(a), p.apply(b))
                        };
                        let (i0, i1) = (img(ends[0]), img(ends[1]));
                        corner_uf.union(6 * t + ends[0], 6 * dest.tet + i0);
                        corner_uf.union(6 * t + ends[1], 6 * dest.tet + i1);
                        let forward = |cyc: &[usize], a: usize, b: usize| {
                            let pa = cyc.iter().position(|&c| c == a).unwrap();
                            cyc[(pa + 1) % cyc.len()] == b
                        };
                        let here = forward(&cyc, ends[0], ends[1]);
                        let there = forward(&discs[dest.tet].corners(), i0, i1);
                        // Consistent orientations traverse a shared side in opposite directions.
                        orient_edges.push((t, dest.tet, here == there));
                    }
                }
            }
        }

        let mut vertex_reps: Vec<usize> = (0..6 * n).filter(|&s| used[s]).map(|s| corner_uf.find(s)).collect();
        vertex_reps.sort_unstable();
        vertex_reps.dedup();
        let euler = vertex_reps.len() as i64 - (matched + boundary_sides.len()) as i64 + n as i64;

        let mut comps: Vec<usize> = (0..n).map(|t| disc_uf.find(t)).collect();
        comps.sort_unstable();
        comps.dedup();

        // Orientation by propagation over the side graph.
        let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
        for &(a, b, flip) in &orient_edges {
            adj[a].push((b, flip));
            adj[b].push((a, flip));
        }
        let mut orientable = true;
        for s in 0..n {
            if orient[s].is_some() {
                continue;
            }
            orient[s] = Some(false);
            let mut stack = vec![s];
            while let Some(a) = stack.pop() {
                let oa = orient[a].unwrap();
                for &(b, flip) in &adj[a] {
                    let want = oa ^ flip;
                    match orient[b] {
                        None => {
                            orient[b] = Some(want);
                            stack.push(b);
                        }
                        Some(ob) if ob != want => orientable = false,
                        _ => {}
                    }
                }
            }
        }

        let mut bdry = UnionFind::new(6 * n);
        for &[a, b] in &boundary_sides {
            bdry.union(corner_uf.find(a), corner_uf.find(b));
        }
        let mut bcomps: Vec<usize> =
            boundary_sides.iter().map(|&[a, _]| bdry.find(corner_uf.find(a))).collect();
        bcomps.sort_unstable();
        bcomps.dedup();

        DiscComplex {
            components: comps.len(),
            euler,
            orientable,
            boundary_components: bcomps.len(),
        }
    }
}

/// Classifies an admissible `{0,1}` vector with one disc per tetrahedron.
pub fn surface_complex(tri: &Triangulation, x: &NormalVector) -> Result<SurfaceInfo, NormalError> {
    check_dim(tri, x)?;
    let discs = x.one_disc_per_tet().ok_or(NormalError::UnsupportedVector)?;
    if !is_admissible(tri, x)? {
        return Err(NormalError::NotAdmissible);
    }
    let c = DiscComplex::build(tri, &discs);
    Ok(SurfaceInfo {
        euler: c.euler,
        orientable: c.orientable,
        boundary_components: c.boundary_components,
        connected: c.components == 1,
    })
}
