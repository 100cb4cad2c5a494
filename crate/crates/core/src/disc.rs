//! Elementary disc types and the normal arcs they cut in each face.
//!
//! Coordinates within a tetrahedron are laid out as three quadrilaterals
//! followed by four triangles. Quadrilateral `j` (for `j = 1, 2, 3`) separates
//! the vertex pair `{0, j}` from the complementary pair; triangle `i` links
//! vertex `i`. An arc in a face is identified by the face vertex it cuts off.

use std::fmt;

use crate::triangulation::edge_index;

/// One of the seven elementary disc types, ordered `quad1 < quad2 < quad3 < tri0 < … < tri3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiscType(u8);

impl DiscType {
    pub const ALL: [DiscType; 7] = [
        DiscType(0),
        DiscType(1),
        DiscType(2),
        DiscType(3),
        DiscType(4),
        DiscType(5),
        DiscType(6),
    ];
    pub const QUADS: [DiscType; 3] = [DiscType(0), DiscType(1), DiscType(2)];

    /// Quadrilateral separating `{0, j}` from the rest, `j` in `1..=3`.
    pub fn quad(j: u8) -> DiscType {
        assert!((1..=3).contains(&j));
        DiscType(j - 1)
    }

    /// Triangle linking vertex `v`.
    pub fn triangle(v: u8) -> DiscType {
        assert!(v < 4);
        DiscType(3 + v)
    }

    pub fn from_offset(offset: usize) -> DiscType {
        assert!(offset < 7);
        DiscType(offset as u8)
    }

    /// Position of this disc type within a tetrahedron's 7 coordinates.
    #[inline]
    pub fn offset(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_quad(self) -> bool {
        self.0 < 3
    }

    /// The vertex linked by a triangle.
    pub fn linked_vertex(self) -> Option<u8> {
        (self.0 >= 3).then(|| self.0 - 3)
    }

    /// Partner of `v` in the pairing of a quadrilateral.
    fn quad_partner(self, v: u8) -> u8 {
        let j = self.0 + 1;
        match v {
            0 => j,
            _ if v == j => 0,
            _ => 6 - j - v,
        }
    }

    /// The quadrilateral whose pairing puts `a` and `b` together.
    pub fn quad_pairing(a: u8, b: u8) -> DiscType {
        debug_assert_ne!(a, b);
        if a == 0 {
            DiscType::quad(b)
        } else if b == 0 {
            DiscType::quad(a)
        } else {
            DiscType::quad(6 - a - b)
        }
    }

    /// The arc this disc cuts in face `f`, as the face vertex it cuts off.
    #[inline]
    pub fn arc_in_face(self, f: u8) -> Option<u8> {
        match self.linked_vertex() {
            Some(v) => (v != f).then_some(v),
            None => Some(self.quad_partner(f)),
        }
    }

    /// Tetrahedron edges (indices into `EDGE_VERTICES`) carrying a corner of
    /// this disc, in cyclic order around the disc boundary.
    pub fn corners(self) -> Vec<usize> {
        match self.linked_vertex() {
            Some(v) => (0..4u8).filter(|&w| w != v).map(|w| edge_index(v, w)).collect(),
            None => {
                let (a, b) = (0u8, self.0 + 1);
                let mut rest = (1..4u8).filter(|&x| x != b);
                let (c, d) = (rest.next().unwrap(), rest.next().unwrap());
                vec![edge_index(a, c), edge_index(a, d), edge_index(b, d), edge_index(b, c)]
            }
        }
    }
}

impl fmt::Display for DiscType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.linked_vertex() {
            Some(v) => write!(f, "tri{v}"),
            None => write!(f, "quad{}", self.0 + 1),
        }
    }
}

/// Endpoints (as tetrahedron edges) of the arc cutting off `v` in face `f`.
pub fn arc_endpoints(f: u8, v: u8) -> [usize; 2] {
    let mut others = (0..4u8).filter(|&w| w != f && w != v);
    let (a, b) = (others.next().unwrap(), others.next().unwrap());
    [edge_index(v, a), edge_index(v, b)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::EDGE_VERTICES;

    #[test]
    fn quads_cut_every_face_triangles_miss_one() {
        for d in DiscType::ALL {
            let faces = (0..4).filter(|&f| d.arc_in_face(f).is_some()).count();
            assert_eq!(faces, if d.is_quad() { 4 } else { 3 });
        }
    }

    #[test]
    fn distinct_quads_never_share_an_arc() {
        for f in 0..4 {
            let arcs: Vec<_> = DiscType::QUADS.iter().map(|q| q.arc_in_face(f).unwrap()).collect();
            assert_eq!(arcs.len(), 3);
            assert!(arcs[0] != arcs[1] && arcs[1] != arcs[2] && arcs[0] != arcs[2]);
            assert!(!arcs.contains(&f));
        }
    }

    #[test]
    fn arc_endpoints_are_corners_of_the_disc() {
        for d in DiscType::ALL {
            let corners = d.corners();
            for f in 0..4 {
                if let Some(v) = d.arc_in_face(f) {
                    for e in arc_endpoints(f, v) {
                        assert!(corners.contains(&e), "{d} face {f}");
                        assert!(!EDGE_VERTICES[e].contains(&f));
                    }
                }
            }
        }
    }

    #[test]
    fn quad_corners_are_cyclic() {
        // Consecutive corners share a vertex, so they span a face.
        for q in DiscType::QUADS {
            let c = q.corners();
            for i in 0..4 {
                let [a, b] = EDGE_VERTICES[c[i]];
                let [x, y] = EDGE_VERTICES[c[(i + 1) % 4]];
                assert!(a == x || a == y || b == x || b == y);
            }
        }
        assert_eq!(DiscType::quad_pairing(2, 3), DiscType::quad(1));
        assert_eq!(DiscType::quad_pairing(3, 0), DiscType::quad(3));
    }
}
