//! Generalized triangulations: tetrahedra with some faces identified in pairs.
//!
//! Face `f` of a tetrahedron is the triangle opposite vertex `f`. A gluing
//! carries a full permutation of `{0,1,2,3}` that sends the vertex labels of
//! one tetrahedron to those of the other; it must send `face` to
//! `other_face`, and the remaining three labels describe how the two
//! triangles are matched.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::perm::Perm4;

/// The six edges of a tetrahedron, by endpoint labels.
pub const EDGE_VERTICES: [[u8; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Index into [`EDGE_VERTICES`] of the edge joining `a` and `b`.
pub fn edge_index(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no edge between {a} and {b}"),
    }
}

/// The three vertices of face `f` in increasing order.
pub fn face_vertices(f: u8) -> [u8; 3] {
    match f {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        3 => [0, 1, 2],
        _ => panic!("face index {f} out of range"),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("a triangulation needs at least one tetrahedron")]
    Empty,
    #[error("tetrahedron {0} does not exist")]
    NoSuchTetrahedron(usize),
    #[error("face index {0} is not in 0..4")]
    NoSuchFace(u8),
    #[error("face {face} of tetrahedron {tet} is already glued")]
    SlotAlreadyGlued { tet: usize, face: u8 },
    #[error("permutation {perm} does not send face {face} to face {other_face}")]
    MalformedPermutation { perm: Perm4, face: u8, other_face: u8 },
    #[error("face {face} of tetrahedron {tet} cannot be glued to itself")]
    SelfFaceGluing { tet: usize, face: u8 },
    #[error("face {face} of tetrahedron {tet} is not glued")]
    NotAGluing { tet: usize, face: u8 },
    #[error("the triangulation is disconnected")]
    Disconnected,
    #[error("the triangulation contains an invalid edge")]
    InvalidEdgePresent,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// One face identification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub face: u8,
    pub other_tet: usize,
    pub other_face: u8,
    pub perm: Perm4,
}

impl Gluing {
    pub fn new(tet: usize, face: u8, other_tet: usize, other_face: u8, perm: Perm4) -> Gluing {
        Gluing { tet, face, other_tet, other_face, perm }
    }

    /// The same identification seen from the other side.
    pub fn reversed(self) -> Gluing {
        Gluing {
            tet: self.other_tet,
            face: self.other_face,
            other_tet: self.tet,
            other_face: self.face,
            perm: self.perm.inverse(),
        }
    }

    /// Orientation with the lexicographically smaller `(tet, face)` first.
    pub fn canonical(self) -> Gluing {
        if (self.other_tet, self.other_face) < (self.tet, self.face) {
            self.reversed()
        } else {
            self
        }
    }

    fn check(&self) -> Result<(), TriangulationError> {
        if self.face > 3 {
            return Err(TriangulationError::NoSuchFace(self.face));
        }
        if self.other_face > 3 {
            return Err(TriangulationError::NoSuchFace(self.other_face));
        }
        if self.perm.apply(self.face) != self.other_face {
            return Err(TriangulationError::MalformedPermutation {
                perm: self.perm,
                face: self.face,
                other_face: self.other_face,
            });
        }
        if self.tet == self.other_tet && self.face == self.other_face {
            return Err(TriangulationError::SelfFaceGluing { tet: self.tet, face: self.face });
        }
        Ok(())
    }
}

/// Where a face slot is glued to: tetrahedron, face, and vertex map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FaceDest {
    pub tet: usize,
    pub face: u8,
    pub perm: Perm4,
}

/// Free-form bookkeeping attached to a piece of the triangulation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelKey {
    Tet(usize),
    Face(usize, u8),
    /// Tetrahedron and an index into [`EDGE_VERTICES`].
    Edge(usize, u8),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    adj: Vec<[Option<FaceDest>; 4]>,
    labels: BTreeMap<LabelKey, String>,
}

impl Triangulation {
    /// `n` unglued tetrahedra.
    pub fn new(n: usize) -> Result<Triangulation, TriangulationError> {
        if n == 0 {
            return Err(TriangulationError::Empty);
        }
        Ok(Triangulation { adj: vec![[None; 4]; n], labels: BTreeMap::new() })
    }

    /// Builds a triangulation from a list of gluings.
    pub fn from_gluings(
        n: usize,
        gluings: impl IntoIterator<Item = Gluing>,
    ) -> Result<Triangulation, TriangulationError> {
        let mut tri = Triangulation::new(n)?;
        for g in gluings {
            tri.glue(g)?;
        }
        Ok(tri)
    }

    pub fn size(&self) -> usize {
        self.adj.len()
    }

    /// Appends `k` unglued tetrahedra and returns the index of the first one.
    pub fn add_tetrahedra(&mut self, k: usize) -> usize {
        let first = self.adj.len();
        self.adj.extend(std::iter::repeat_n([None; 4], k));
        first
    }

    fn check_slot(&self, tet: usize, face: u8) -> Result<(), TriangulationError> {
        if tet >= self.adj.len() {
            return Err(TriangulationError::NoSuchTetrahedron(tet));
        }
        if face > 3 {
            return Err(TriangulationError::NoSuchFace(face));
        }
        Ok(())
    }

    pub fn glue(&mut self, g: Gluing) -> Result<(), TriangulationError> {
        g.check()?;
        self.check_slot(g.tet, g.face)?;
        self.check_slot(g.other_tet, g.other_face)?;
        for (t, f) in [(g.tet, g.face), (g.other_tet, g.other_face)] {
            if self.adj[t][f as usize].is_some() {
                return Err(TriangulationError::SlotAlreadyGlued { tet: t, face: f });
            }
        }
        self.adj[g.tet][g.face as usize] =
            Some(FaceDest { tet: g.other_tet, face: g.other_face, perm: g.perm });
        self.adj[g.other_tet][g.other_face as usize] =
            Some(FaceDest { tet: g.tet, face: g.face, perm: g.perm.inverse() });
        Ok(())
    }

    /// Returns a copy with `g` added.
    pub fn with_gluing(&self, g: Gluing) -> Result<Triangulation, TriangulationError> {
        let mut out = self.clone();
        out.glue(g)?;
        Ok(out)
    }

    /// Removes the gluing on `(tet, face)` and returns it, oriented from that slot.
    pub fn unglue(&mut self, tet: usize, face: u8) -> Result<Gluing, TriangulationError> {
        self.check_slot(tet, face)?;
        let dest = self.adj[tet][face as usize].ok_or(TriangulationError::NotAGluing { tet, face })?;
        self.adj[tet][face as usize] = None;
        self.adj[dest.tet][dest.face as usize] = None;
        Ok(Gluing::new(tet, face, dest.tet, dest.face, dest.perm))
    }

    #[inline]
    pub fn dest(&self, tet: usize, face: u8) -> Option<FaceDest> {
        self.adj[tet][face as usize]
    }

    /// The gluing on `(tet, face)`, oriented from that slot.
    pub fn gluing_at(&self, tet: usize, face: u8) -> Option<Gluing> {
        self.dest(tet, face).map(|d| Gluing::new(tet, face, d.tet, d.face, d.perm))
    }

    /// All gluings in canonical orientation and sorted order.
    pub fn gluings(&self) -> Vec<Gluing> {
        let mut out = Vec::new();
        for (t, faces) in self.adj.iter().enumerate() {
            for (f, dest) in faces.iter().enumerate() {
                if let Some(d) = dest {
                    if (t, f as u8) < (d.tet, d.face) {
                        out.push(Gluing::new(t, f as u8, d.tet, d.face, d.perm));
                    }
                }
            }
        }
        out
    }

    pub fn num_gluings(&self) -> usize {
        self.adj.iter().flatten().filter(|d| d.is_some()).count() / 2
    }

    /// Unglued face slots, in order.
    pub fn boundary_faces(&self) -> Vec<(usize, u8)> {
        let mut out = Vec::new();
        for (t, faces) in self.adj.iter().enumerate() {
            for f in 0..4u8 {
                if faces[f as usize].is_none() {
                    out.push((t, f));
                }
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.adj.iter().flatten().all(Option::is_some)
    }

    /// Connected components of the dual graph, each as a sorted list of tetrahedra.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                for d in self.adj[t].iter().flatten() {
                    if !seen[d.tet] {
                        seen[d.tet] = true;
                        comp.push(d.tet);
                        queue.push_back(d.tet);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Orientability of a connected triangulation.
    ///
    /// Between two consistently oriented tetrahedra a gluing permutation must
    /// be odd; an even permutation forces opposite orientations.
    pub fn is_orientable(&self) -> Result<bool, TriangulationError> {
        Ok(self.orientation()?.is_some())
    }

    /// A consistent `±1` orientation per tetrahedron, if one exists.
    pub fn orientation(&self) -> Result<Option<Vec<i8>>, TriangulationError> {
        if !self.is_connected() {
            return Err(TriangulationError::Disconnected);
        }
        let n = self.size();
        let mut sign = vec![0i8; n];
        sign[0] = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(t) = queue.pop_front() {
            for d in self.adj[t].iter().flatten() {
                let want = if d.perm.is_even() { -sign[t] } else { sign[t] };
                if sign[d.tet] == 0 {
                    sign[d.tet] = want;
                    queue.push_back(d.tet);
                } else if sign[d.tet] != want {
                    return Ok(None);
                }
            }
        }
        Ok(Some(sign))
    }

    /// Renumbers tetrahedra so that old tetrahedron `t` becomes `new_index[t]`.
    pub fn relabel(&self, new_index: &[usize]) -> Triangulation {
        assert_eq!(new_index.len(), self.size());
        let mut adj = vec![[None; 4]; self.size()];
        for (t, faces) in self.adj.iter().enumerate() {
            for f in 0..4 {
                adj[new_index[t]][f] = faces[f].map(|d| FaceDest { tet: new_index[d.tet], ..d });
            }
        }
        let labels = self
            .labels
            .iter()
            .map(|(k, v)| {
                let k = match *k {
                    LabelKey::Tet(t) => LabelKey::Tet(new_index[t]),
                    LabelKey::Face(t, f) => LabelKey::Face(new_index[t], f),
                    LabelKey::Edge(t, e) => LabelKey::Edge(new_index[t], e),
                };
                (k, v.clone())
            })
            .collect();
        Triangulation { adj, labels }
    }

    pub fn labels(&self) -> &BTreeMap<LabelKey, String> {
        &self.labels
    }

    pub fn set_label(&mut self, key: LabelKey, value: impl Into<String>) {
        self.labels.insert(key, value.into());
    }

    pub fn label(&self, key: &LabelKey) -> Option<&str> {
        self.labels.get(key).map(String::as_str)
    }

    /// Copies `other` in after the existing tetrahedra, returning the offset.
    pub fn append(&mut self, other: &Triangulation) -> usize {
        let offset = self.add_tetrahedra(other.size());
        for g in other.gluings() {
            self.glue(Gluing::new(g.tet + offset, g.face, g.other_tet + offset, g.other_face, g.perm))
                .expect("fresh slots");
        }
        for (k, v) in &other.labels {
            let k = match *k {
                LabelKey::Tet(t) => LabelKey::Tet(t + offset),
                LabelKey::Face(t, f) => LabelKey::Face(t + offset, f),
                LabelKey::Edge(t, e) => LabelKey::Edge(t + offset, e),
            };
            self.labels.insert(k, v.clone());
        }
        offset
    }

    /// Text serialization. Gluings are written in canonical order, so two
    /// triangulations with the same gluings and labels serialize identically.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "triangulation {}", self.size()).unwrap();
        for g in self.gluings() {
            writeln!(out, "{} {} {} {} {}", g.tet, g.face, g.other_tet, g.other_face, g.perm).unwrap();
        }
        for (k, v) in &self.labels {
            match *k {
                LabelKey::Tet(t) => writeln!(out, "label tet {t} {v}"),
                LabelKey::Face(t, f) => writeln!(out, "label face {t} {f} {v}"),
                LabelKey::Edge(t, e) => {
                    let [a, b] = EDGE_VERTICES[e as usize];
                    writeln!(out, "label edge {t} {a} {b} {v}")
                }
            }
            .unwrap();
        }
        out
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> TriangulationError {
    TriangulationError::Parse { line, message: message.into() }
}

fn parse_num<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, TriangulationError> {
    tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("bad {what}")))
}

impl FromStr for Triangulation {
    type Err = TriangulationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tri: Option<Triangulation> = None;
        for (i, raw) in s.lines().enumerate() {
            let line = i + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let mut toks = text.split_whitespace();
            let Some(t) = tri.as_mut() else {
                if toks.next() != Some("triangulation") {
                    return Err(parse_err(line, "expected `triangulation <n>` header"));
                }
                let n: usize = parse_num(toks.next(), line, "tetrahedron count")?;
                tri = Some(Triangulation::new(n)?);
                continue;
            };
            if text.starts_with("label ") {
                toks.next();
                let kind = toks.next();
                let (key, used) = match kind {
                    Some("tet") => (LabelKey::Tet(parse_num(toks.next(), line, "tetrahedron")?), 3),
                    Some("face") => {
                        let tt = parse_num(toks.next(), line, "tetrahedron")?;
                        let ff = parse_num(toks.next(), line, "face")?;
                        (LabelKey::Face(tt, ff), 4)
                    }
                    Some("edge") => {
                        let tt = parse_num(toks.next(), line, "tetrahedron")?;
                        let a: u8 = parse_num(toks.next(), line, "edge endpoint")?;
                        let b: u8 = parse_num(toks.next(), line, "edge endpoint")?;
                        if a > 3 || b > 3 || a == b {
                            return Err(parse_err(line, "bad edge endpoints"));
                        }
                        (LabelKey::Edge(tt, edge_index(a, b) as u8), 5)
                    }
                    _ => return Err(parse_err(line, "unknown label kind")),
                };
                let value = text.splitn(used + 1, char::is_whitespace).nth(used).unwrap_or("").trim();
                t.labels.insert(key, value.to_string());
                continue;
            }
            let tet = parse_num(toks.next(), line, "tetrahedron")?;
            let face = parse_num(toks.next(), line, "face")?;
            let other_tet = parse_num(toks.next(), line, "tetrahedron")?;
            let other_face = parse_num(toks.next(), line, "face")?;
            let digits = toks.next().ok_or_else(|| parse_err(line, "missing permutation"))?;
            let bytes = digits.as_bytes();
            if bytes.len() != 4 || !bytes.iter().all(|b| (b'0'..=b'3').contains(b)) {
                return Err(parse_err(line, "permutation must be four digits 0-3"));
            }
            let perm = Perm4::new([bytes[0] - b'0', bytes[1] - b'0', bytes[2] - b'0', bytes[3] - b'0'])
                .ok_or_else(|| parse_err(line, "permutation is not a bijection"))?;
            if toks.next().is_some() {
                return Err(parse_err(line, "trailing tokens"));
            }
            t.glue(Gluing::new(tet, face, other_tet, other_face, perm))
                .map_err(|e| parse_err(line, e.to_string()))?;
        }
        tri.ok_or_else(|| parse_err(0, "empty input"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(images: [u8; 4]) -> Perm4 {
        Perm4::new(images).unwrap()
    }

    #[test]
    fn zero_tetrahedra_rejected() {
        assert_eq!(Triangulation::new(0), Err(TriangulationError::Empty));
    }

    #[test]
    fn pillow_gluing_accepted_and_double_glue_rejected() {
        let mut t = Triangulation::new(2).unwrap();
        t.glue(Gluing::new(0, 2, 1, 3, p([0, 1, 3, 2]))).unwrap();
        let err = t.glue(Gluing::new(0, 2, 1, 1, p([0, 2, 1, 3])));
        assert_eq!(err, Err(TriangulationError::SlotAlreadyGlued { tet: 0, face: 2 }));
        let err = t.glue(Gluing::new(0, 1, 1, 3, p([0, 1, 2, 3])));
        assert!(matches!(err, Err(TriangulationError::MalformedPermutation { .. })));
    }

    #[test]
    fn self_gluing_of_distinct_faces_is_fine() {
        let mut t = Triangulation::new(1).unwrap();
        t.glue(Gluing::new(0, 0, 0, 1, Perm4::transposition(0, 1))).unwrap();
        assert_eq!(t.num_gluings(), 1);
        assert_eq!(t.boundary_faces(), vec![(0, 2), (0, 3)]);
        let err = Triangulation::new(1).unwrap().glue(Gluing::new(0, 2, 0, 2, Perm4::IDENTITY));
        assert_eq!(err, Err(TriangulationError::SelfFaceGluing { tet: 0, face: 2 }));
    }

    #[test]
    fn canonical_storage_is_lower_slot_first() {
        let mut t = Triangulation::new(2).unwrap();
        t.glue(Gluing::new(1, 3, 0, 2, p([0, 1, 3, 2]))).unwrap();
        let gs = t.gluings();
        assert_eq!(gs, vec![Gluing::new(0, 2, 1, 3, p([0, 1, 3, 2]))]);
    }

    #[test]
    fn text_format_round_trips() {
        let mut t = Triangulation::new(3).unwrap();
        t.glue(Gluing::new(0, 2, 1, 0, Perm4::transposition(0, 2))).unwrap();
        t.glue(Gluing::new(1, 1, 2, 3, p([0, 3, 2, 1]))).unwrap();
        t.set_label(LabelKey::Tet(2), "core 2");
        t.set_label(LabelKey::Edge(0, 1), "axis");
        let text = t.to_text();
        let back: Triangulation = text.parse().unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = "triangulation 2\n0 2 1 3 0132\n0 2 1 1 0213\n".parse::<Triangulation>();
        assert!(matches!(err, Err(TriangulationError::Parse { line: 3, .. })));
        assert!("0 1 2 3".parse::<Triangulation>().is_err());
    }

    #[test]
    fn orientation_follows_permutation_parity() {
        // Identity gluing is even: the two tetrahedra need opposite signs.
        let t = Triangulation::from_gluings(2, [Gluing::new(0, 3, 1, 3, Perm4::IDENTITY)]).unwrap();
        assert_eq!(t.orientation().unwrap(), Some(vec![1, -1]));
        // An even self-gluing can never be consistent.
        let mut t = Triangulation::new(1).unwrap();
        t.glue(Gluing::new(0, 0, 0, 1, p([1, 0, 3, 2]))).unwrap();
        assert_eq!(t.is_orientable(), Ok(false));
        let two = Triangulation::new(2).unwrap();
        assert_eq!(two.is_orientable(), Err(TriangulationError::Disconnected));
    }
}
