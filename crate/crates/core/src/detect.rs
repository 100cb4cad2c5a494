//! Detection of splitting and spanning central surfaces.
//!
//! A spanning central surface meets every tetrahedron in exactly one
//! elementary disc. With all counts in `{0, 1}`, the matching equations
//! reduce to a local rule: across each internal face the two chosen discs
//! cut the same arc, or both cut nothing.

use std::collections::VecDeque;

use thiserror::Error;

use crate::disc::DiscType;
use crate::normal::{is_admissible, NormalVector};
use crate::skeleton::UnionFind;
use crate::triangulation::Triangulation;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

const ALL_DISCS: u8 = 0x7f;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectError {
    #[error("triangulation is disconnected")]
    Disconnected,
    #[error("search exceeded its budget of {0} nodes")]
    BudgetExceeded(u64),
}

/// Discs (as a bitmask over offsets) that cut an arc in face `f`.
fn arc_mask(f: u8) -> u8 {
    ALL_DISCS & !(1 << DiscType::triangle(f).offset())
}

/// Induced arc in the destination face, for each disc type.
fn compat_mask(tri: &Triangulation, t: usize, f: u8, d: DiscType) -> u8 {
    let Some(dest) = tri.dest(t, f) else {
        return ALL_DISCS;
    };
    let want = d.arc_in_face(f).map(|v| dest.perm.apply(v));
    let mut mask = 0;
    for other in DiscType::ALL {
        if other.arc_in_face(dest.face) == want {
            mask |= 1 << other.offset();
        }
    }
    mask
}

/// The unique all-quadrilateral spanning central surface obtained by
/// propagating each quadrilateral choice in tetrahedron 0, if any.
///
/// In every face the three quadrilaterals cut three different arcs, so each
/// internal face forces the quadrilateral on its far side. Three breadth-first
/// searches therefore settle the question in linear time.
pub fn find_splitting_surface(tri: &Triangulation) -> Result<Option<NormalVector>, DetectError> {
    if !tri.is_connected() {
        return Err(DetectError::Disconnected);
    }
    let n = tri.size();
    'start: for q in DiscType::QUADS {
        let mut choice: Vec<Option<DiscType>> = vec![None; n];
        choice[0] = Some(q);
        let mut queue = VecDeque::from([0usize]);
        while let Some(t) = queue.pop_front() {
            let d = choice[t].unwrap();
            for f in 0..4u8 {
                let Some(dest) = tri.dest(t, f) else { continue };
                let arc = dest.perm.apply(d.arc_in_face(f).expect("quads cut every face"));
                let forced = DiscType::QUADS
                    .into_iter()
                    .find(|o| o.arc_in_face(dest.face) == Some(arc))
                    .expect("some quad cuts each arc");
                match choice[dest.tet] {
                    None => {
                        choice[dest.tet] = Some(forced);
                        queue.push_back(dest.tet);
                    }
                    Some(c) if c != forced => continue 'start,
                    _ => {}
                }
            }
        }
        let discs: Vec<DiscType> = choice.into_iter().map(Option::unwrap).collect();
        return Ok(Some(NormalVector::from_discs(&discs)));
    }
    Ok(None)
}

/// Search statistics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
}

struct Search<'a> {
    tri: &'a Triangulation,
    compat: Vec<[[u8; 7]; 4]>,
    domain: Vec<u8>,
    assigned: Vec<Option<u8>>,
    nodes: u64,
    budget: u64,
    connected_only: bool,
    stop_at_first: bool,
    found: Vec<Vec<DiscType>>,
}

impl<'a> Search<'a> {
    fn new(tri: &'a Triangulation, budget: u64, connected_only: bool, stop_at_first: bool) -> Self {
        let n = tri.size();
        let compat = (0..n)
            .map(|t| {
                let mut c = [[0u8; 7]; 4];
                for f in 0..4u8 {
                    for d in DiscType::ALL {
                        c[f as usize][d.offset()] = compat_mask(tri, t, f, d);
                    }
                }
                c
            })
            .collect();
        Search {
            tri,
            compat,
            domain: vec![ALL_DISCS; n],
            assigned: vec![None; n],
            nodes: 0,
            budget,
            connected_only,
            stop_at_first,
            found: Vec::new(),
        }
    }

    /// Discs allowed across face `f` of `t` given the current domain of `t`.
    fn support(&self, t: usize, f: u8) -> u8 {
        let mut m = 0;
        let dom = self.domain[t];
        for d in 0..7 {
            if dom & (1 << d) != 0 {
                m |= self.compat[t][f as usize][d];
            }
        }
        m
    }

    /// Restricts `t` to `d` and restores arc consistency everywhere.
    fn propagate(&mut self, t: usize, d: u8) -> bool {
        self.domain[t] &= 1 << d;
        if self.domain[t] == 0 {
            return false;
        }
        let mut queue = VecDeque::from([t]);
        while let Some(t) = queue.pop_front() {
            for f in 0..4u8 {
                let Some(dest) = self.tri.dest(t, f) else { continue };
                let m = self.support(t, f);
                let before = self.domain[dest.tet];
                let after = before & m;
                if after != before {
                    if after == 0 {
                        return false;
                    }
                    self.domain[dest.tet] = after;
                    queue.push_back(dest.tet);
                }
            }
        }
        true
    }

    /// False if the discs still possible cannot form a single component.
    fn may_connect(&self) -> bool {
        let n = self.tri.size();
        let mut uf = UnionFind::new(n);
        let mut joins = 0;
        for t in 0..n {
            for f in 0..4u8 {
                let Some(dest) = self.tri.dest(t, f) else { continue };
                if (t, f) >= (dest.tet, dest.face) {
                    continue;
                }
                if self.domain[t] & arc_mask(f) != 0
                    && self.domain[dest.tet] & arc_mask(dest.face) != 0
                    && uf.union(t, dest.tet)
                {
                    joins += 1;
                    if joins + 1 == n {
                        return true;
                    }
                }
            }
        }
        joins + 1 >= n
    }

    fn run(&mut self) -> Result<bool, DetectError> {
        let pick = (0..self.tri.size())
            .filter(|&t| self.assigned[t].is_none())
            .min_by_key(|&t| (self.domain[t].count_ones(), t));
        let Some(t) = pick else {
            let discs = self.assigned.iter().map(|d| DiscType::from_offset(d.unwrap() as usize)).collect();
            self.found.push(discs);
            return Ok(self.stop_at_first);
        };
        let options = self.domain[t];
        for d in 0..7u8 {
            if options & (1 << d) == 0 {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(DetectError::BudgetExceeded(self.budget));
            }
            let saved = self.domain.clone();
            self.assigned[t] = Some(d);
            let ok = self.propagate(t, d) && (!self.connected_only || self.may_connect());
            if ok && self.run()? {
                return Ok(true);
            }
            self.assigned[t] = None;
            self.domain = saved;
        }
        Ok(false)
    }
}

fn search(
    tri: &Triangulation,
    budget: u64,
    connected_only: bool,
    stop_at_first: bool,
) -> Result<(Vec<NormalVector>, SearchStats), DetectError> {
    let mut s = Search::new(tri, budget, connected_only, stop_at_first);
    s.run()?;
    let mut out: Vec<NormalVector> = s.found.iter().map(|d| NormalVector::from_discs(d)).collect();
    out.sort_by(|a, b| b.coords().cmp(a.coords()));
    Ok((out, SearchStats { nodes: s.nodes }))
}

/// Every spanning central surface, ordered by disc choice (tetrahedron 0
/// first, `quad1` before `quad2` before … `tri3`).
pub fn enumerate_spanning_central(tri: &Triangulation) -> Result<Vec<NormalVector>, DetectError> {
    enumerate_spanning_central_with(tri, DEFAULT_BUDGET).map(|(v, _)| v)
}

pub fn enumerate_spanning_central_with(
    tri: &Triangulation,
    budget: u64,
) -> Result<(Vec<NormalVector>, SearchStats), DetectError> {
    search(tri, budget, false, false)
}

/// Every connected spanning central surface, in the same order.
pub fn enumerate_connected_spanning_central(
    tri: &Triangulation,
    budget: u64,
) -> Result<(Vec<NormalVector>, SearchStats), DetectError> {
    if !tri.is_connected() {
        return Err(DetectError::Disconnected);
    }
    search(tri, budget, true, false)
}

/// The first connected spanning central surface in disc-choice order.
pub fn find_connected_spanning_central(tri: &Triangulation) -> Result<Option<NormalVector>, DetectError> {
    find_connected_spanning_central_with(tri, DEFAULT_BUDGET).map(|(v, _)| v)
}

pub fn find_connected_spanning_central_with(
    tri: &Triangulation,
    budget: u64,
) -> Result<(Option<NormalVector>, SearchStats), DetectError> {
    if !tri.is_connected() {
        return Err(DetectError::Disconnected);
    }
    let (mut v, stats) = search(tri, budget, true, true)?;
    Ok((v.pop(), stats))
}

/// Checks a claimed connected spanning central surface directly: `{0,1}`
/// entries, one disc per tetrahedron, admissible, and connected.
pub fn verify_certificate(tri: &Triangulation, x: &NormalVector) -> bool {
    if x.tets() != tri.size() {
        return false;
    }
    let Some(discs) = x.one_disc_per_tet() else {
        return false;
    };
    if !matches!(is_admissible(tri, x), Ok(true)) {
        return false;
    }
    disc_components(tri, &discs) == 1
}

/// Number of connected components of the surface cut out by one disc per tetrahedron.
pub fn disc_components(tri: &Triangulation, discs: &[DiscType]) -> usize {
    let n = tri.size();
    let mut seen = vec![false; n];
    let mut comps = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        comps += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(t) = queue.pop_front() {
            for f in 0..4u8 {
                if discs[t].arc_in_face(f).is_none() {
                    continue;
                }
                if let Some(dest) = tri.dest(t, f) {
                    if !seen[dest.tet] {
                        seen[dest.tet] = true;
                        queue.push_back(dest.tet);
                    }
                }
            }
        }
    }
    comps
}
