//! Abstract tetrahedra, compatible matching equations, and the reduction from
//! monotone one-in-three satisfiability.
//!
//! An abstract tetrahedron has seven coordinates: `1..=3` play the role of
//! quadrilaterals and `4..=7` of triangles. A reduced instance for `n`
//! clauses has `p = 3n - 2` tetrahedra laid out as `S_1..S_{n-1}`,
//! `T_1..T_n`, `U_1..U_{n-1}`, whose coordinates are written `w`, `x` and `y`.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cone::{extreme_rays_with, filter_admissible, Adjacency, ConeSystem, EnumOptions, Ray};
use crate::normal::{matching_system, EulerFunctional};
use crate::triangulation::Triangulation;

pub const DEFAULT_VARIABLE_BOUND: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbstractError {
    #[error("coordinate {0} is used in the wrong role")]
    RoleViolation(AbstractCoord),
    #[error("coordinate {0} is out of range")]
    NoSuchCoordinate(AbstractCoord),
    #[error("the reduction needs at least two clauses, got {0}")]
    TooFewClauses(usize),
    #[error("{0} variables exceed the search bound {1}")]
    TooManyVariables(usize, usize),
    #[error("equations are not compatible")]
    IncompatibleM,
    #[error("assignment does not satisfy every clause exactly once")]
    AssignmentDoesNotSatisfy,
    #[error("vector is not an admissible positive solution with the fixed coordinate zero")]
    PreconditionViolated,
    #[error("coordinate {0} is not a triangle coordinate of the triangulation")]
    BadCoordinate(usize),
    #[error("clause {0} does not have three distinct variables")]
    BadClause(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Coordinate `idx` (in `1..=7`) of abstract tetrahedron `tet` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbstractCoord {
    pub tet: usize,
    pub idx: u8,
}

impl AbstractCoord {
    pub fn new(tet: usize, idx: u8) -> AbstractCoord {
        assert!((1..=7).contains(&idx), "coordinate index {idx} outside 1..=7");
        AbstractCoord { tet, idx }
    }

    pub fn is_quad(self) -> bool {
        self.idx <= 3
    }

    /// Position in the `7p` vector.
    pub fn index(self) -> usize {
        7 * self.tet + self.idx as usize - 1
    }

    pub fn from_index(i: usize) -> AbstractCoord {
        AbstractCoord { tet: i / 7, idx: (i % 7) as u8 + 1 }
    }
}

impl fmt::Display for AbstractCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.tet, self.idx)
    }
}

/// `q + t = q2 + t2` with `q, q2` quadrilateral and `t, t2` triangle coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AbstractEquation {
    pub q: AbstractCoord,
    pub t: AbstractCoord,
    pub q2: AbstractCoord,
    pub t2: AbstractCoord,
}

impl AbstractEquation {
    pub fn new(q: AbstractCoord, t: AbstractCoord, q2: AbstractCoord, t2: AbstractCoord) -> Result<Self, AbstractError> {
        for c in [q, q2] {
            if !c.is_quad() {
                return Err(AbstractError::RoleViolation(c));
            }
        }
        for c in [t, t2] {
            if c.is_quad() {
                return Err(AbstractError::RoleViolation(c));
            }
        }
        Ok(AbstractEquation { q, t, q2, t2 })
    }

    pub fn coords(&self) -> [AbstractCoord; 4] {
        [self.q, self.t, self.q2, self.t2]
    }

    /// Sparse row of `q + t - q2 - t2`, with coincident terms merged.
    pub fn row(&self) -> Vec<(usize, i64)> {
        let mut acc: Vec<(usize, i64)> = Vec::with_capacity(4);
        for (c, s) in [(self.q, 1), (self.t, 1), (self.q2, -1), (self.t2, -1)] {
            match acc.iter_mut().find(|(i, _)| *i == c.index()) {
                Some(e) => e.1 += s,
                None => acc.push((c.index(), s)),
            }
        }
        acc.retain(|&(_, v)| v != 0);
        acc.sort_unstable();
        acc
    }

    pub fn holds(&self, x: &[i64]) -> bool {
        x[self.q.index()] + x[self.t.index()] == x[self.q2.index()] + x[self.t2.index()]
    }
}

impl fmt::Display for AbstractEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q {}  t {}  =  q {}  t {}", self.q, self.t, self.q2, self.t2)
    }
}

/// Occurrence counts per coordinate, counting coincidences twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compatibility {
    pub compatible: bool,
    pub counts: Vec<usize>,
    /// `|M| = 6p`.
    pub saturated: bool,
    /// Every quadrilateral coordinate appears four times and every triangle
    /// coordinate three times.
    pub exact_occurrences: bool,
}

pub fn check_compatible(p: usize, m: &[AbstractEquation]) -> Result<Compatibility, AbstractError> {
    let mut counts = vec![0usize; 7 * p];
    for e in m {
        for c in e.coords() {
            if c.tet >= p {
                return Err(AbstractError::NoSuchCoordinate(c));
            }
            counts[c.index()] += 1;
        }
    }
    let limit = |i: usize| if AbstractCoord::from_index(i).is_quad() { 4 } else { 3 };
    let compatible = (0..7 * p).all(|i| counts[i] <= limit(i));
    let exact_occurrences = (0..7 * p).all(|i| counts[i] == limit(i));
    Ok(Compatibility { compatible, counts, saturated: m.len() == 6 * p, exact_occurrences })
}

/// Clauses of three distinct variables, with variables numbered in order of
/// first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseSet {
    pub clauses: Vec<[usize; 3]>,
    pub names: Vec<String>,
}

impl ClauseSet {
    /// Variables are `0..=max`, named `v0, v1, …`.
    pub fn from_indices(clauses: Vec<[usize; 3]>) -> Result<ClauseSet, AbstractError> {
        for (k, c) in clauses.iter().enumerate() {
            if c[0] == c[1] || c[1] == c[2] || c[0] == c[2] {
                return Err(AbstractError::BadClause(k));
            }
        }
        let m = clauses.iter().flatten().map(|&v| v + 1).max().unwrap_or(0);
        Ok(ClauseSet { clauses, names: (0..m).map(|v| format!("v{v}")).collect() })
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn variables(&self) -> usize {
        self.names.len()
    }

    /// Exactly one true variable in each clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.variables()
            && self.clauses.iter().all(|c| c.iter().filter(|&&v| assignment[v]).count() == 1)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.clauses {
            writeln!(out, "{} {} {}", self.names[c[0]], self.names[c[1]], self.names[c[2]]).unwrap();
        }
        out
    }
}

impl FromStr for ClauseSet {
    type Err = AbstractError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut names = Vec::new();
        let mut clauses = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.len() != 3 {
                return Err(AbstractError::Parse { line: i + 1, message: "a clause has three variables".into() });
            }
            let mut c = [0usize; 3];
            for (slot, w) in c.iter_mut().zip(words) {
                *slot = *ids.entry(w.to_string()).or_insert_with(|| {
                    names.push(w.to_string());
                    names.len() - 1
                });
            }
            if c[0] == c[1] || c[1] == c[2] || c[0] == c[2] {
                return Err(AbstractError::Parse { line: i + 1, message: "variables must be distinct".into() });
            }
            clauses.push(c);
        }
        Ok(ClauseSet { clauses, names })
    }
}

/// Coordinate names of the reduced instance for `n` clauses, with the
/// 1-based clause indexing of the construction.
#[derive(Clone, Copy, Debug)]
pub struct Layout {
    pub n: usize,
}

impl Layout {
    pub fn tets(&self) -> usize {
        3 * self.n - 2
    }

    /// `w_{k,i}`, `k` in `1..n`.
    pub fn w(&self, k: usize, i: u8) -> AbstractCoord {
        assert!((1..self.n).contains(&k));
        AbstractCoord::new(k - 1, i)
    }

    /// `x_{k,i}`, `k` in `1..=n`.
    pub fn x(&self, k: usize, i: u8) -> AbstractCoord {
        assert!((1..=self.n).contains(&k));
        AbstractCoord::new(self.n - 1 + k - 1, i)
    }

    /// `y_{k,i}`, `k` in `1..n`.
    pub fn y(&self, k: usize, i: u8) -> AbstractCoord {
        assert!((1..self.n).contains(&k));
        AbstractCoord::new(2 * self.n - 1 + k - 1, i)
    }
}

fn eq(q: AbstractCoord, t: AbstractCoord, q2: AbstractCoord, t2: AbstractCoord) -> AbstractEquation {
    AbstractEquation::new(q, t, q2, t2).expect("construction respects roles")
}

/// Equations forcing `w_{k,4..7}` equal and linking each variable
/// occurrence to the next one found by a forward scan.
pub fn build_m1(c: &ClauseSet) -> Vec<AbstractEquation> {
    let n = c.len();
    if n < 2 {
        return Vec::new();
    }
    let l = Layout { n };
    let mut out = Vec::new();
    for k in 1..n {
        out.push(eq(l.w(k, 1), l.w(k, 4), l.w(k, 1), l.w(k, 5)));
        out.push(eq(l.w(k, 2), l.w(k, 4), l.w(k, 2), l.w(k, 7)));
        out.push(eq(l.w(k, 3), l.w(k, 6), l.w(k, 3), l.w(k, 7)));
    }
    for k in 1..n {
        for i in 1..=3u8 {
            let var = c.clauses[k - 1][i as usize - 1];
            let next = (k + 1..=n)
                .flat_map(|ell| (1..=3u8).map(move |j| (ell, j)))
                .find(|&(ell, j)| c.clauses[ell - 1][j as usize - 1] == var);
            if let Some((ell, j)) = next {
                out.push(eq(l.x(k, i), l.w(k, i + 3), l.x(ell, j), l.w(k, i + 4)));
            }
        }
    }
    out
}

/// Equations which, once `y_{1,5} = 0`, force the quadrilateral sums of
/// consecutive `T` tetrahedra to agree.
pub fn build_m2(n: usize) -> Result<Vec<AbstractEquation>, AbstractError> {
    if n < 2 {
        return Err(AbstractError::TooFewClauses(n));
    }
    let l = Layout { n };
    let (x, y) = (|k, i| l.x(k, i), |k, i| l.y(k, i));
    let mut out = Vec::new();
    for k in 1..n - 1 {
        out.push(eq(y(k, 2), y(k, 6), y(k + 1, 1), y(k + 1, 5)));
    }
    for k in 1..n {
        out.push(eq(y(k, 1), y(k, 4), y(k, 2), y(k, 4)));
        out.push(eq(y(k, 3), y(k, 5), y(k, 3), y(k, 6)));
        out.push(eq(y(k, 1), x(k, 4), x(k, 3), y(k, 5)));
        out.push(eq(y(k, 1), x(k + 1, 6), x(k + 1, 3), y(k, 6)));
        out.push(eq(y(k, 2), x(k, 5), x(k, 2), x(k, 4)));
        out.push(eq(y(k, 2), x(k + 1, 7), x(k + 1, 2), x(k + 1, 6)));
        out.push(eq(x(k, 1), x(k, 5), x(k + 1, 1), x(k + 1, 7)));
    }
    Ok(out)
}

/// An instance of the abstract problem: is there an admissible vector with
/// `chi > 0` and the fixed triangle coordinate zero?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractInstance {
    pub p: usize,
    pub equations: Vec<AbstractEquation>,
    /// Sparse `(index, coefficient)` pairs.
    pub chi: Vec<(usize, i64)>,
    pub fixed_zero: AbstractCoord,
}

impl AbstractInstance {
    pub fn dim(&self) -> usize {
        7 * self.p
    }

    pub fn chi_value(&self, x: &[BigInt]) -> BigInt {
        self.chi.iter().fold(BigInt::zero(), |acc, &(i, c)| acc + &x[i] * c)
    }

    pub fn quad_blocks(&self) -> Vec<[usize; 3]> {
        (0..self.p).map(|t| [7 * t, 7 * t + 1, 7 * t + 2]).collect()
    }

    /// Non-negative, quadrilateral-constrained and satisfying every equation.
    pub fn is_m_admissible(&self, x: &[i64]) -> bool {
        x.len() == self.dim()
            && x.iter().all(|&v| v >= 0)
            && (0..self.p).all(|t| x[7 * t..7 * t + 3].iter().filter(|&&v| v != 0).count() <= 1)
            && self.equations.iter().all(|e| e.holds(x))
    }

    pub fn cone(&self) -> ConeSystem {
        let mut sys = ConeSystem::new(self.dim()).fix_zero(self.fixed_zero.index());
        for e in &self.equations {
            let row = e.row();
            if !row.is_empty() {
                sys = sys.with_row(row);
            }
        }
        sys.quad_blocks = self.quad_blocks();
        sys
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p {}\n", self.p);
        for e in &self.equations {
            writeln!(out, "{e}").unwrap();
        }
        let chi: Vec<String> = self.chi.iter().map(|(i, c)| format!("{i}:{c}")).collect();
        writeln!(out, "chi {}", chi.join(" ")).unwrap();
        writeln!(out, "zero {}", self.fixed_zero).unwrap();
        out
    }
}

impl FromStr for AbstractInstance {
    type Err = AbstractError;

    /// `p <count>`, then equation lines `q k i  t k i  =  q k i  t k i`, a
    /// `chi i:c …` line and a `zero k i` line.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = None;
        let mut equations = Vec::new();
        let mut chi = Vec::new();
        let mut zero = None;
        for (i, line) in s.lines().enumerate() {
            let line_no = i + 1;
            let err = |m: &str| AbstractError::Parse { line: line_no, message: m.to_string() };
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let num = |w: &str| w.parse::<usize>().map_err(|_| err(&format!("bad number {w:?}")));
            let coord = |k: &str, i: &str| -> Result<AbstractCoord, AbstractError> {
                let (k, i) = (num(k)?, num(i)?);
                if !(1..=7).contains(&i) {
                    return Err(err("coordinate index must be in 1..=7"));
                }
                Ok(AbstractCoord::new(k, i as u8))
            };
            match words[0] {
                "p" if words.len() == 2 => p = Some(num(words[1])?),
                "q" if words.len() == 13 && words[3] == "t" && words[6] == "=" && words[7] == "q" && words[10] == "t" => {
                    let e = AbstractEquation::new(
                        coord(words[1], words[2])?,
                        coord(words[4], words[5])?,
                        coord(words[8], words[9])?,
                        coord(words[11], words[12])?,
                    )?;
                    equations.push(e);
                }
                "chi" => {
                    for w in &words[1..] {
                        let (a, b) = w.split_once(':').ok_or_else(|| err("chi terms are index:coefficient"))?;
                        let c = b.parse::<i64>().map_err(|_| err("bad coefficient"))?;
                        chi.push((num(a)?, c));
                    }
                }
                "zero" if words.len() == 3 => zero = Some(coord(words[1], words[2])?),
                _ => return Err(err("unrecognised line")),
            }
        }
        let p = p.ok_or(AbstractError::Parse { line: 0, message: "missing p line".into() })?;
        let fixed_zero = zero.ok_or(AbstractError::Parse { line: 0, message: "missing zero line".into() })?;
        if fixed_zero.is_quad() {
            return Err(AbstractError::RoleViolation(fixed_zero));
        }
        for c in equations.iter().flat_map(|e| e.coords()).chain([fixed_zero]) {
            if c.tet >= p {
                return Err(AbstractError::NoSuchCoordinate(c));
            }
        }
        if let Some(&(i, _)) = chi.iter().find(|&&(i, _)| i >= 7 * p) {
            return Err(AbstractError::NoSuchCoordinate(AbstractCoord::from_index(i)));
        }
        Ok(AbstractInstance { p, equations, chi, fixed_zero })
    }
}

/// The instance built from a clause set.
pub fn reduce_sat(c: &ClauseSet) -> Result<AbstractInstance, AbstractError> {
    let n = c.len();
    if n < 2 {
        return Err(AbstractError::TooFewClauses(n));
    }
    let l = Layout { n };
    let mut equations = build_m1(c);
    equations.extend(build_m2(n)?);
    let chi = (1..=n).flat_map(|k| (1..=3).map(move |i| (l.x(k, i).index(), 1))).collect();
    Ok(AbstractInstance { p: l.tets(), equations, chi, fixed_zero: l.y(1, 5) })
}

/// Outcome of a vertex-solution search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub answer: bool,
    /// The first admissible extreme ray with positive objective.
    pub witness: Option<Ray>,
    /// Admissible extreme rays examined.
    pub admissible_rays: usize,
}

fn decide_cone(sys: &ConeSystem, chi: impl Fn(&[BigInt]) -> BigInt) -> Decision {
    let opts = EnumOptions { adjacency: Adjacency::Combinatorial, prune_quads: true, parallel: true };
    let rays = filter_admissible(&extreme_rays_with(sys, opts), &sys.quad_blocks);
    let witness = rays.iter().find(|r| chi(r.coords()).is_positive()).cloned();
    Decision { answer: witness.is_some(), witness, admissible_rays: rays.len() }
}

/// Decides an instance through its admissible extreme rays: a positive
/// admissible vector exists iff some admissible extreme ray is positive.
pub fn decide_instance(inst: &AbstractInstance) -> Result<Decision, AbstractError> {
    if !check_compatible(inst.p, &inst.equations)?.compatible {
        return Err(AbstractError::IncompatibleM);
    }
    Ok(decide_cone(&inst.cone(), |x| inst.chi_value(x)))
}

/// One-in-three satisfiability by exhaustive search over all assignments.
/// The empty clause set is satisfied by the empty assignment.
pub fn brute_force_sat(c: &ClauseSet) -> Result<Option<Vec<bool>>, AbstractError> {
    brute_force_sat_bounded(c, DEFAULT_VARIABLE_BOUND)
}

pub fn brute_force_sat_bounded(c: &ClauseSet, bound: usize) -> Result<Option<Vec<bool>>, AbstractError> {
    let m = c.variables();
    if m > bound {
        return Err(AbstractError::TooManyVariables(m, bound));
    }
    let masks: Vec<u64> = c.clauses.iter().map(|cl| cl.iter().fold(0u64, |acc, &v| acc | 1 << v)).collect();
    for bits in 0u64..(1u64 << m) {
        if masks.iter().all(|&mk| (bits & mk).count_ones() == 1) {
            return Ok(Some((0..m).map(|v| bits >> v & 1 == 1).collect()));
        }
    }
    Ok(None)
}

/// The explicit solution built from a satisfying assignment.
pub fn construct_witness(c: &ClauseSet, assignment: &[bool]) -> Result<Vec<i64>, AbstractError> {
    let n = c.len();
    if n < 2 {
        return Err(AbstractError::TooFewClauses(n));
    }
    if !c.satisfied_by(assignment) {
        return Err(AbstractError::AssignmentDoesNotSatisfy);
    }
    let l = Layout { n };
    let mut v = vec![0i64; 7 * l.tets()];
    for k in 1..=n {
        let q: Vec<i64> = c.clauses[k - 1].iter().map(|&var| assignment[var] as i64).collect();
        for i in 1..=3u8 {
            v[l.x(k, i).index()] = q[i as usize - 1];
        }
        v[l.x(k, 4).index()] = q[2];
        v[l.x(k, 6).index()] = q[2];
        v[l.x(k, 5).index()] = q[1] + q[2];
        v[l.x(k, 7).index()] = q[1] + q[2];
    }
    Ok(v)
}

/// Reads a one-in-three assignment off an admissible positive solution:
/// a variable is true iff its quadrilateral coordinates are non-zero.
pub fn extract_assignment(c: &ClauseSet, x: &[BigInt]) -> Result<Vec<bool>, AbstractError> {
    let inst = reduce_sat(c)?;
    if x.len() != inst.dim() || x.iter().any(Signed::is_negative) {
        return Err(AbstractError::PreconditionViolated);
    }
    let sys = inst.cone();
    let dot = |row: &[(usize, i64)]| row.iter().fold(BigInt::zero(), |acc, &(i, k)| acc + &x[i] * k);
    let quads_ok = inst.quad_blocks().iter().all(|b| b.iter().filter(|&&i| !x[i].is_zero()).count() <= 1);
    if !quads_ok
        || !sys.rows.iter().all(|r| dot(r).is_zero())
        || !x[inst.fixed_zero.index()].is_zero()
        || !inst.chi_value(x).is_positive()
    {
        return Err(AbstractError::PreconditionViolated);
    }
    let l = Layout { n: c.len() };
    let mut value: Vec<Option<bool>> = vec![None; c.variables()];
    for (k, clause) in c.clauses.iter().enumerate() {
        for (i, &var) in clause.iter().enumerate() {
            let truth = !x[l.x(k + 1, i as u8 + 1).index()].is_zero();
            match value[var] {
                Some(prev) if prev != truth => return Err(AbstractError::PreconditionViolated),
                _ => value[var] = Some(truth),
            }
        }
    }
    let assignment: Vec<bool> = value.into_iter().map(|v| v.unwrap_or(false)).collect();
    if !c.satisfied_by(&assignment) {
        return Err(AbstractError::PreconditionViolated);
    }
    Ok(assignment)
}

/// Whether `tri` has an admissible vector with positive Euler
/// characteristic and the given triangle coordinate zero.
pub fn decide_concrete(tri: &Triangulation, coord: usize) -> Result<Decision, AbstractError> {
    if coord >= 7 * tri.size() || coord % 7 < 3 {
        return Err(AbstractError::BadCoordinate(coord));
    }
    let m = matching_system(tri);
    let mut sys = ConeSystem::from_matching(&m).fix_zero(coord);
    sys.rows.retain(|r| !r.is_empty());
    let chi = EulerFunctional::new(tri);
    let weights = chi.scaled_weights();
    Ok(decide_cone(&sys, |x| x.iter().zip(&weights).map(|(a, b)| a * b).sum()))
}
