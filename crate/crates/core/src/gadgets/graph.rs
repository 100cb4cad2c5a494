//! Connected 3-regular graphs and an exhaustive Hamiltonian cycle search.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

pub const DEFAULT_ORACLE_BOUND: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no nodes")]
    Empty,
    #[error("arc endpoint {0} is not a node")]
    NoSuchNode(usize),
    #[error("node {node} has degree {degree}, expected 3")]
    NotCubic { node: usize, degree: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has {nodes} nodes, above the search bound {bound}")]
    TooLarge { nodes: usize, bound: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A connected graph in which every node has degree 3. Loops count twice
/// and parallel arcs are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicGraph {
    nodes: usize,
    /// Arcs as `(u, v)` with `u <= v`, sorted.
    arcs: Vec<(usize, usize)>,
}

impl CubicGraph {
    pub fn new(nodes: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<CubicGraph, GraphError> {
        if nodes == 0 {
            return Err(GraphError::Empty);
        }
        let mut list: Vec<(usize, usize)> = arcs.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        list.sort_unstable();
        let mut degree = vec![0; nodes];
        for &(u, v) in &list {
            for x in [u, v] {
                if x >= nodes {
                    return Err(GraphError::NoSuchNode(x));
                }
                degree[x] += 1;
            }
        }
        if let Some(node) = (0..nodes).find(|&x| degree[x] != 3) {
            return Err(GraphError::NotCubic { node, degree: degree[node] });
        }
        let g = CubicGraph { nodes, arcs: list };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// No loops and no parallel arcs.
    pub fn is_simple(&self) -> bool {
        self.arcs.iter().all(|&(u, v)| u != v) && self.arcs.windows(2).all(|w| w[0] != w[1])
    }

    /// Neighbours with multiplicity; a loop contributes its node twice.
    pub fn neighbours(&self, x: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(3);
        for &(u, v) in &self.arcs {
            if u == x {
                out.push(v);
            }
            if v == x {
                out.push(u);
            }
        }
        out
    }

    fn multiplicity(&self, u: usize, v: usize) -> usize {
        let key = (u.min(v), u.max(v));
        self.arcs.iter().filter(|&&a| a == key).count()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in self.neighbours(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn k4() -> CubicGraph {
        CubicGraph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    /// Two triangles joined by a perfect matching.
    pub fn prism() -> CubicGraph {
        CubicGraph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]).unwrap()
    }

    pub fn k33() -> CubicGraph {
        let arcs = (0..3).flat_map(|u| (3..6).map(move |v| (u, v)));
        CubicGraph::new(6, arcs).unwrap()
    }

    pub fn petersen() -> CubicGraph {
        let mut arcs = Vec::new();
        for i in 0..5 {
            arcs.push((i, (i + 1) % 5));
            arcs.push((i, i + 5));
            arcs.push((5 + i, 5 + (i + 2) % 5));
        }
        CubicGraph::new(10, arcs).unwrap()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.nodes, self.arcs.len());
        for &(u, v) in &self.arcs {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }
}

impl fmt::Display for CubicGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for CubicGraph {
    type Err = GraphError;

    /// `n m` on the first line, then `m` lines `u v` with 0-based nodes.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_pair = |line: usize, l: &str| -> Result<(usize, usize), GraphError> {
            let nums: Vec<usize> = l
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|e| GraphError::Parse { line, message: format!("{e}") })?;
            match nums[..] {
                [a, b] => Ok((a, b)),
                _ => Err(GraphError::Parse { line, message: "expected two integers".into() }),
            }
        };
        let (line, header) = lines.next().ok_or(GraphError::Parse { line: 1, message: "missing header".into() })?;
        let (n, m) = parse_pair(line, header)?;
        let arcs: Vec<(usize, usize)> = lines.map(|(i, l)| parse_pair(i, l)).collect::<Result<_, _>>()?;
        if arcs.len() != m {
            return Err(GraphError::Parse { line, message: format!("header promises {m} arcs, found {}", arcs.len()) });
        }
        CubicGraph::new(n, arcs)
    }
}

/// A uniformly shuffled pairing of half-edges, retried until the result is
/// simple and connected. `nodes` must be even and at least 4.
pub fn random_cubic_graph<R: Rng + ?Sized>(nodes: usize, rng: &mut R) -> CubicGraph {
    assert!(nodes >= 4 && nodes.is_multiple_of(2), "cubic graphs need an even node count of at least 4");
    loop {
        let mut stubs: Vec<usize> = (0..nodes).flat_map(|x| [x, x, x]).collect();
        stubs.shuffle(rng);
        let arcs: Vec<(usize, usize)> = stubs.chunks(2).map(|p| (p[0], p[1])).collect();
        if let Ok(g) = CubicGraph::new(nodes, arcs) {
            if g.is_simple() {
                return g;
            }
        }
    }
}

/// True iff `cycle` lists every node once and consecutive nodes (cyclically)
/// are joined by distinct arcs.
pub fn is_hamiltonian_cycle(g: &CubicGraph, cycle: &[usize]) -> bool {
    let n = g.nodes();
    if cycle.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in cycle {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    if n == 1 {
        return false;
    }
    let mut used: Vec<(usize, usize)> = (0..n)
        .map(|m| {
            let (u, v) = (cycle[m], cycle[(m + 1) % n]);
            (u.min(v), u.max(v))
        })
        .collect();
    used.sort_unstable();
    let mut k = 0;
    while k < used.len() {
        let run = used[k..].iter().take_while(|&&a| a == used[k]).count();
        if g.multiplicity(used[k].0, used[k].1) < run {
            return false;
        }
        k += run;
    }
    true
}

/// Exhaustive search with the default node bound.
pub fn hamiltonian_oracle(g: &CubicGraph) -> Result<Option<Vec<usize>>, GraphError> {
    hamiltonian_oracle_bounded(g, DEFAULT_ORACLE_BOUND)
}

/// A Hamiltonian cycle starting at node 0, found by backtracking, or `None`.
pub fn hamiltonian_oracle_bounded(g: &CubicGraph, bound: usize) -> Result<Option<Vec<usize>>, GraphError> {
    let n = g.nodes();
    if n > bound {
        return Err(GraphError::TooLarge { nodes: n, bound });
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|x| g.neighbours(x)).collect();
    let mut path = vec![0];
    let mut on_path = vec![false; n];
    on_path[0] = true;

    fn extend(g: &CubicGraph, adj: &[Vec<usize>], path: &mut Vec<usize>, on_path: &mut [bool]) -> bool {
        let n = adj.len();
        if path.len() == n {
            return is_hamiltonian_cycle(g, path);
        }
        let last = *path.last().unwrap();
        for &y in &adj[last] {
            if !on_path[y] {
                on_path[y] = true;
                path.push(y);
                if extend(g, adj, path, on_path) {
                    return true;
                }
                path.pop();
                on_path[y] = false;
            }
        }
        false
    }

    Ok(extend(g, &adj, &mut path, &mut on_path).then_some(path))
}
