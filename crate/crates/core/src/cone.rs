//! Extreme rays of homogeneous cones `{x >= 0, Ax = 0}` in exact arithmetic.
//!
//! Enumeration is the double description method applied one equation at a
//! time: starting from the unit rays of the non-negative orthant, each
//! equation keeps the rays on its hyperplane and replaces every adjacent
//! pair straddling it by the positive combination that lands on it.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::restricted_rank;
use crate::normal::MatchingSystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error("vector does not lie in the cone")]
    NotInCone,
    #[error("vector has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Homogeneous equations over non-negative coordinates, with optional
/// quadrilateral blocks and coordinates pinned to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSystem {
    pub dim: usize,
    /// Sparse rows `(coordinate, coefficient)`.
    pub rows: Vec<Vec<(usize, i64)>>,
    /// Disjoint coordinate triples of which at most one may be non-zero.
    pub quad_blocks: Vec<[usize; 3]>,
    pub zero_fixed: BTreeSet<usize>,
}

impl ConeSystem {
    pub fn new(dim: usize) -> ConeSystem {
        assert!(dim >= 1, "cone dimension must be positive");
        ConeSystem { dim, rows: Vec::new(), quad_blocks: Vec::new(), zero_fixed: BTreeSet::new() }
    }

    pub fn with_row(mut self, row: Vec<(usize, i64)>) -> ConeSystem {
        assert!(row.iter().all(|&(i, _)| i < self.dim));
        self.rows.push(row);
        self
    }

    /// Dense row convenience.
    pub fn with_dense_row(self, row: &[i64]) -> ConeSystem {
        assert_eq!(row.len(), self.dim);
        let sparse = row.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
        self.with_row(sparse)
    }

    /// The standard solution cone of a matching system, with quadrilateral
    /// blocks for each tetrahedron.
    pub fn from_matching(m: &MatchingSystem) -> ConeSystem {
        let mut sys = ConeSystem::new(m.dim);
        sys.rows = m.rows.iter().map(|r| r.coeffs.clone()).collect();
        sys.quad_blocks = (0..m.dim / 7).map(|t| [7 * t, 7 * t + 1, 7 * t + 2]).collect();
        sys
    }

    pub fn fix_zero(mut self, coord: usize) -> ConeSystem {
        assert!(coord < self.dim);
        self.zero_fixed.insert(coord);
        self
    }

    /// Equation rows followed by a unit row for each pinned coordinate.
    pub fn all_rows(&self) -> Vec<Vec<(usize, i64)>> {
        let mut out: Vec<_> = self.zero_fixed.iter().map(|&i| vec![(i, 1)]).collect();
        out.extend(self.rows.iter().cloned());
        out
    }

    fn contains(&self, x: &[BigInt]) -> bool {
        x.len() == self.dim
            && x.iter().all(|c| !c.is_negative())
            && self.zero_fixed.iter().all(|&i| x[i].is_zero())
            && self.rows.iter().all(|r| dot(r, x).is_zero())
    }

    fn quad_ok(&self, support: &FixedBitSet) -> bool {
        self.quad_blocks
            .iter()
            .all(|b| b.iter().filter(|&&i| support.contains(i)).count() <= 1)
    }
}

fn dot(row: &[(usize, i64)], x: &[BigInt]) -> BigInt {
    row.iter().fold(BigInt::zero(), |acc, &(i, c)| acc + &x[i] * c)
}

/// A primitive non-negative integer vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ray {
    coords: Vec<BigInt>,
}

impl Ray {
    /// Divides out the gcd. Returns `None` for the zero vector or any negative entry.
    pub fn new(mut coords: Vec<BigInt>) -> Option<Ray> {
        if coords.iter().any(Signed::is_negative) {
            return None;
        }
        let g = coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return None;
        }
        if !g.is_one() {
            for c in &mut coords {
                *c /= &g;
            }
        }
        Some(Ray { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Option<Ray> {
        Ray::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coords.len()).filter(|&i| !self.coords[i].is_zero()).collect()
    }

    /// Coordinates as `i64`, if they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|c| i64::try_from(c).ok()).collect()
    }

    /// Largest bit length among the entries.
    pub fn max_bits(&self) -> u64 {
        self.coords.iter().map(BigInt::bits).max().unwrap_or(0)
    }

    pub fn is_admissible_for(&self, quad_blocks: &[[usize; 3]]) -> bool {
        quad_blocks
            .iter()
            .all(|b| b.iter().filter(|&&i| !self.coords[i].is_zero()).count() <= 1)
    }
}

/// One ray per line, space-separated.
pub fn rays_to_text(rays: &[Ray]) -> String {
    let mut out = String::new();
    for r in rays {
        let line: Vec<String> = r.coords.iter().map(BigInt::to_string).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adjacency {
    /// No other current ray has support inside the union of the pair's supports.
    Combinatorial,
    /// The pair's joint support leaves a 2-dimensional solution space.
    Algebraic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    pub adjacency: Adjacency,
    /// Drop intermediate rays that already break a quadrilateral block.
    /// Only admissible rays survive, which is all the callers that set this need.
    pub prune_quads: bool,
    pub parallel: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { adjacency: Adjacency::Combinatorial, prune_quads: false, parallel: true }
    }
}

struct Working {
    coords: Vec<BigInt>,
    support: FixedBitSet,
}

impl Working {
    fn unit(dim: usize, i: usize) -> Working {
        let mut coords = vec![BigInt::zero(); dim];
        coords[i] = BigInt::one();
        let mut support = FixedBitSet::with_capacity(dim);
        support.insert(i);
        Working { coords, support }
    }
}

/// All primitive extreme rays, sorted lexicographically.
pub fn extreme_rays(sys: &ConeSystem) -> Vec<Ray> {
    extreme_rays_with(sys, EnumOptions::default())
}

pub fn extreme_rays_with(sys: &ConeSystem, opts: EnumOptions) -> Vec<Ray> {
    let dim = sys.dim;
    let mut rays: Vec<Working> = (0..dim).map(|i| Working::unit(dim, i)).collect();
    let rows: Vec<Vec<(usize, i64)>> = sys.all_rows().into_iter().filter(|r| !r.is_empty()).collect();
    let mut processed: Vec<Vec<(usize, i64)>> = Vec::with_capacity(rows.len());

    for row in &rows {
        let values: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.coords)).collect();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next: Vec<Working> = Vec::new();
        for (i, v) in values.iter().enumerate() {
            if v.is_positive() {
                pos.push(i);
            } else if v.is_negative() {
                neg.push(i);
            }
        }
        if !pos.is_empty() && !neg.is_empty() {
            let pairs: Vec<(usize, usize)> =
                pos.iter().flat_map(|&p| neg.iter().map(move |&n| (p, n))).collect();
            // Rank of the processed rows bounds how small a shared zero set can be.
            let min_common_zeros = dim.saturating_sub(2 + processed.len());
            let combine = |&(p, n): &(usize, usize)| -> Option<Working> {
                let mut union = rays[p].support.clone();
                union.union_with(&rays[n].support);
                if dim - union.count_ones(..) < min_common_zeros {
                    return None;
                }
                if opts.prune_quads && !sys.quad_ok(&union) {
                    return None;
                }
                let adjacent = match opts.adjacency {
                    Adjacency::Combinatorial => !rays.iter().enumerate().any(|(k, r)| {
                        k != p && k != n && r.support.is_subset(&union)
                    }),
                    Adjacency::Algebraic => {
                        let cols: Vec<usize> = union.ones().collect();
                        restricted_rank(&processed, &cols) + 2 == cols.len()
                    }
                };
                if !adjacent {
                    return None;
                }
                let a = &values[p];
                let b = -&values[n];
                let coords: Vec<BigInt> = rays[p]
                    .coords
                    .iter()
                    .zip(&rays[n].coords)
                    .map(|(x, y)| &b * x + a * y)
                    .collect();
                let ray = Ray::new(coords).expect("positive combination of non-negative rays");
                let mut support = FixedBitSet::with_capacity(dim);
                for i in ray.support() {
                    support.insert(i);
                }
                Some(Working { coords: ray.coords, support })
            };
            let made: Vec<Working> = if opts.parallel {
                pairs.par_iter().filter_map(combine).collect()
            } else {
                pairs.iter().filter_map(combine).collect()
            };
            next.extend(made);
        }
        for (i, r) in rays.into_iter().enumerate() {
            if values[i].is_zero() {
                next.push(r);
            }
        }
        if opts.prune_quads {
            next.retain(|r| sys.quad_ok(&r.support));
        }
        rays = next;
        processed.push(row.clone());
    }

    let mut out: Vec<Ray> = rays.into_iter().map(|w| Ray { coords: w.coords }).collect();
    out.sort();
    out.dedup();
    out
}

/// True iff `x` spans an extreme ray: the equations restricted to the
/// support of `x` have rank one less than the support size.
pub fn is_extreme_ray(sys: &ConeSystem, x: &Ray) -> Result<bool, ConeError> {
    if x.dim() != sys.dim {
        return Err(ConeError::DimensionMismatch { expected: sys.dim, found: x.dim() });
    }
    if !sys.contains(&x.coords) {
        return Err(ConeError::NotInCone);
    }
    let support = x.support();
    Ok(restricted_rank(&sys.rows, &support) + 1 == support.len())
}

/// Rays with at most one non-zero coordinate in each block.
pub fn filter_admissible(rays: &[Ray], quad_blocks: &[[usize; 3]]) -> Vec<Ray> {
    rays.iter().filter(|r| r.is_admissible_for(quad_blocks)).cloned().collect()
}
