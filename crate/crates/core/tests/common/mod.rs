//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use normsurf::cone::ConeSystem;
use normsurf::normal::is_admissible;
use normsurf::{DiscType, Gluing, NormalVector, Perm4, Skeleton, Triangulation};

/// Null space basis of a dense rational matrix restricted to `cols`, by
/// reduced row echelon form.
pub fn nullspace(rows: &[Vec<i64>], cols: &[usize]) -> Vec<Vec<BigRational>> {
    let m = cols.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| cols.iter().map(|&c| BigRational::from_integer(BigInt::from(r[c]))).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m {
        let Some(p) = (row..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = BigRational::one() / a[row][col].clone();
        for v in a[row].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..a.len() {
            if i != row && !a[i][col].is_zero() {
                let k = a[i][col].clone();
                for j in 0..m {
                    let sub = &k * &a[row][j];
                    a[i][j] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); m];
            v[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Extreme rays of `{x >= 0, A x = 0}` by scanning every support pattern:
/// a support carries an extreme ray iff the restricted null space is a line
/// spanned by a vector that is non-zero of one sign on every coordinate.
pub fn support_oracle(dim: usize, rows: &[Vec<i64>]) -> BTreeSet<Vec<BigInt>> {
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << dim) {
        let cols: Vec<usize> = (0..dim).filter(|&i| mask >> i & 1 == 1).collect();
        let ns = nullspace(rows, &cols);
        if ns.len() != 1 {
            continue;
        }
        let v = &ns[0];
        let all_pos = v.iter().all(|x| x.is_positive());
        let all_neg = v.iter().all(|x| x.is_negative());
        if !(all_pos || all_neg) {
            continue;
        }
        let lcm = v.iter().fold(BigInt::one(), |l, x| num_integer::lcm(l, x.denom().clone()));
        let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| num_integer::gcd(g, x.clone()));
        let mut full = vec![BigInt::zero(); dim];
        for (k, &c) in cols.iter().enumerate() {
            full[c] = (&ints[k] / &g).abs();
        }
        out.insert(full);
    }
    out
}

pub fn dense_rows(sys: &ConeSystem) -> Vec<Vec<i64>> {
    sys.all_rows()
        .iter()
        .map(|r| {
            let mut d = vec![0i64; sys.dim];
            for &(i, c) in r {
                d[i] += c;
            }
            d
        })
        .collect()
}

/// Every all-quadrilateral choice, one per tetrahedron, that satisfies the
/// matching equations.
pub fn splitting_oracle(tri: &Triangulation) -> Vec<NormalVector> {
    let n = tri.size();
    let mut out = Vec::new();
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        let discs: Vec<DiscType> = (0..n)
            .map(|_| {
                let d = DiscType::QUADS[c % 3];
                c /= 3;
                d
            })
            .collect();
        let x = NormalVector::from_discs(&discs);
        if is_admissible(tri, &x).unwrap() {
            out.push(x);
        }
    }
    out
}

/// Every one-disc-per-tetrahedron admissible vector, by scanning all `7^n` choices.
pub fn spanning_oracle(tri: &Triangulation) -> BTreeSet<NormalVector> {
    let n = tri.size();
    let mut out = BTreeSet::new();
    for code in 0..7usize.pow(n as u32) {
        let mut c = code;
        let discs: Vec<DiscType> = (0..n)
            .map(|_| {
                let d = DiscType::from_offset(c % 7);
                c /= 7;
                d
            })
            .collect();
        let x = NormalVector::from_discs(&discs);
        if is_admissible(tri, &x).unwrap() {
            out.insert(x);
        }
    }
    out
}

/// True iff disc `d` meets the edge joining vertices `a` and `b`.
fn meets_edge(d: DiscType, a: u8, b: u8) -> bool {
    (0..4u8)
        .filter(|&f| f != a && f != b)
        .any(|f| matches!(d.arc_in_face(f), Some(v) if v == a || v == b))
}

/// `V - E + F` of the surface cut out by an admissible vector, counting
/// normal points per edge class, arcs per face pair and discs.
pub fn euler_oracle(tri: &Triangulation, x: &NormalVector) -> i64 {
    let skel = Skeleton::compute(tri);
    let n = tri.size();
    let faces: i64 = x.coords().iter().sum();
    let mut twice_arcs = 0i64;
    for t in 0..n {
        for f in 0..4u8 {
            let arcs: i64 = DiscType::ALL.iter().filter(|d| d.arc_in_face(f).is_some()).map(|&d| x.get(t, d)).sum();
            twice_arcs += if tri.dest(t, f).is_some() { arcs } else { 2 * arcs };
        }
    }
    let edge_pairs = [(0u8, 1u8), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut points = 0i64;
    for class in &skel.edges {
        let (t, e) = class.slots[0];
        let (a, b) = edge_pairs[e as usize];
        points += DiscType::ALL.iter().filter(|&&d| meets_edge(d, a, b)).map(|&d| x.get(t, d)).sum::<i64>();
    }
    points - twice_arcs / 2 + faces
}

/// Components of a one-disc-per-tetrahedron surface, by flood fill across
/// faces the disc meets.
pub fn component_oracle(tri: &Triangulation, x: &NormalVector) -> usize {
    let discs = x.one_disc_per_tet().expect("one disc per tetrahedron");
    let n = tri.size();
    let mut label = vec![usize::MAX; n];
    let mut comps = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        label[s] = comps;
        while let Some(t) = stack.pop() {
            for f in 0..4u8 {
                if discs[t].arc_in_face(f).is_some() {
                    if let Some(d) = tri.dest(t, f) {
                        if label[d.tet] == usize::MAX {
                            label[d.tet] = comps;
                            stack.push(d.tet);
                        }
                    }
                }
            }
        }
        comps += 1;
    }
    comps
}

/// A random connected triangulation on `n` tetrahedra with a spanning tree
/// of gluings plus `extra` further gluings where free faces allow.
pub fn random_triangulation<R: Rng>(n: usize, extra: usize, rng: &mut R) -> Triangulation {
    let mut tri = Triangulation::new(n).unwrap();
    let perms: Vec<Perm4> = Perm4::all().collect();
    let glue = |tri: &mut Triangulation, t: usize, u: usize, rng: &mut R| -> bool {
        let free = |tri: &Triangulation, t: usize| (0..4u8).filter(|&f| tri.dest(t, f).is_none()).collect::<Vec<_>>();
        let (ft, fu) = (free(tri, t), free(tri, u));
        let Some(&f) = ft.choose(rng) else { return false };
        let choices: Vec<u8> = fu.into_iter().filter(|&g| !(t == u && g == f)).collect();
        let Some(&g) = choices.choose(rng) else { return false };
        let fitting: Vec<Perm4> = perms.iter().copied().filter(|p| p.apply(f) == g).collect();
        let p = *fitting.choose(rng).unwrap();
        tri.glue(Gluing::new(t, f, u, g, p)).is_ok()
    };
    for t in 1..n {
        let open: Vec<usize> = (0..t).filter(|&u| (0..4u8).any(|f| tri.dest(u, f).is_none())).collect();
        let u = *open.choose(rng).unwrap();
        assert!(glue(&mut tri, t, u, rng));
    }
    for _ in 0..extra {
        let t = rng.gen_range(0..n);
        let u = rng.gen_range(0..n);
        glue(&mut tri, t, u, rng);
    }
    tri
}
