mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use normsurf::abstract_problem::*;
use normsurf::cone::{extreme_rays, extreme_rays_with, is_extreme_ray, Adjacency, ConeSystem, EnumOptions};
use normsurf::detect::{enumerate_spanning_central, find_splitting_surface};
use normsurf::gadgets::{random_cubic_graph, CubicGraph};
use normsurf::{NormalVector, Triangulation};

fn system() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=8).prop_flat_map(|dim| (Just(dim), prop::collection::vec(prop::collection::vec(-3i64..=3, dim), 0..=5)))
}

fn clause_set(rng: &mut ChaCha8Rng, n: usize, vars: usize) -> ClauseSet {
    let all: Vec<usize> = (0..vars).collect();
    let clauses = (0..n)
        .map(|_| {
            let c: Vec<usize> = all.choose_multiple(rng, 3).copied().collect();
            [c[0], c[1], c[2]]
        })
        .collect();
    ClauseSet::from_indices(clauses).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cone_matches_support_oracle((dim, rows) in system()) {
        let mut sys = ConeSystem::new(dim);
        for r in &rows {
            sys = sys.with_dense_row(r);
        }
        let oracle = support_oracle(dim, &rows);
        let rays = extreme_rays(&sys);
        let got: BTreeSet<Vec<BigInt>> = rays.iter().map(|r| r.coords().to_vec()).collect();
        prop_assert_eq!(&got, &oracle);
        let alg = extreme_rays_with(&sys, EnumOptions { adjacency: Adjacency::Algebraic, ..Default::default() });
        prop_assert_eq!(alg, rays.clone());
        for r in &rays {
            prop_assert!(is_extreme_ray(&sys, r).unwrap());
        }
    }

    #[test]
    fn pinned_coordinates_match_oracle((dim, rows) in system(), pin in 0usize..8) {
        let pin = pin % dim;
        let sys = rows.iter().fold(ConeSystem::new(dim), |s, r| s.with_dense_row(r)).fix_zero(pin);
        let got: BTreeSet<Vec<BigInt>> = extreme_rays(&sys).iter().map(|r| r.coords().to_vec()).collect();
        prop_assert_eq!(got, support_oracle(dim, &dense_rows(&sys)));
    }

    #[test]
    fn relabelling_preserves_detection(seed in any::<u64>(), n in 1usize..=5, extra in 0usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tri = random_triangulation(n, extra, &mut rng);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let moved = tri.relabel(&order);
        let permute = |x: &NormalVector| {
            let mut c = vec![0i64; 7 * n];
            for t in 0..n {
                c[7 * order[t]..7 * order[t] + 7].copy_from_slice(&x.coords()[7 * t..7 * t + 7]);
            }
            NormalVector::from_coords(c)
        };
        let before: BTreeSet<NormalVector> = enumerate_spanning_central(&tri).unwrap().iter().map(permute).collect();
        let after: BTreeSet<NormalVector> = enumerate_spanning_central(&moved).unwrap().into_iter().collect();
        prop_assert_eq!(before, after);
        prop_assert_eq!(find_splitting_surface(&tri).unwrap().is_some(), find_splitting_surface(&moved).unwrap().is_some());
    }

    #[test]
    fn triangulation_text_round_trip(seed in any::<u64>(), n in 1usize..=6, extra in 0usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tri = random_triangulation(n, extra, &mut rng);
        let text = tri.to_text();
        let back: Triangulation = text.parse().unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back.gluings(), tri.gluings());
    }

    #[test]
    fn vector_and_graph_text_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords: Vec<i64> = (0..7 * rng.gen_range(1..5)).map(|_| rng.gen_range(0..5)).collect();
        let x = NormalVector::from_coords(coords);
        prop_assert_eq!(x.to_text().parse::<NormalVector>().unwrap(), x);
        let g = random_cubic_graph(2 * rng.gen_range(2..6), &mut rng);
        prop_assert_eq!(g.to_text().parse::<CubicGraph>().unwrap(), g);
    }

    #[test]
    fn witness_soundness(seed in any::<u64>(), n in 2usize..=5, vars in 3usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = clause_set(&mut rng, n, vars);
        let inst = reduce_sat(&c).unwrap();
        prop_assert!(check_compatible(inst.p, &inst.equations).unwrap().compatible);
        prop_assert_eq!(inst.to_text().parse::<AbstractInstance>().unwrap(), inst.clone());
        if let Some(t) = brute_force_sat(&c).unwrap() {
            let w = construct_witness(&c, &t).unwrap();
            prop_assert!(inst.is_m_admissible(&w));
            prop_assert_eq!(w[inst.fixed_zero.index()], 0);
            let big: Vec<BigInt> = w.iter().map(|&v| BigInt::from(v)).collect();
            prop_assert_eq!(inst.chi_value(&big), BigInt::from(n));
            let back = extract_assignment(&c, &big).unwrap();
            let used: BTreeSet<usize> = c.clauses.iter().flatten().copied().collect();
            for v in used {
                prop_assert_eq!(back[v], t[v]);
            }
        }
    }
}
