//! Random-instance properties of the morphism calculus beyond the exhaustive
//! sizes, with independently computed fibres as the oracle.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symjoin::joins::random_morphism;
use symjoin::oscalc::{include_subset, restrict, restrict_upper, OSMorphism};

fn mor(seed: u64, k: usize, n: usize) -> OSMorphism {
    random_morphism(&mut ChaCha8Rng::seed_from_u64(seed), k, n)
}

fn subset(mask: u32, m: usize) -> Vec<u32> {
    (1..=m as u32).filter(|i| mask >> (i - 1) & 1 == 1).collect()
}

/// Composite fibres: `(fg)⁻¹(j)` lists `g⁻¹(i)` for `i ∈ f⁻¹(j)` in `f`'s order.
fn composite_fibers(f: &OSMorphism, g: &OSMorphism) -> Vec<Vec<u32>> {
    let gf = g.fibers();
    f.fibers().iter().map(|fj| fj.iter().flat_map(|&i| gf[i as usize - 1].clone()).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composition_matches_fibre_oracle(a in 0usize..7, b in 1usize..6, c in 1usize..6, s1: u64, s2: u64) {
        let g = mor(s1, a, b);
        let f = mor(s2, b, c);
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.fibers(), composite_fibers(&f, &g));
        prop_assert_eq!(fg.underlying(), f.underlying().compose(&g.underlying()).unwrap());
    }

    #[test]
    fn composition_is_associative_and_unital(
        a in 0usize..7, b in 1usize..6, c in 1usize..6, d in 1usize..6, s1: u64, s2: u64, s3: u64,
    ) {
        let h = mor(s1, a, b);
        let g = mor(s2, b, c);
        let f = mor(s3, c, d);
        let lhs = f.compose(&g).unwrap().compose(&h).unwrap();
        let rhs = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(OSMorphism::identity(b).compose(&h).unwrap(), h.clone());
        prop_assert_eq!(h.compose(&OSMorphism::identity(a)).unwrap(), h);
    }

    #[test]
    fn fibres_round_trip(k in 0usize..9, n in 1usize..6, s: u64) {
        let f = mor(s, k, n);
        prop_assert_eq!(OSMorphism::from_fibers(k, &f.fibers()).unwrap(), f.clone());
        let (o, p) = (f.omap().clone(), f.perm().clone());
        prop_assert_eq!(OSMorphism::new(o, p).unwrap(), f);
    }

    #[test]
    fn restriction_identities(k in 0usize..7, m in 1usize..6, n in 1usize..6, s1: u64, s2: u64, mask: u32) {
        let g = mor(s1, k, m);
        let f = mor(s2, m, n);
        let i = subset(mask, n);
        // (P1)
        let j = f.underlying().preimage(&i);
        let (_, upper) = restrict(&f, &i).unwrap();
        let lhs = include_subset::<OSMorphism>(&i, n).unwrap().compose(&upper).unwrap();
        let rhs = f.compose(&include_subset::<OSMorphism>(&j, m).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // (P3), composable reading
        let lhs = restrict_upper(&f.compose(&g).unwrap(), &i).unwrap();
        let rhs = restrict_upper(&f, &i).unwrap().compose(&restrict_upper(&g, &j).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // restricted fibres are the fibres over I, order kept
        let fib = f.fibers();
        let want: Vec<Vec<u32>> = i.iter().map(|&t| {
            fib[t as usize - 1].iter().map(|x| j.iter().position(|y| y == x).unwrap() as u32 + 1).collect()
        }).collect();
        prop_assert_eq!(upper.fibers(), want);
    }

    #[test]
    fn inclusions_intersect(m in 0usize..8, a: u32, b: u32) {
        let (sa, sb) = (subset(a, m), subset(b, m));
        let ib = include_subset::<OSMorphism>(&sb, m).unwrap();
        let lhs = include_subset::<OSMorphism>(&sa, m).unwrap().compose(&restrict_upper(&ib, &sa).unwrap()).unwrap();
        let ab: Vec<u32> = sa.iter().copied().filter(|x| sb.contains(x)).collect();
        prop_assert_eq!(lhs, include_subset::<OSMorphism>(&ab, m).unwrap());
    }
}
