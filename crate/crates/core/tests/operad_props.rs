//! Chain-level operad identities on random basis elements of 𝔧 and 𝔞, and
//! compatibility of S with the surjection operad.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symjoin::joins::random_morphism;
use symjoin::operads::{compose, Operad, OperadElement};
use symjoin::oscalc::{OSMorphism, Perm};
use symjoin::surjbridge::{compose_elements, map_s};
use symjoin::Ring;

fn surjection(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> OSMorphism {
    loop {
        let f = random_morphism(rng, n + extra, n);
        if f.is_surjective() {
            return f;
        }
    }
}

fn element(op: Operad, rng: &mut ChaCha8Rng, n: usize, extra: usize) -> OperadElement<i64> {
    OperadElement::basis(op, surjection(rng, n, extra)).unwrap()
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Perm {
    use rand::seq::SliceRandom;
    let mut v: Vec<u32> = (1..=n as u32).collect();
    v.shuffle(rng);
    Perm::new(v).unwrap()
}

fn op_of(j: bool) -> Operad {
    if j { Operad::J } else { Operad::A }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn differential_squares_to_zero_and_commutes_with_action(j: bool, n in 1usize..5, extra in 0usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = element(op_of(j), &mut rng, n, extra);
        prop_assert!(x.differential().differential().terms.is_zero());
        let pi = random_perm(&mut rng, n);
        let rho = random_perm(&mut rng, n);
        prop_assert_eq!(x.act(&pi).differential(), x.differential().act(&pi));
        prop_assert_eq!(x.act(&pi).act(&rho), x.act(&pi.compose(&rho).unwrap()));
    }

    #[test]
    fn composition_is_a_chain_map(j: bool, n in 1usize..3, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = op_of(j);
        let e = rng.gen_range(0..3);
        let x = element(op, &mut rng, n, e);
        let ys: Vec<_> = (0..n).map(|_| { let m = rng.gen_range(1..3); let e = rng.gen_range(0..2); element(op, &mut rng, m, e) }).collect();
        let lhs = compose(&x, &ys).unwrap().differential().terms;
        let mut rhs = compose(&x.differential(), &ys).unwrap().terms;
        let mut before = x.degree;
        for i in 0..n {
            let mut yd = ys.clone();
            yd[i] = ys[i].differential();
            rhs.add_scaled(&compose(&x, &yd).unwrap().terms, &i64::sign(before));
            before += ys[i].degree;
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn s_is_an_equivariant_chain_map(n in 1usize..5, extra in 0usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = element(Operad::J, &mut rng, n, extra);
        prop_assert_eq!(map_s(&x.differential()).terms, map_s(&x).differential().terms);
        let pi = random_perm(&mut rng, n);
        prop_assert_eq!(map_s(&x.act(&pi)).terms, map_s(&x).act(&pi).terms);
    }

    #[test]
    fn s_preserves_composition(n in 1usize..3, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = rng.gen_range(0..2);
        let x = element(Operad::J, &mut rng, n, e);
        let ys: Vec<_> = (0..n).map(|_| { let m = rng.gen_range(1..3); let e = rng.gen_range(0..2); element(Operad::J, &mut rng, m, e) }).collect();
        let lhs = map_s(&compose(&x, &ys).unwrap());
        let sys: Vec<_> = ys.iter().map(map_s).collect();
        let rhs = compose_elements(&map_s(&x), &sys).unwrap();
        prop_assert_eq!(lhs.terms, rhs.terms);
    }
}
