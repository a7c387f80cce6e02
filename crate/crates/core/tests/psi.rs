//! Ψ on random instances at degrees above the exhaustive range.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symjoin::joins::{psi, random_morphism};
use symjoin::oscalc::OSMorphism;

/// Fibre over `(b, j)`: the elements of `g_b⁻¹(j)` lying over `b`, in `g_b`'s order.
fn psi_oracle(f: &OSMorphism, gs: &[OSMorphism]) -> OSMorphism {
    let uf = f.underlying();
    let fibers: Vec<Vec<u32>> = gs
        .iter()
        .enumerate()
        .flat_map(|(b, g)| {
            let uf = &uf;
            g.fibers().into_iter().map(move |fj| fj.into_iter().filter(|&x| uf.apply(x) == b as u32 + 1).collect())
        })
        .collect();
    OSMorphism::from_fibers(f.source(), &fibers).unwrap()
}

struct Instance {
    f: OSMorphism,
    gs: Vec<OSMorphism>,
    hs: Vec<OSMorphism>,
    ks: Vec<usize>,
}

fn instance(seed: u64, k: usize, max_arity: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_arity);
    let ks: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=max_arity)).collect();
    let f = random_morphism(&mut rng, k, n);
    let gs: Vec<OSMorphism> = ks.iter().map(|&m| random_morphism(&mut rng, k, m)).collect();
    let total: usize = ks.iter().sum();
    let hs: Vec<OSMorphism> = (0..total).map(|_| { let m = rng.gen_range(1..=max_arity); random_morphism(&mut rng, k, m) }).collect();
    Instance { f, gs, hs, ks }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn psi_matches_fibre_oracle(k in 0usize..9, seed: u64) {
        let t = instance(seed, k, 3);
        prop_assert_eq!(psi(&t.f, &t.gs), psi_oracle(&t.f, &t.gs));
    }

    #[test]
    fn psi_associative(k in 0usize..8, seed: u64) {
        let t = instance(seed, k, 3);
        let lhs = psi(&psi(&t.f, &t.gs), &t.hs);
        let mut mids = Vec::new();
        let mut offset = 0;
        for (g, &ki) in t.gs.iter().zip(&t.ks) {
            mids.push(psi(g, &t.hs[offset..offset + ki]));
            offset += ki;
        }
        prop_assert_eq!(lhs, psi(&t.f, &mids));
    }

    #[test]
    fn psi_left_unit(k in 0usize..9, seed: u64) {
        let t = instance(seed, k, 4);
        let g = &t.gs[0];
        let bang = OSMorphism::from_fibers(k, &[(1..=k as u32).collect()]).unwrap();
        prop_assert_eq!(psi(&bang, std::slice::from_ref(g)), g.clone());
    }
}
