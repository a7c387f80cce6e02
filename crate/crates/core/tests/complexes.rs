//! Homology and Steenrod squares of random small complexes, against counts
//! taken directly from the facet list.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use symjoin::chains::{chains_of, homology_dim, homology_z, normalized_chains};
use symjoin::coactions::{Cochain, Cochains};
use symjoin::presheaves::{from_facets, ComplexSet, PresheafPair, PresheafRef};
use symjoin::F2;

const TOP: usize = 2;

fn complex_strategy() -> impl Strategy<Value = (usize, Vec<u32>)> {
    // facets as bitmasks of size 1..=3 over `v` vertices
    (2usize..6).prop_flat_map(|v| (Just(v), prop::collection::vec(1u32..(1 << v), 1..7)))
}

fn build(v: usize, masks: &[u32]) -> Option<(Arc<ComplexSet>, Vec<Vec<i64>>)> {
    let facets: Vec<Vec<i64>> = masks
        .iter()
        .filter(|m| m.count_ones() <= 3)
        .map(|m| (0..v as i64).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    if facets.is_empty() {
        return None;
    }
    let vertices: Vec<i64> = (0..v as i64).collect();
    Some((from_facets(&vertices, &facets).unwrap(), facets))
}

/// Number of `d`-faces of the complex generated by `facets`.
fn face_counts(facets: &[Vec<i64>]) -> Vec<usize> {
    let mut faces: BTreeSet<Vec<i64>> = BTreeSet::new();
    for f in facets {
        for mask in 1u32..(1 << f.len()) {
            faces.insert(f.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| *x).collect());
        }
    }
    let mut out = vec![0; TOP + 1];
    for f in faces {
        out[f.len() - 1] += 1;
    }
    out
}

fn add(a: &Cochain, b: &Cochain) -> Cochain {
    a.symmetric_difference(b).cloned().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn euler_characteristic_and_universal_coefficients((v, masks) in complex_strategy()) {
        let Some((x, facets)) = build(v, &masks) else { return Ok(()) };
        let x: PresheafRef = x;
        let counts = face_counts(&facets);
        let hi = TOP as i64 + 1;
        let nz = normalized_chains::<i64>(PresheafPair::absolute(x.clone()), hi).unwrap();
        let n2 = normalized_chains::<F2>(PresheafPair::absolute(x.clone()), hi).unwrap();
        let un = chains_of::<i64>(x.clone(), hi).unwrap();
        let mut euler = 0i64;
        let mut prev_even_torsion = 0;
        for d in 0..=TOP as i64 {
            prop_assert_eq!(nz.rank(d), counts[d as usize]);
            let h = homology_z(&nz, d).unwrap();
            prop_assert_eq!(&homology_z(&un, d).unwrap(), &h);
            let even_torsion = h.torsion.iter().filter(|t| (*t % 2u32) == 0u32.into()).count();
            prop_assert_eq!(homology_dim(&n2, d).unwrap(), h.rank + even_torsion + prev_even_torsion);
            prev_even_torsion = even_torsion;
            euler += if d % 2 == 0 { h.rank as i64 } else { -(h.rank as i64) };
        }
        // no simplices above TOP, so H_TOP is free and the sum is complete
        prop_assert_eq!(euler, counts[0] as i64 - counts[1] as i64 + counts[2] as i64);
    }

    #[test]
    fn steenrod_squares_on_random_complexes((v, masks) in complex_strategy(), pick: u64) {
        let Some((x, _)) = build(v, &masks) else { return Ok(()) };
        let c = Cochains::new(x, TOP).unwrap();
        for d in 0..=TOP {
            let reps = c.cohomology_basis(d);
            if reps.is_empty() {
                continue;
            }
            let a = &reps[pick as usize % reps.len()];
            let b = &reps[(pick / 7) as usize % reps.len()];
            // perturb by a coboundary δe of a single (d−1)-simplex
            let shifted = if d > 0 && !c.basis(d - 1).is_empty() {
                let s = c.basis(d - 1)[(pick / 49) as usize % c.basis(d - 1).len()].clone();
                add(a, &c.coboundary(&Cochain::from([s]), d - 1))
            } else {
                a.clone()
            };
            prop_assert_eq!(c.class_of(&c.steenrod(0, a, d).unwrap().0, d, &reps), c.class_of(a, d, &reps));
            for i in 0..=d + 1 {
                let (sa, da) = c.steenrod(i, a, d).unwrap();
                prop_assert_eq!(da, d + i);
                if da > TOP + 1 {
                    continue;
                }
                let top_reps = c.cohomology_basis(da);
                prop_assert!(c.is_cocycle(&sa, da));
                let class = c.class_of(&sa, da, &top_reps);
                prop_assert_eq!(&c.class_of(&c.steenrod(i, &shifted, d).unwrap().0, da, &top_reps), &class);
                let sum = add(&c.steenrod(i, a, d).unwrap().0, &c.steenrod(i, b, d).unwrap().0);
                prop_assert_eq!(c.class_of(&c.steenrod(i, &add(a, b), d).unwrap().0, da, &top_reps), c.class_of(&sum, da, &top_reps));
                if i == d {
                    prop_assert_eq!(&c.class_of(&c.cup_aw(a, d, a, d), da, &top_reps), &class);
                }
            }
        }
    }
}
