//! Joins of O-sets and OΣ-sets, and the canonical maps between them.
//!
//! Join simplices are stored in the summand form: an indexing map
//! `φ : k̄ → n̄` (order-preserving for `J^O`, arbitrary for `J^Σ`) and one
//! part per factor, the `i`-th of degree `|φ⁻¹(i)|`. The coset form
//! (ordered partition, parts, permutation) is available as a conversion.

use std::sync::Arc;

use rayon::prelude::*;

use crate::oscalc::{
    block_assemble, canonical_decompose, restrict_upper, star_decompose, Morphism, OMap, OSMorphism, Perm, SetMap,
};
use crate::presheaves::{
    boundary, morphisms, DegreeCache, Presheaf, PresheafError, PresheafPair, PresheafRef, SigmaFree, Simplex,
    Variance,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JoinVariant {
    /// `J^O` of O-sets, indexed by order-preserving maps.
    O,
    /// `J^Σ` of OΣ-sets, indexed by all set maps.
    Sigma,
}

impl JoinVariant {
    pub fn factor_variance(self) -> Variance {
        match self {
            JoinVariant::O => Variance::O,
            JoinVariant::Sigma => Variance::OSigma,
        }
    }

    /// Indexing maps `k̄ → n̄`.
    pub fn indexers(self, k: usize, n: usize) -> Vec<SetMap> {
        match self {
            JoinVariant::O => OMap::all(k, n).iter().map(OMap::as_set_map).collect(),
            JoinVariant::Sigma => SetMap::all(k, n),
        }
    }
}

pub struct Join {
    variant: JoinVariant,
    factors: Vec<PresheafRef>,
    cache: DegreeCache,
}

/// `J^O(X₁,…,Xₙ)` or `J^Σ(X₁,…,Xₙ)`.
pub fn join(variant: JoinVariant, factors: Vec<PresheafRef>) -> Result<Arc<Join>, PresheafError> {
    let want = variant.factor_variance();
    for f in &factors {
        if f.variance() != want {
            return Err(PresheafError::VarianceMismatch(want, f.variance()));
        }
    }
    Ok(Arc::new(Join { variant, factors, cache: DegreeCache::default() }))
}

impl Join {
    pub fn variant(&self) -> JoinVariant {
        self.variant
    }

    pub fn factors(&self) -> &[PresheafRef] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }
}

/// Split a join simplex into indexer and parts.
pub fn join_parts(x: &Simplex) -> (&SetMap, &[Simplex]) {
    match x {
        Simplex::Join(phi, parts) => (phi, parts),
        _ => panic!("not a join simplex: {x:?}"),
    }
}

/// The structure map: `(x₁,…,xₙ)∘f = (x₁f^{φ⁻¹(1)},…,xₙf^{φ⁻¹(n)})` in the
/// summand of `φ∘f`.
pub fn join_act(factors: &[PresheafRef], x: &Simplex, f: &OSMorphism) -> Simplex {
    let (phi, parts) = join_parts(x);
    let new_phi = phi.compose(&f.underlying()).expect("degree mismatch");
    let new_parts = parts
        .iter()
        .zip(factors)
        .enumerate()
        .map(|(i, (p, xi))| {
            let fi = restrict_upper(f, &phi.fiber(i as u32 + 1)).expect("valid fibre");
            xi.act(p, &fi)
        })
        .collect();
    Simplex::Join(new_phi, new_parts)
}

impl Presheaf for Join {
    fn variance(&self) -> Variance {
        self.variant.factor_variance()
    }
    fn describe(&self) -> String {
        let tag = match self.variant {
            JoinVariant::O => "J^O",
            JoinVariant::Sigma => "J^Σ",
        };
        let inner: Vec<String> = self.factors.iter().map(|f| f.describe()).collect();
        format!("{tag}({})", inner.join(","))
    }
    fn enumerate(&self, k: usize) -> Vec<Simplex> {
        let n = self.factors.len();
        let mut out = Vec::new();
        for phi in self.variant.indexers(k, n) {
            let sizes = phi.fiber_sizes();
            let mut acc: Vec<Vec<Simplex>> = vec![vec![]];
            for (f, &a) in self.factors.iter().zip(&sizes) {
                let s = f.simplices(a);
                let mut next = Vec::with_capacity(acc.len() * s.len());
                for t in &acc {
                    for x in s.iter() {
                        let mut t2 = t.clone();
                        t2.push(x.clone());
                        next.push(t2);
                    }
                }
                acc = next;
            }
            out.extend(acc.into_iter().map(|parts| Simplex::Join(phi.clone(), parts)));
        }
        out
    }
    fn act(&self, x: &Simplex, m: &OSMorphism) -> Simplex {
        debug_assert!(self.variant == JoinVariant::Sigma || m.perm().is_identity());
        join_act(&self.factors, x, m)
    }
    fn cache(&self) -> &DegreeCache {
        &self.cache
    }
}

// ---------------------------------------------------------------------------
// Relative joins

/// `(J(X₁,…,Xₙ), ∂J)`: a simplex is in `∂J` when its indexer is not
/// surjective or some part lies in the corresponding sub-object.
pub fn relative_join(variant: JoinVariant, pairs: Vec<PresheafPair>) -> Result<PresheafPair, PresheafError> {
    let factors: Vec<PresheafRef> = pairs.iter().map(|p| p.total.clone()).collect();
    let total: PresheafRef = join(variant, factors)?;
    let sub = Arc::new(move |x: &Simplex, _k: usize| {
        let (phi, parts) = join_parts(x);
        if !phi.is_surjective() {
            return true;
        }
        let sizes = phi.fiber_sizes();
        parts.iter().zip(&pairs).zip(sizes).any(|((p, pair), a)| pair.contains(p, a))
    });
    Ok(PresheafPair::new(total, sub))
}

// ---------------------------------------------------------------------------
// Associativity Θ

/// Which block of `k₁+…+kₙ` a 1-based position lies in: `(block, offset)`
/// with both 1-based.
pub fn block_of(pos: u32, ks: &[usize]) -> (usize, u32) {
    let mut start = 0u32;
    for (i, &k) in ks.iter().enumerate() {
        if pos <= start + k as u32 {
            return (i + 1, pos - start);
        }
        start += k as u32;
    }
    panic!("position {pos} outside blocks {ks:?}")
}

/// Positions of block `i` (1-based) in `k₁+…+kₙ`.
pub fn block_positions(i: usize, ks: &[usize]) -> Vec<u32> {
    let start: usize = ks[..i - 1].iter().sum();
    (start as u32 + 1..=(start + ks[i - 1]) as u32).collect()
}

/// `Θ : J(P_{k₁},…,P_{kₙ}) → P_{k₁+…+kₙ}`, `(φ; g₁,…,gₙ) ↦ φ⟨g₁,…,gₙ⟩`.
pub fn theta_standard(x: &Simplex) -> OSMorphism {
    let (phi, parts) = join_parts(x);
    let gs: Vec<OSMorphism> = parts.iter().map(|p| p.as_mor().expect("standard part").clone()).collect();
    block_assemble(phi, &gs).expect("block sizes")
}

/// The unique block decomposition `h = φ⟨g₁,…,gₙ⟩` of `h : k̄ → (Σkᵢ)‾`.
pub fn theta_standard_inverse(h: &OSMorphism, ks: &[usize]) -> Simplex {
    let u = h.underlying();
    let phi = SetMap::new(u.images().iter().map(|&p| block_of(p, ks).0 as u32).collect(), ks.len()).unwrap();
    let parts = (1..=ks.len())
        .map(|i| Simplex::Mor(restrict_upper(h, &block_positions(i, ks)).expect("block restriction")))
        .collect();
    Simplex::Join(phi, parts)
}

/// `Θ : J(J(X_{1,*}),…,J(X_{n,*})) → J(X_{*,*})`: the summand
/// `(f; g₁,…,gₙ)` goes to the summand `f⟨g₁,…,gₙ⟩`, parts unchanged.
pub fn theta(x: &Simplex) -> Simplex {
    let (f, inner) = join_parts(x);
    let mut gs = Vec::new();
    let mut parts = Vec::new();
    for y in inner {
        let (g, ps) = join_parts(y);
        gs.push(g.clone());
        parts.extend(ps.iter().cloned());
    }
    Simplex::Join(block_assemble(f, &gs).expect("block sizes"), parts)
}

/// Inverse of [`theta`] for inner arities `ks`.
pub fn theta_inverse(y: &Simplex, ks: &[usize]) -> Simplex {
    let (h, parts) = join_parts(y);
    let f = SetMap::new(h.images().iter().map(|&p| block_of(p, ks).0 as u32).collect(), ks.len()).unwrap();
    let mut inner = Vec::new();
    let mut offset = 0;
    for (i, &k) in ks.iter().enumerate() {
        let g = restrict_upper(h, &block_positions(i + 1, ks)).expect("block restriction");
        inner.push(Simplex::Join(g, parts[offset..offset + k].to_vec()));
        offset += k;
    }
    Simplex::Join(f, inner)
}

// ---------------------------------------------------------------------------
// Symmetry T_σ and the coset form

/// `T_σ : J^Σ(X₁,…,Xₙ) → J^Σ(X_{σ⁻¹(1)},…,X_{σ⁻¹(n)})`.
pub fn t_sigma(sigma: &Perm, x: &Simplex) -> Simplex {
    let (phi, parts) = join_parts(x);
    let s = SetMap::new(sigma.images().to_vec(), sigma.len()).unwrap();
    let inv = sigma.inverse();
    let new_parts = (1..=parts.len() as u32).map(|j| parts[inv.apply(j) as usize - 1].clone()).collect();
    Simplex::Join(s.compose(phi).expect("arity"), new_parts)
}

/// Factors reordered as `(X_{σ⁻¹(1)},…,X_{σ⁻¹(n)})`.
pub fn permuted_factors(sigma: &Perm, xs: &[PresheafRef]) -> Vec<PresheafRef> {
    let inv = sigma.inverse();
    (1..=xs.len() as u32).map(|j| xs[inv.apply(j) as usize - 1].clone()).collect()
}

/// A join simplex `[(y₁,…,yₙ), π]` in coset form: `yᵢ` has degree `aᵢ`,
/// the order-preserving map of the partition is `partition`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetForm {
    pub partition: OMap,
    pub parts: Vec<Simplex>,
    pub perm: Perm,
}

/// `(x₁,…,xₙ) ↦ [(x₁(π⁻¹)^{φ⁻¹(1)},…), π]` with `φ = fπ` canonical.
pub fn to_coset(factors: &[PresheafRef], x: &Simplex) -> CosetForm {
    let (phi, parts) = join_parts(x);
    let (f, pi) = canonical_decompose(phi);
    let pi_inv = OSMorphism::from_perm(pi.inverse());
    let ys = parts
        .iter()
        .zip(factors)
        .enumerate()
        .map(|(i, (p, xi))| xi.act(p, &restrict_upper(&pi_inv, &phi.fiber(i as u32 + 1)).unwrap()))
        .collect();
    CosetForm { partition: f, parts: ys, perm: pi }
}

/// `[(y₁,…,yₙ), π] ↦ (y₁π^{f⁻¹(1)},…,yₙπ^{f⁻¹(n)})` in the summand `fπ`.
/// Any representative of the coset may be passed.
pub fn from_coset(factors: &[PresheafRef], c: &CosetForm) -> Simplex {
    let f = c.partition.as_set_map();
    let pi = OSMorphism::from_perm(c.perm.clone());
    let phi = f.compose(&pi.underlying()).expect("degree");
    let xs = c
        .parts
        .iter()
        .zip(factors)
        .enumerate()
        .map(|(i, (y, xi))| xi.act(y, &restrict_upper(&pi, &f.fiber(i as u32 + 1)).unwrap()))
        .collect();
    Simplex::Join(phi, xs)
}

/// The structure map in coset form:
/// `[(y), π]∘(g,σ) = [(yᵢ (π_*g)ᵢ), g^*π∘σ]`.
pub fn coset_act(factors: &[PresheafRef], c: &CosetForm, m: &OSMorphism) -> CosetForm {
    let (g_star_pi, pi_star_g) = star_decompose(&c.perm, m.omap()).expect("degree");
    let f = c.partition.as_set_map();
    let psg = OSMorphism::from_omap(pi_star_g.clone());
    let parts = c
        .parts
        .iter()
        .zip(factors)
        .enumerate()
        .map(|(i, (y, xi))| xi.act(y, &restrict_upper(&psg, &f.fiber(i as u32 + 1)).unwrap()))
        .collect();
    CosetForm {
        partition: c.partition.compose(&pi_star_g).unwrap(),
        parts,
        perm: g_star_pi.compose(m.perm()).unwrap(),
    }
}

/// The block permutation of `σ ∈ Σ_n` on blocks of sizes given by `f`:
/// block `i` moves to position `σ(i)`, order inside blocks preserved.
/// This is `f^*σ`, with `σ_*f` the partition of the permuted sizes.
pub fn block_permutation(sigma: &Perm, f: &OMap) -> (Perm, OMap) {
    star_decompose(sigma, f).expect("arity")
}

/// `T_σ` in coset form: `[(x_{σ⁻¹(1)},…), σ_{a₁,…,aₙ}π]`.
pub fn t_sigma_coset(sigma: &Perm, c: &CosetForm) -> CosetForm {
    let (block, new_partition) = block_permutation(sigma, &c.partition);
    let inv = sigma.inverse();
    let parts = (1..=c.parts.len() as u32).map(|j| c.parts[inv.apply(j) as usize - 1].clone()).collect();
    CosetForm { partition: new_partition, parts, perm: block.compose(&c.perm).unwrap() }
}

/// `J^Σ(X₁Σ,…,XₙΣ) → J^O(X₁,…,Xₙ)Σ`.
pub fn symmetrization_forward(sym_factors: &[PresheafRef], x: &Simplex) -> Simplex {
    let c = to_coset(sym_factors, x);
    // move the Σ_{aᵢ}-components into the permutation
    let mut zs = Vec::new();
    let mut rhos = Vec::new();
    for p in &c.parts {
        match p {
            Simplex::Sym(z, rho) => {
                zs.push((**z).clone());
                rhos.push(rho.clone());
            }
            _ => panic!("expected a symmetrised part"),
        }
    }
    let perm = Perm::direct_sum(&rhos).compose(&c.perm).unwrap();
    Simplex::Sym(Box::new(Simplex::Join(c.partition.as_set_map(), zs)), perm)
}

/// `J^O(X₁,…,Xₙ)Σ → J^Σ(X₁Σ,…,XₙΣ)`.
pub fn symmetrization_backward(sym_factors: &[PresheafRef], x: &Simplex) -> Simplex {
    match x {
        Simplex::Sym(j, pi) => {
            let (f, zs) = join_parts(j);
            let sizes = f.fiber_sizes();
            let parts =
                zs.iter().zip(sizes).map(|(z, a)| Simplex::Sym(Box::new(z.clone()), Perm::identity(a))).collect();
            let partition = OMap::new(f.images().to_vec(), f.target()).unwrap();
            from_coset(sym_factors, &CosetForm { partition, parts, perm: pi.clone() })
        }
        _ => panic!("expected a symmetrised join simplex"),
    }
}

// ---------------------------------------------------------------------------
// Canonical maps α and Ψ

/// `α(f; x₁,…,xₙ) = (x₁i_{f⁻¹(1)},…,xₙ i_{f⁻¹(n)})` in the summand of the
/// underlying map of `f`. All `xᵢ` have degree `k = source(f)`.
pub fn alpha(factors: &[PresheafRef], f: &OSMorphism, xs: &[Simplex]) -> Simplex {
    let u = f.underlying();
    let k = f.source();
    let parts = xs
        .iter()
        .zip(factors)
        .enumerate()
        .map(|(i, (x, xi))| xi.act(x, &OSMorphism::inclusion(&u.fiber(i as u32 + 1), k).unwrap()))
        .collect();
    Simplex::Join(u, parts)
}

/// `Ψ(f; g₁,…,gₙ) = f⟨g₁∘i_{f⁻¹(1)},…,gₙ∘i_{f⁻¹(n)}⟩`.
///
/// The fibre over `(i, j)` is `f⁻¹(i) ∩ gᵢ⁻¹(j)` in the order of `gᵢ`, since
/// restricting along an inclusion restricts orders; so `x` sits at
/// `(offsetᵢ + gᵢ(x), rank of gᵢ's permutation at x)`.
pub fn psi(f: &OSMorphism, gs: &[OSMorphism]) -> OSMorphism {
    let k = f.source();
    assert_eq!(gs.len(), f.target(), "Ψ needs one gᵢ per block");
    let mut offsets = Vec::with_capacity(gs.len());
    let mut total = 0;
    for g in gs {
        assert_eq!(g.source(), k, "Ψ needs all gᵢ in degree {k}");
        offsets.push(total);
        total += g.target() as u32;
    }
    let keys: Vec<(u32, u32)> = (1..=k as u32)
        .map(|x| {
            let b = (f.omap().apply(f.perm().apply(x)) - 1) as usize;
            let g = &gs[b];
            let p = g.perm().apply(x);
            (offsets[b] + g.omap().apply(p), p)
        })
        .collect();
    let perm: Vec<u32> = keys.iter().map(|kx| keys.iter().filter(|ky| *ky < kx).count() as u32 + 1).collect();
    let mut targets: Vec<u32> = keys.iter().map(|kx| kx.0).collect();
    targets.sort_unstable();
    OSMorphism::new(OMap::new(targets, total as usize).unwrap(), Perm::new(perm).unwrap()).unwrap()
}

/// The set-level coaction `Ψ_n^X(f, x) = α(f; x,…,x)`.
pub fn coaction_set_level(x: &PresheafRef, f: &OSMorphism, s: &Simplex) -> Simplex {
    let n = f.target();
    let factors = vec![x.clone(); n];
    alpha(&factors, f, &vec![s.clone(); n])
}

/// The map `OΣ_{k₁}×…×OΣ_{kₙ}×J^Σ(X₁,…,Xₙ) → J^Σ(OΣ_{k₁}×X₁,…)` followed
/// by the coactions on each factor, landing in `J^Σ(J^Σ(X₁^{k₁}),…)`.
pub fn psi_tilde(xs: &[PresheafRef], gs: &[OSMorphism], y: &Simplex) -> Simplex {
    let (f, parts) = join_parts(y);
    let k = f.source();
    let inner = gs
        .iter()
        .zip(parts)
        .zip(xs)
        .enumerate()
        .map(|(i, ((g, p), x))| {
            let gi = g.compose(&OSMorphism::inclusion(&f.fiber(i as u32 + 1), k).unwrap()).unwrap();
            coaction_set_level(x, &gi, p)
        })
        .collect();
    Simplex::Join(f.clone(), inner)
}

// ---------------------------------------------------------------------------
// Exhaustive checks

pub type Check = Result<usize, String>;

fn fail<T: std::fmt::Debug>(what: &str, lhs: T, rhs: T) -> String {
    format!("{what}: {lhs:?} ≠ {rhs:?}")
}

/// Functoriality of a join built from the given factors, degrees ≤ `max_degree`.
pub fn check_join_functorial(j: &Join, max_degree: usize) -> Check {
    crate::presheaves::check_functoriality(j, max_degree)
}

/// `Θ` on standard objects: bijective, inverse is the block decomposition,
/// and it commutes with the action.
pub fn check_theta_standard(variant: JoinVariant, ks: &[usize], max_degree: usize) -> Check {
    let v = variant.factor_variance();
    let factors: Vec<PresheafRef> = ks.iter().map(|&k| crate::presheaves::standard_object(v, k)).collect();
    let j = join(variant, factors)?;
    let total: usize = ks.iter().sum();
    let target = crate::presheaves::standard_object(v, total);
    let mut count = 0;
    for k in 0..=max_degree {
        let xs = j.simplices(k);
        if xs.len() != target.simplices(k).len() {
            return Err(format!("degree {k}: {} vs {} simplices", xs.len(), target.simplices(k).len()));
        }
        for x in xs.iter() {
            let h = theta_standard(x);
            if &theta_standard_inverse(&h, ks) != x {
                return Err(format!("Θ⁻¹Θ ≠ id on {x:?}"));
            }
            for kp in 0..=max_degree {
                for m in morphisms(v, kp, k) {
                    count += 1;
                    let lhs = theta_standard(&j.act(x, &m));
                    let rhs = h.compose(&m).unwrap();
                    if lhs != rhs {
                        return Err(fail("Θ(x∘m) vs Θ(x)∘m", lhs, rhs));
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Lemma-level associativity: `Θ` for nested joins against the flat join,
/// including the action, for `J(J(X_{1,*}), …, J(X_{n,*}))`.
pub fn check_theta_general(variant: JoinVariant, groups: &[Vec<PresheafRef>], max_degree: usize) -> Check {
    let inner: Vec<PresheafRef> =
        groups.iter().map(|g| join(variant, g.clone()).map(|j| j as PresheafRef)).collect::<Result<_, _>>()?;
    let nested = join(variant, inner)?;
    let flat = join(variant, groups.iter().flatten().cloned().collect())?;
    let ks: Vec<usize> = groups.iter().map(Vec::len).collect();
    let v = variant.factor_variance();
    let mut count = 0;
    for k in 0..=max_degree {
        let xs = nested.simplices(k);
        if xs.len() != flat.simplices(k).len() {
            return Err(format!("degree {k}: {} vs {} simplices", xs.len(), flat.simplices(k).len()));
        }
        for x in xs.iter() {
            let y = theta(x);
            if &theta_inverse(&y, &ks) != x {
                return Err(format!("Θ⁻¹Θ ≠ id on {x:?}"));
            }
            for kp in 0..=max_degree {
                for m in morphisms(v, kp, k) {
                    count += 1;
                    let lhs = theta(&nested.act(x, &m));
                    let rhs = flat.act(&y, &m);
                    if lhs != rhs {
                        return Err(fail("Θ(x∘m) vs Θ(x)∘m", lhs, rhs));
                    }
                }
            }
        }
    }
    Ok(count)
}

/// `T_σ` is a natural isomorphism, `T_{πσ} = T_π T_σ`, and the coset-form
/// formula with block permutations agrees.
pub fn check_t_sigma(xs: &[PresheafRef], max_degree: usize) -> Check {
    let n = xs.len();
    let j = join(JoinVariant::Sigma, xs.to_vec())?;
    let mut count = 0;
    let perms = Perm::all(n);
    for k in 0..=max_degree {
        for x in j.simplices(k).iter() {
            for s in &perms {
                let target_factors = permuted_factors(s, xs);
                let tx = t_sigma(s, x);
                // coset form
                let c = to_coset(xs, x);
                let tc = from_coset(&target_factors, &t_sigma_coset(s, &c));
                if tc != tx {
                    return Err(fail("coset T_σ", tc, tx));
                }
                for p in &perms {
                    count += 1;
                    let lhs = t_sigma(&p.compose(s).unwrap(), x);
                    let rhs = t_sigma(p, &tx);
                    if lhs != rhs {
                        return Err(fail("T_{πσ} vs T_π T_σ", lhs, rhs));
                    }
                }
                for kp in 0..=max_degree {
                    for m in morphisms(Variance::OSigma, kp, k) {
                        count += 1;
                        let lhs = t_sigma(s, &j.act(x, &m));
                        let rhs = join_act(&target_factors, &tx, &m);
                        if lhs != rhs {
                            return Err(fail("T_σ(x∘m) vs T_σ(x)∘m", lhs, rhs));
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Coset form: round trip, independence of the representative, and the
/// coset-form action formula.
pub fn check_coset_form(xs: &[PresheafRef], max_degree: usize) -> Check {
    let j = join(JoinVariant::Sigma, xs.to_vec())?;
    let mut count = 0;
    for k in 0..=max_degree {
        for x in j.simplices(k).iter() {
            let c = to_coset(xs, x);
            if &from_coset(xs, &c) != x {
                return Err(format!("coset round trip fails on {x:?}"));
            }
            // other representatives: [(yᵢ∘ρᵢ⁻¹), ρπ] for ρ ∈ Σ_{a₁}×…×Σ_{aₙ}
            let sizes = c.partition.fiber_sizes();
            let mut reps: Vec<Vec<Perm>> = vec![vec![]];
            for &a in &sizes {
                reps = reps
                    .into_iter()
                    .flat_map(|r| {
                        Perm::all(a).into_iter().map(move |p| {
                            let mut r2 = r.clone();
                            r2.push(p);
                            r2
                        })
                    })
                    .collect();
            }
            for rho in reps {
                count += 1;
                let parts = c
                    .parts
                    .iter()
                    .zip(xs)
                    .zip(&rho)
                    .map(|((y, xi), r)| xi.act(y, &OSMorphism::from_perm(r.inverse())))
                    .collect();
                let perm = Perm::direct_sum(&rho).compose(&c.perm).unwrap();
                let alt = CosetForm { partition: c.partition.clone(), parts, perm };
                if &from_coset(xs, &alt) != x {
                    return Err(format!("representative dependence at {x:?}"));
                }
            }
            for kp in 0..=max_degree {
                for m in morphisms(Variance::OSigma, kp, k) {
                    count += 1;
                    let lhs = from_coset(xs, &coset_act(xs, &c, &m));
                    let rhs = j.act(x, &m);
                    if lhs != rhs {
                        return Err(fail("coset action", lhs, rhs));
                    }
                }
            }
        }
    }
    Ok(count)
}

/// `J^Σ(X₁Σ,…,XₙΣ) ≅ J^O(X₁,…,Xₙ)Σ`: mutually inverse, action-compatible.
pub fn check_symmetrization(os: &[PresheafRef], max_degree: usize) -> Check {
    let sym: Vec<PresheafRef> =
        os.iter().map(|x| crate::presheaves::sigma_free(x.clone())).collect::<Result<_, _>>()?;
    let left = join(JoinVariant::Sigma, sym.clone())?;
    let jo: PresheafRef = join(JoinVariant::O, os.to_vec())?;
    let right = crate::presheaves::sigma_free(jo.clone())?;
    let mut count = 0;
    for k in 0..=max_degree {
        if left.simplices(k).len() != right.simplices(k).len() {
            return Err(format!("degree {k}: counts differ"));
        }
        for x in left.simplices(k).iter() {
            let y = symmetrization_forward(&sym, x);
            if &symmetrization_backward(&sym, &y) != x {
                return Err(format!("round trip fails on {x:?}"));
            }
            for kp in 0..=max_degree {
                for m in morphisms(Variance::OSigma, kp, k) {
                    count += 1;
                    let lhs = symmetrization_forward(&sym, &left.act(x, &m));
                    let rhs = match &y {
                        Simplex::Sym(z, pi) => SigmaFree::act_on(jo.as_ref(), z, pi, &m),
                        _ => unreachable!(),
                    };
                    if lhs != rhs {
                        return Err(fail("symmetrization vs action", lhs, rhs));
                    }
                }
            }
        }
        for y in right.simplices(k).iter() {
            if &symmetrization_forward(&sym, &symmetrization_backward(&sym, y)) != y {
                return Err(format!("reverse round trip fails on {y:?}"));
            }
        }
    }
    Ok(count)
}

/// Naturality of `α` in the OΣ-action, `α((f;x)∘g) = α(f;x)∘g`, for all
/// `f`, tuples of simplices in degree `k ≤ max_degree`, and all `g`.
pub fn check_alpha_natural(xs: &[PresheafRef], max_degree: usize) -> Check {
    let n = xs.len();
    let mut count = 0;
    for k in 0..=max_degree {
        let tuples = tuples_in_degree(xs, k);
        for f in OSMorphism::all(k, n) {
            for t in &tuples {
                let a = alpha(xs, &f, t);
                for kp in 0..=max_degree {
                    for g in OSMorphism::all(kp, k) {
                        count += 1;
                        let lhs = join_act(xs, &a, &g);
                        let moved: Vec<Simplex> = t.iter().zip(xs).map(|(x, xi)| xi.act(x, &g)).collect();
                        let rhs = alpha(xs, &f.compose(&g).unwrap(), &moved);
                        if lhs != rhs {
                            return Err(fail("α(f;x)∘g vs α((f;x)∘g)", lhs, rhs));
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

/// `T_π α(f; x₁,…,xₙ) = α(πf; x_{π⁻¹(1)},…)`.
pub fn check_alpha_equivariant(xs: &[PresheafRef], max_degree: usize) -> Check {
    let n = xs.len();
    let mut count = 0;
    for k in 0..=max_degree {
        let tuples = tuples_in_degree(xs, k);
        for f in OSMorphism::all(k, n) {
            for t in &tuples {
                let a = alpha(xs, &f, t);
                for p in Perm::all(n) {
                    count += 1;
                    let inv = p.inverse();
                    let shuffled: Vec<Simplex> =
                        (1..=n as u32).map(|j| t[inv.apply(j) as usize - 1].clone()).collect();
                    let lhs = t_sigma(&p, &a);
                    let rhs = alpha(&permuted_factors(&p, xs), &f.left_perm(&p).unwrap(), &shuffled);
                    if lhs != rhs {
                        return Err(fail("T_π α vs α(πf)", lhs, rhs));
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Naturality of `α` in each factor along `xᵢ ↦ xᵢ∘h` for a fixed morphism
/// `h`, i.e. along maps of OΣ-sets `OΣ_m → OΣ_{m'}` given by postcomposition.
pub fn check_alpha_factor_natural(ms: &[usize], post: &[OSMorphism], max_degree: usize) -> Check {
    let src: Vec<PresheafRef> =
        ms.iter().map(|&m| crate::presheaves::standard_object(Variance::OSigma, m)).collect();
    let dst: Vec<PresheafRef> =
        post.iter().map(|h| crate::presheaves::standard_object(Variance::OSigma, h.target())).collect();
    let mut count = 0;
    let map_part = |i: usize, x: &Simplex| Simplex::Mor(post[i].compose(x.as_mor().unwrap()).unwrap());
    for k in 0..=max_degree {
        for f in OSMorphism::all(k, ms.len()) {
            for t in tuples_in_degree(&src, k) {
                count += 1;
                let a = alpha(&src, &f, &t);
                let (phi, parts) = join_parts(&a);
                let lhs = Simplex::Join(phi.clone(), parts.iter().enumerate().map(|(i, p)| map_part(i, p)).collect());
                let moved: Vec<Simplex> = t.iter().enumerate().map(|(i, x)| map_part(i, x)).collect();
                let rhs = alpha(&dst, &f, &moved);
                if lhs != rhs {
                    return Err(fail("α naturality in factors", lhs, rhs));
                }
            }
        }
    }
    Ok(count)
}

fn tuples_in_degree(xs: &[PresheafRef], k: usize) -> Vec<Vec<Simplex>> {
    let mut acc: Vec<Vec<Simplex>> = vec![vec![]];
    for x in xs {
        let s = x.simplices(k);
        acc = acc
            .into_iter()
            .flat_map(|t| {
                s.iter().map(move |y| {
                    let mut t2 = t.clone();
                    t2.push(y.clone());
                    t2
                })
            })
            .collect();
    }
    acc
}

/// `Ψ = Θ∘α` on standard objects.
pub fn check_psi_is_theta_alpha(n: usize, ks: &[usize], max_degree: usize) -> Check {
    let factors: Vec<PresheafRef> =
        ks.iter().map(|&k| crate::presheaves::standard_object(Variance::OSigma, k)).collect();
    let mut count = 0;
    for k in 0..=max_degree {
        for f in OSMorphism::all(k, n) {
            for t in tuples_in_degree(&factors, k) {
                count += 1;
                let gs: Vec<OSMorphism> = t.iter().map(|x| x.as_mor().unwrap().clone()).collect();
                let lhs = psi(&f, &gs);
                let rhs = theta_standard(&alpha(&factors, &f, &t));
                if lhs != rhs {
                    return Err(fail("Ψ vs Θα", lhs, rhs));
                }
            }
        }
    }
    Ok(count)
}

/// The compatibility square of `α` with `Ψ` and `Θ`:
/// `Θ∘α∘A(α,…,α) = α∘Ψ` on `A(A(X_{1,*}),…,A(X_{n,*}))`.
pub fn check_alpha_psi_square(groups: &[Vec<PresheafRef>], max_degree: usize) -> Check {
    let n = groups.len();
    let ks: Vec<usize> = groups.iter().map(Vec::len).collect();
    let inner: Vec<PresheafRef> = groups
        .iter()
        .map(|g| join(JoinVariant::Sigma, g.clone()).map(|j| j as PresheafRef))
        .collect::<Result<_, _>>()?;
    let flat: Vec<PresheafRef> = groups.iter().flatten().cloned().collect();
    let mut count = 0;
    for k in 0..=max_degree {
        let flat_tuples = tuples_in_degree(&flat, k);
        // choices of gᵢ ∈ OΣ(k, kᵢ)
        let mut g_choices: Vec<Vec<OSMorphism>> = vec![vec![]];
        for &ki in &ks {
            g_choices = g_choices
                .into_iter()
                .flat_map(|c| {
                    OSMorphism::all(k, ki).into_iter().map(move |g| {
                        let mut c2 = c.clone();
                        c2.push(g);
                        c2
                    })
                })
                .collect();
        }
        for f in OSMorphism::all(k, n) {
            for gs in &g_choices {
                for t in &flat_tuples {
                    count += 1;
                    let mut offset = 0;
                    let mut inner_alphas = Vec::new();
                    for (i, g) in gs.iter().enumerate() {
                        inner_alphas.push(alpha(&groups[i], g, &t[offset..offset + ks[i]]));
                        offset += ks[i];
                    }
                    let lhs = theta(&alpha(&inner, &f, &inner_alphas));
                    let rhs = alpha(&flat, &psi(&f, gs), t);
                    if lhs != rhs {
                        return Err(fail("Θα A(α) vs αΨ", lhs, rhs));
                    }
                }
            }
        }
    }
    Ok(count)
}

/// The set-level operad structure of `{OΣ_n}`: equivariance in both forms
/// and associativity, exhaustively for the given arity/degree bounds.
pub fn check_psi_operad(max_arity: usize, max_degree: usize) -> Check {
    let mut count = 0;
    for n in 0..=max_arity {
        let perms: Vec<(Perm, Perm)> = Perm::all(n).into_iter().map(|p| { let i = p.inverse(); (p, i) }).collect();
        for ks in compositions_bounded(n, max_arity) {
            let blocks = OMap::from_fiber_sizes(&ks);
            let block_invs: Vec<Perm> = perms.iter().map(|(p, _)| block_permutation(p, &blocks).0.inverse()).collect();
            let taus: Vec<(Vec<Perm>, Perm)> = perm_tuples(&ks)
                .into_iter()
                .map(|t| {
                    let d = Perm::direct_sum(&t).inverse();
                    (t.iter().map(Perm::inverse).collect(), d)
                })
                .collect();
            for k in 0..=max_degree {
                let g_choices = morphism_tuples(k, &ks);
                // everything that does not depend on f
                let prepared: Vec<(Vec<Vec<OSMorphism>>, Vec<Vec<OSMorphism>>)> = g_choices
                    .iter()
                    .map(|gs| {
                        let shuffled = perms
                            .iter()
                            .map(|(_, inv)| (1..=n as u32).map(|j| gs[inv.apply(j) as usize - 1].clone()).collect())
                            .collect();
                        let acted = taus
                            .iter()
                            .map(|(tinv, _)| gs.iter().zip(tinv).map(|(g, t)| g.left_perm(t).unwrap()).collect())
                            .collect();
                        (shuffled, acted)
                    })
                    .collect();
                let fs = OSMorphism::all(k, n);
                let counts: Result<Vec<usize>, String> = fs
                    .par_iter()
                    .map(|f| {
                        let mut c = 0;
                        let fps: Vec<OSMorphism> = perms.iter().map(|(_, inv)| f.left_perm(inv).unwrap()).collect();
                        for (gs, (shuffled, acted)) in g_choices.iter().zip(&prepared) {
                            let base = psi(f, gs);
                            // Σ_n: Ψ(f·π; g) = Ψ(f; g_{π⁻¹(*)})·π_{k₁,…,kₙ}, with h·ρ = ρ⁻¹h
                            for ((fp, sh), binv) in fps.iter().zip(shuffled).zip(&block_invs) {
                                c += 1;
                                let lhs = psi(fp, gs);
                                let rhs = psi(f, sh).left_perm(binv).unwrap();
                                if lhs != rhs {
                                    return Err(fail("Σ_n equivariance of Ψ", lhs, rhs));
                                }
                            }
                            // Σ_{k₁}×…×Σ_{kₙ}
                            for (ac, (_, dinv)) in acted.iter().zip(&taus) {
                                c += 1;
                                let lhs = psi(f, ac);
                                let rhs = base.left_perm(dinv).unwrap();
                                if lhs != rhs {
                                    return Err(fail("block equivariance of Ψ", lhs, rhs));
                                }
                            }
                        }
                        Ok(c)
                    })
                    .collect();
                count += counts?.iter().sum::<usize>();
            }
        }
    }
    Ok(count)
}

/// Associativity `Ψ(Ψ(f; g); h) = Ψ(f; Ψ(g₁; h_{1,*}),…)`; the sizes of the
/// second layer are bounded by `max_inner`.
pub fn check_psi_associative(max_arity: usize, max_inner: usize, max_degree: usize) -> Check {
    let mut count = 0;
    for n in 0..=max_arity {
        for ks in compositions_bounded(n, max_arity) {
            let kk: Vec<Vec<usize>> = ks.iter().map(|&ki| vec![0; ki]).collect();
            let inner_shapes = nested_shapes(&kk, max_inner);
            for k in 0..=max_degree {
                let g_choices = morphism_tuples(k, &ks);
                for shape in &inner_shapes {
                    let flat: Vec<usize> = shape.iter().flatten().copied().collect();
                    let h_choices = morphism_tuples(k, &flat);
                    let fs = OSMorphism::all(k, n);
                    let counts: Result<Vec<usize>, String> = fs
                        .par_iter()
                        .map(|f| {
                            let mut c = 0;
                            for gs in &g_choices {
                                let outer = psi(f, gs);
                                for hs in &h_choices {
                                    c += 1;
                                    let lhs = psi(&outer, hs);
                                    let mut offset = 0;
                                    let mut mids = Vec::new();
                                    for (i, g) in gs.iter().enumerate() {
                                        mids.push(psi(g, &hs[offset..offset + ks[i]]));
                                        offset += ks[i];
                                    }
                                    let rhs = psi(f, &mids);
                                    if lhs != rhs {
                                        return Err(fail("Ψ associativity", lhs, rhs));
                                    }
                                }
                            }
                            Ok(c)
                        })
                        .collect();
                    count += counts?.iter().sum::<usize>();
                }
            }
        }
    }
    Ok(count)
}

/// The coaction pentagon at the OΣ-set level:
/// `Ψ^X_{Σk}(Ψ(f; g), x) = Θ ψ̃(g; Ψ^X_n(f, x))`.
pub fn check_coaction_pentagon(x: &PresheafRef, max_arity: usize, max_inner: usize, max_degree: usize) -> Check {
    let mut count = 0;
    for n in 0..=max_arity {
        for ks in compositions_bounded(n, max_inner) {
            let xs = vec![x.clone(); n];
            for k in 0..=max_degree {
                let g_choices = morphism_tuples(k, &ks);
                for s in x.simplices(k).iter() {
                    for f in OSMorphism::all(k, n) {
                        let y = coaction_set_level(x, &f, s);
                        for gs in &g_choices {
                            count += 1;
                            let lhs = coaction_set_level(x, &psi(&f, gs), s);
                            let rhs = theta(&psi_tilde(&xs, gs, &y));
                            if lhs != rhs {
                                return Err(fail("coaction pentagon", lhs, rhs));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Universal elements: factors `OΣ_k` and the tuple `(id_k,…,id_k)`.
fn universal(k: usize, n: usize) -> (Vec<PresheafRef>, Vec<Simplex>) {
    let x: PresheafRef = crate::presheaves::standard_object(Variance::OSigma, k);
    (vec![x; n], vec![Simplex::Mor(OSMorphism::identity(k)); n])
}

/// [`check_alpha_natural`] on universal elements: every `xᵢ ∈ Xᵢ(k)` is the
/// image of `id_k` under a map `OΣ_k → Xᵢ`, and `α` is natural in the factors.
pub fn check_alpha_natural_universal(max_arity: usize, max_degree: usize) -> Check {
    let mut count = 0;
    for n in 1..=max_arity {
        for k in 0..=max_degree {
            let (xs, t) = universal(k, n);
            for f in OSMorphism::all(k, n) {
                let a = alpha(&xs, &f, &t);
                for kp in 0..=max_degree {
                    for g in OSMorphism::all(kp, k) {
                        count += 1;
                        let lhs = join_act(&xs, &a, &g);
                        let moved: Vec<Simplex> = t.iter().zip(&xs).map(|(x, xi)| xi.act(x, &g)).collect();
                        let rhs = alpha(&xs, &f.compose(&g).unwrap(), &moved);
                        if lhs != rhs {
                            return Err(fail("α(f;x)∘g vs α((f;x)∘g)", lhs, rhs));
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

/// [`check_alpha_psi_square`] on universal elements, for every group shape
/// `(k₁,…,kₙ)` with `n ≤ max_arity`, `kᵢ ≤ max_inner`.
pub fn check_alpha_psi_square_universal(max_arity: usize, max_inner: usize, max_degree: usize) -> Check {
    let mut count = 0;
    for n in 1..=max_arity {
        for ks in compositions_bounded(n, max_inner) {
            let total: usize = ks.iter().sum();
            for k in 0..=max_degree {
                let (flat, t) = universal(k, total);
                let groups: Vec<Vec<PresheafRef>> = ks.iter().map(|&ki| flat[..ki].to_vec()).collect();
                let inner: Vec<PresheafRef> = groups
                    .iter()
                    .map(|g| join(JoinVariant::Sigma, g.clone()).map(|j| j as PresheafRef))
                    .collect::<Result<_, _>>()?;
                let fs = OSMorphism::all(k, n);
                let counts: Result<Vec<usize>, String> = fs
                    .par_iter()
                    .map(|f| {
                        let mut c = 0;
                        for gs in morphism_tuples(k, &ks) {
                            c += 1;
                            let inner_alphas: Vec<Simplex> =
                                gs.iter().enumerate().map(|(i, g)| alpha(&groups[i], g, &t[..ks[i]])).collect();
                            let lhs = theta(&alpha(&inner, f, &inner_alphas));
                            let rhs = alpha(&flat, &psi(f, &gs), &t);
                            if lhs != rhs {
                                return Err(fail("Θα A(α) vs αΨ", lhs, rhs));
                            }
                        }
                        Ok(c)
                    })
                    .collect();
                count += counts?.iter().sum::<usize>();
            }
        }
    }
    Ok(count)
}

/// [`check_coaction_pentagon`] on the universal element `id_k ∈ OΣ_k(k)`.
pub fn check_coaction_pentagon_universal(max_arity: usize, max_inner: usize, max_degree: usize) -> Check {
    let mut count = 0;
    for n in 1..=max_arity {
        for ks in compositions_bounded(n, max_inner) {
            for k in 0..=max_degree {
                let (xs, t) = universal(k, n);
                let (x, s) = (&xs[0], &t[0]);
                let fs = OSMorphism::all(k, n);
                let counts: Result<Vec<usize>, String> = fs
                    .par_iter()
                    .map(|f| {
                        let mut c = 0;
                        let y = coaction_set_level(x, f, s);
                        for gs in morphism_tuples(k, &ks) {
                            c += 1;
                            let lhs = coaction_set_level(x, &psi(f, &gs), s);
                            let rhs = theta(&psi_tilde(&xs, &gs, &y));
                            if lhs != rhs {
                                return Err(fail("coaction pentagon", lhs, rhs));
                            }
                        }
                        Ok(c)
                    })
                    .collect();
                count += counts?.iter().sum::<usize>();
            }
        }
    }
    Ok(count)
}

/// Outcome of [`check_psi_associative_budget`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BudgetedCount {
    pub exhaustive: usize,
    pub sampled: usize,
    /// `(degree, outer shape, inner shape)` cells that were only sampled.
    pub sampled_cells: Vec<(usize, Vec<usize>, Vec<usize>)>,
}

/// `|OΣ(k̄, n̄)| = n(n+1)⋯(n+k−1)`.
pub fn hom_size(k: usize, n: usize) -> u128 {
    (0..k).map(|i| (n + i) as u128).product()
}

/// A uniformly random element of `OΣ(k̄, n̄)` (`n ≥ 1` unless `k = 0`).
pub fn random_morphism<R: rand::Rng>(rng: &mut R, k: usize, n: usize) -> OSMorphism {
    use rand::seq::SliceRandom;
    let mut fibers = vec![Vec::new(); n];
    for x in 1..=k as u32 {
        fibers[rng.gen_range(0..n)].push(x);
    }
    for f in &mut fibers {
        f.shuffle(rng);
    }
    OSMorphism::from_fibers(k, &fibers).unwrap()
}

/// Ψ associativity with a per-cell budget: a cell (degree, shapes) with at
/// most `cap` triples is checked exhaustively, a larger one on `samples`
/// uniformly random triples drawn from `seed`.
pub fn check_psi_associative_budget(
    max_arity: usize,
    max_inner: usize,
    max_degree: usize,
    cap: u128,
    samples: usize,
    seed: u64,
) -> Result<BudgetedCount, String> {
    use rand::SeedableRng;
    let mut out = BudgetedCount::default();
    let check = |f: &OSMorphism, gs: &[OSMorphism], hs: &[OSMorphism], ks: &[usize]| -> Result<(), String> {
        let lhs = psi(&psi(f, gs), hs);
        let mut offset = 0;
        let mut mids = Vec::new();
        for (i, g) in gs.iter().enumerate() {
            mids.push(psi(g, &hs[offset..offset + ks[i]]));
            offset += ks[i];
        }
        let rhs = psi(f, &mids);
        if lhs != rhs {
            return Err(fail("Ψ associativity", lhs, rhs));
        }
        Ok(())
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for n in 0..=max_arity {
        for ks in compositions_bounded(n, max_arity) {
            let kk: Vec<Vec<usize>> = ks.iter().map(|&ki| vec![0; ki]).collect();
            for shape in nested_shapes(&kk, max_inner) {
                let flat: Vec<usize> = shape.iter().flatten().copied().collect();
                for k in 0..=max_degree {
                    let size = hom_size(k, n)
                        * ks.iter().map(|&ki| hom_size(k, ki)).product::<u128>()
                        * flat.iter().map(|&m| hom_size(k, m)).product::<u128>();
                    if size == 0 {
                        continue;
                    }
                    if size <= cap {
                        let g_choices = morphism_tuples(k, &ks);
                        let h_choices = morphism_tuples(k, &flat);
                        let fs = OSMorphism::all(k, n);
                        let counts: Result<Vec<usize>, String> = fs
                            .par_iter()
                            .map(|f| {
                                for gs in &g_choices {
                                    for hs in &h_choices {
                                        check(f, gs, hs, &ks)?;
                                    }
                                }
                                Ok(g_choices.len() * h_choices.len())
                            })
                            .collect();
                        out.exhaustive += counts?.iter().sum::<usize>();
                    } else {
                        for _ in 0..samples {
                            let f = random_morphism(&mut rng, k, n);
                            let gs: Vec<OSMorphism> = ks.iter().map(|&ki| random_morphism(&mut rng, k, ki)).collect();
                            let hs: Vec<OSMorphism> = flat.iter().map(|&m| random_morphism(&mut rng, k, m)).collect();
                            check(&f, &gs, &hs, &ks)?;
                        }
                        out.sampled += samples;
                        out.sampled_cells.push((k, ks.clone(), flat.clone()));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Relative bookkeeping: `Ψ` sends any tuple with a boundary entry into the
/// boundary. Inner arities are taken ≥ 1: with some `kᵢ = 0` the empty
/// morphism `0̄ → n̄` lies in `∂OΣ_n` yet can compose to `id₀ ∉ ∂OΣ_0`.
pub fn check_relative_maps(max_arity: usize, max_degree: usize) -> Check {
    let mut count = 0;
    for n in 0..=max_arity {
        for ks in compositions_bounded(n, max_arity).into_iter().filter(|ks| ks.iter().all(|&k| k > 0)) {
            let total: usize = ks.iter().sum();
            let target = boundary(Variance::OSigma, total);
            for k in 0..=max_degree {
                for f in OSMorphism::all(k, n) {
                    for gs in morphism_tuples(k, &ks) {
                        count += 1;
                        let any_boundary = !f.is_surjective() || gs.iter().any(|g| !g.is_surjective());
                        let h = psi(&f, &gs);
                        if any_boundary && !target.contains(&Simplex::Mor(h.clone()), k) {
                            return Err(format!("Ψ({f:?};{gs:?}) = {h:?} escapes the boundary"));
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

/// All tuples `(k₁,…,kₙ)` with entries ≤ `bound`.
pub fn compositions_bounded(n: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut acc: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        acc = acc
            .into_iter()
            .flat_map(|c| {
                (0..=bound).map(move |v| {
                    let mut c2 = c.clone();
                    c2.push(v);
                    c2
                })
            })
            .collect();
    }
    acc
}

fn nested_shapes(kk: &[Vec<usize>], bound: usize) -> Vec<Vec<Vec<usize>>> {
    let mut acc: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for group in kk {
        let opts = compositions_bounded(group.len(), bound);
        acc = acc
            .into_iter()
            .flat_map(|c| {
                opts.iter().cloned().map(move |o| {
                    let mut c2 = c.clone();
                    c2.push(o);
                    c2
                })
            })
            .collect();
    }
    acc
}

/// All tuples `(g₁,…,gₙ)` with `gᵢ ∈ OΣ(k̄, k̄ᵢ)`.
pub fn morphism_tuples(k: usize, ks: &[usize]) -> Vec<Vec<OSMorphism>> {
    let mut acc: Vec<Vec<OSMorphism>> = vec![vec![]];
    for &ki in ks {
        let opts = OSMorphism::all(k, ki);
        acc = acc
            .into_iter()
            .flat_map(|c| {
                opts.iter().cloned().map(move |g| {
                    let mut c2 = c.clone();
                    c2.push(g);
                    c2
                })
            })
            .collect();
    }
    acc
}

fn perm_tuples(ks: &[usize]) -> Vec<Vec<Perm>> {
    let mut acc: Vec<Vec<Perm>> = vec![vec![]];
    for &k in ks {
        let opts = Perm::all(k);
        acc = acc
            .into_iter()
            .flat_map(|c| {
                opts.iter().cloned().map(move |p| {
                    let mut c2 = c.clone();
                    c2.push(p);
                    c2
                })
            })
            .collect();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaves::{augment, fixtures, sigma_free, standard_object};

    /// Ψ through composition with inclusions and block assembly.
    fn psi_by_restriction(f: &OSMorphism, gs: &[OSMorphism]) -> OSMorphism {
        let u = f.underlying();
        let k = f.source();
        let restricted: Vec<OSMorphism> = gs
            .iter()
            .enumerate()
            .map(|(i, g)| g.compose(&OSMorphism::inclusion(&u.fiber(i as u32 + 1), k).unwrap()).unwrap())
            .collect();
        block_assemble(&u, &restricted).unwrap()
    }

    #[test]
    fn psi_matches_restriction_oracle() {
        for n in 0..=2 {
            for ks in compositions_bounded(n, 2) {
                for k in 0..=3 {
                    for f in OSMorphism::all(k, n) {
                        for gs in morphism_tuples(k, &ks) {
                            assert_eq!(psi(&f, &gs), psi_by_restriction(&f, &gs));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hom_size_counts() {
        for k in 0..=4 {
            for n in 0..=3 {
                assert_eq!(hom_size(k, n), OSMorphism::all(k, n).len() as u128);
            }
        }
    }

    #[test]
    fn universal_checks_small() {
        assert!(check_alpha_natural_universal(2, 2).unwrap() > 0);
        assert!(check_alpha_psi_square_universal(2, 2, 2).unwrap() > 0);
        assert!(check_coaction_pentagon_universal(2, 2, 2).unwrap() > 0);
    }

    #[test]
    fn budgeted_associativity_samples_large_cells() {
        let b = check_psi_associative_budget(2, 2, 2, 1000, 50, 7).unwrap();
        assert!(b.exhaustive > 0 && b.sampled > 0);
        assert_eq!(b.sampled, 50 * b.sampled_cells.len());
        let again = check_psi_associative_budget(2, 2, 2, 1000, 50, 7).unwrap();
        assert_eq!(b, again);
    }

    fn os(n: usize) -> PresheafRef {
        standard_object(Variance::OSigma, n)
    }

    fn small_sym() -> PresheafRef {
        sigma_free(augment(fixtures::simplex(1)).unwrap()).unwrap()
    }

    #[test]
    fn single_factor_join() {
        let j = join(JoinVariant::Sigma, vec![os(2)]).unwrap();
        for k in 0..=3 {
            assert_eq!(j.simplices(k).len(), os(2).simplices(k).len());
        }
    }

    #[test]
    fn join_counts() {
        let o1 = standard_object(Variance::O, 1);
        let j = join(JoinVariant::O, vec![o1.clone(), o1]).unwrap();
        assert_eq!(j.simplices(2).len(), 3);
        assert_eq!(standard_object(Variance::O, 2).simplices(2).len(), 3);
        let js = join(JoinVariant::Sigma, vec![os(1), os(1)]).unwrap();
        assert_eq!(js.simplices(2).len(), 6);
        assert!(join(JoinVariant::O, vec![os(1)]).is_err());
    }

    #[test]
    fn join_functorial() {
        let j = join(JoinVariant::Sigma, vec![os(1), small_sym()]).unwrap();
        assert!(check_join_functorial(&j, 3).is_ok());
        let o = join(JoinVariant::O, vec![standard_object(Variance::O, 1), standard_object(Variance::O, 2)]).unwrap();
        assert!(check_join_functorial(&o, 4).is_ok());
    }

    #[test]
    fn theta_example() {
        let phi = SetMap::new(vec![1, 2, 1], 2).unwrap();
        let g1 = OSMorphism::from_omap(OMap::identity(2));
        let g2 = OSMorphism::identity(1);
        let x = Simplex::Join(phi, vec![Simplex::Mor(g1), Simplex::Mor(g2)]);
        let h = theta_standard(&x);
        assert_eq!(h.underlying().images(), &[1, 3, 2]);
        assert_eq!(theta_standard_inverse(&h, &[2, 1]), x);
    }

    #[test]
    fn theta_standard_iso() {
        assert!(check_theta_standard(JoinVariant::Sigma, &[1, 1], 4).is_ok());
        assert!(check_theta_standard(JoinVariant::Sigma, &[2, 1], 3).is_ok());
        assert!(check_theta_standard(JoinVariant::O, &[1, 2], 4).is_ok());
        assert!(check_theta_standard(JoinVariant::Sigma, &[0, 2], 3).is_ok());
    }

    #[test]
    fn theta_nested() {
        let x = small_sym();
        let groups = vec![vec![os(1), x.clone()], vec![os(1)]];
        assert!(check_theta_general(JoinVariant::Sigma, &groups, 3).is_ok());
        let o1 = standard_object(Variance::O, 1);
        let groups = vec![vec![o1.clone()], vec![o1.clone(), o1]];
        assert!(check_theta_general(JoinVariant::O, &groups, 4).is_ok());
    }

    #[test]
    fn t_sigma_swap_example() {
        // T_τ[(x,y),π] = [(y,x), τ_{a,b}π]
        let xs = vec![os(1), os(2)];
        let j = join(JoinVariant::Sigma, xs.clone()).unwrap();
        let tau = Perm::new(vec![2, 1]).unwrap();
        for x in j.simplices(3).iter() {
            let c = to_coset(&xs, x);
            let t = t_sigma_coset(&tau, &c);
            let sizes = c.partition.fiber_sizes();
            let (a, b) = (sizes[0], sizes[1]);
            let swap: Vec<u32> = (1..=(a + b) as u32).map(|p| if p as usize <= a { p + b as u32 } else { p - a as u32 }).collect();
            assert_eq!(t.perm, Perm::new(swap).unwrap().compose(&c.perm).unwrap());
            assert_eq!(t.parts, vec![c.parts[1].clone(), c.parts[0].clone()]);
        }
    }

    #[test]
    fn t_sigma_laws() {
        assert!(check_t_sigma(&[os(1), small_sym()], 3).is_ok());
        assert!(check_t_sigma(&[os(1), os(1), os(2)], 3).is_ok());
        let j = join(JoinVariant::Sigma, vec![os(1), os(1)]).unwrap();
        for x in j.simplices(2).iter() {
            assert_eq!(&t_sigma(&Perm::identity(2), x), x);
        }
    }

    #[test]
    fn coset_form_laws() {
        assert!(check_coset_form(&[os(1), small_sym()], 3).is_ok());
        assert!(check_coset_form(&[os(2), os(1)], 3).is_ok());
    }

    #[test]
    fn symmetrization_iso() {
        let o1 = standard_object(Variance::O, 1);
        let a = augment(fixtures::simplex(1)).unwrap();
        assert!(check_symmetrization(&[o1.clone(), a], 3).is_ok());
        assert!(check_symmetrization(&[o1.clone(), o1.clone(), o1], 3).is_ok());
    }

    #[test]
    fn alpha_unary_and_naturality() {
        let x = small_sym();
        for k in 0..=3 {
            for s in x.simplices(k).iter() {
                for f in OSMorphism::all(k, 1) {
                    let a = alpha(&[x.clone()], &f, &[s.clone()]);
                    assert_eq!(&join_parts(&a).1[0], s);
                }
            }
        }
        assert!(check_alpha_natural(&[os(1), x.clone()], 3).is_ok());
        assert!(check_alpha_equivariant(&[os(1), x.clone()], 3).is_ok());
        assert!(check_alpha_equivariant(&[os(1), os(2), x], 2).is_ok());
        let h = OSMorphism::new(OMap::new(vec![1, 2], 2).unwrap(), Perm::new(vec![2, 1]).unwrap()).unwrap();
        assert!(check_alpha_factor_natural(&[2, 1], &[h, OSMorphism::from_omap(OMap::new(vec![2], 2).unwrap())], 3).is_ok());
    }

    #[test]
    fn psi_examples() {
        for k in 0..=3 {
            for f in OSMorphism::all(k, 1) {
                for g in OSMorphism::all(k, 2) {
                    assert_eq!(psi(&f, &[g.clone()]), g);
                }
            }
        }
        let nat = OSMorphism::identity(2).compose(&OSMorphism::from_omap(OMap::identity(2))).unwrap();
        let c = OSMorphism::from_omap(OMap::new(vec![1, 1], 1).unwrap());
        assert_eq!(psi(&nat, &[c.clone(), c]), OSMorphism::identity(2));
    }

    #[test]
    fn psi_structure() {
        assert!(check_psi_is_theta_alpha(2, &[1, 2], 3).is_ok());
        assert!(check_alpha_psi_square(&[vec![os(1)], vec![os(1), os(1)]], 3).is_ok());
        assert!(check_psi_operad(2, 3).is_ok());
        assert!(check_psi_associative(2, 1, 2).is_ok());
        assert!(check_psi_associative(3, 1, 1).is_ok());
    }

    #[test]
    fn pentagon_and_relative() {
        assert!(check_coaction_pentagon(&small_sym(), 2, 2, 3).is_ok());
        assert!(check_relative_maps(2, 3).is_ok());
        let pair = relative_join(JoinVariant::Sigma, vec![boundary(Variance::OSigma, 1), boundary(Variance::OSigma, 1)])
            .unwrap();
        assert!(pair.check_closed(3).is_ok());
        // degree < n ⇒ everything is in ∂
        let p3 = relative_join(JoinVariant::Sigma, vec![PresheafPair::augmentation_pair(small_sym()); 3]).unwrap();
        for k in 0..3 {
            assert!(p3.relative_simplices(k).is_empty());
        }
    }

    #[test]
    fn nullary_inputs_escape_the_boundary() {
        let f = OSMorphism::from_omap(OMap::new(vec![], 1).unwrap());
        let h = psi(&f, &[OSMorphism::identity(0)]);
        assert!(!f.is_surjective());
        assert!(h.is_surjective());
    }

    #[test]
    fn coaction_preserves_boundary() {
        let x = small_sym();
        let pair = relative_join(JoinVariant::Sigma, vec![PresheafPair::augmentation_pair(x.clone()); 2]).unwrap();
        for k in 0..=3 {
            for s in x.simplices(k).iter() {
                for f in OSMorphism::all(k, 2) {
                    let y = coaction_set_level(&x, &f, s);
                    if !f.is_surjective() || k == 0 {
                        assert!(pair.contains(&y, k));
                    }
                }
            }
        }
    }
}
