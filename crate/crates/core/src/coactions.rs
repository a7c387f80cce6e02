//! The coaction of 𝔞 on `C^O(X, X(0))`, the induced 𝔧-coalgebra structure
//! on simplicial chains, and the cooperations it yields: Alexander–Whitney,
//! cup-i coproducts, cochain products and Steenrod squares mod 2.
//!
//! On a basis element `σ⁻¹f` with `f ∈ OΣ(m̄, n̄)` surjective and `x ∈ X(p)`,
//! the six-stage composite collapses to
//!
//! ```text
//! (−1)^{m−1} Σ_{(a,b) shuffle} ε(a,b) · sgn(π_φ) · ⊗ᵢ x∘b∘i_{φ⁻¹(i)},   φ = f∘a,
//! ```
//!
//! where `(−1)^{m−1}` is the suspension interchange in front of EZ and
//! `π_φ` is the permutation part of the canonical decomposition of `φ`.
//! Only the underlying map of `f` matters. [`coaction_a_staged`] runs the
//! stages literally and is used to check this.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::chains::{
    is_degenerate, koszul_sign, shuffles, tensor, ChainComplex, ChainError, ChainMap, Label,
};
use crate::joins::{coaction_set_level, symmetrization_forward};
use crate::lincomb::LinComb;
use crate::oscalc::{OMap, OSMorphism, Perm, SetMap};
use crate::operads::{self, compose, Operad, OperadElement};
use crate::presheaves::{sigma_free, Presheaf, PresheafError, PresheafRef, Simplex, SigmaFree};
use crate::report::IdentityReport;
use crate::scalar::{Fp, Ring};

type Tensor<R> = LinComb<Vec<Simplex>, R>;

fn parity_sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Number of pairs `s < t` with `φ(s) > φ(t)`: the parity of `π_φ`.
fn fibre_sort_sign(phi: &[u32]) -> i64 {
    let mut inv = 0;
    for s in 0..phi.len() {
        for t in s + 1..phi.len() {
            if phi[s] > phi[t] {
                inv += 1;
            }
        }
    }
    parity_sign(inv)
}

/// `𝔞ₙˣ(σ⁻¹f ⊗ x)` for `x ∈ X(p)` outside `X(0)`, with `X` acted on by
/// O-maps. Output factors are simplices of `X` of positive degree.
pub fn coaction_a<R: Ring>(f: &OSMorphism, x_set: &dyn Presheaf, x: &Simplex, p: usize) -> Tensor<R> {
    let n = f.target();
    let m = f.source();
    if n == 0 {
        // the generator of 𝔞(0) = σ⁻¹k acts by the augmentation of σC
        return if p == 1 { LinComb::basis(vec![]) } else { LinComb::zero() };
    }
    if p == 0 || m == 0 {
        return LinComb::zero();
    }
    let uf = f.underlying();
    let front = parity_sign(m as i64 - 1);
    let mut out = LinComb::zero();
    for sh in shuffles(&[m - 1, p - 1]).iter() {
        let (a, b) = (&sh.maps[0], &sh.maps[1]);
        let size = a.source() as u32;
        let phi: Vec<u32> = (1..=size).map(|t| uf.apply(a.apply(t))).collect();
        let mut fibres: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (t, &v) in phi.iter().enumerate() {
            fibres[v as usize - 1].push(b.apply(t as u32 + 1));
        }
        if fibres.iter().any(Vec::is_empty) {
            continue;
        }
        let parts = fibres
            .into_iter()
            .map(|imgs| x_set.act(x, &OSMorphism::from_omap(OMap::new(imgs, p).unwrap())))
            .collect();
        out.add_term(parts, R::from_i64(front * sh.sign * fibre_sort_sign(&phi)));
    }
    out
}

/// The six displayed stages run literally: `1⊗η`, the relative EZ map, `Ψ`
/// on `OΣ_n × XΣ`, the `J^Σ(XΣ,…) ≅ J^O(X,…)Σ` identification, the sign map,
/// and `C^O(J^O(X,…,X)) = C^O(X)^{⊗n}`.
pub fn coaction_a_staged<R: Ring>(f: &OSMorphism, x_set: &PresheafRef, x: &Simplex, p: usize) -> Result<Tensor<R>, PresheafError> {
    let n = f.target();
    let m = f.source();
    if n == 0 || p == 0 || m == 0 {
        return Ok(coaction_a(f, x_set.as_ref(), x, p));
    }
    let xs = sigma_free(x_set.clone())?;
    let mut out = LinComb::zero();
    // σ⁻¹A ⊗ σB → σ(σ⁻¹A ⊗ B): (−1)^{deg σ⁻¹f}
    let interchange = parity_sign(m as i64 - 1);
    for sh in shuffles(&[m - 1, p - 1]).iter() {
        // EZ into the product pair
        let big_f = f.compose(&OSMorphism::from_omap(sh.maps[0].clone())).unwrap();
        // 1 ⊗ η, then the degeneracy of the shuffle
        let big_z = SigmaFree::act_on(x_set.as_ref(), x, &Perm::identity(p), &OSMorphism::from_omap(sh.maps[1].clone()));
        if !big_f.is_surjective() {
            continue; // in the boundary
        }
        // Ψ^{XΣ}
        let joined = coaction_set_level(&xs, &big_f, &big_z);
        // symmetrization J^Σ(X,…,X) → J^O
        let factors = vec![xs.clone(); n];
        let sym = symmetrization_forward(&factors, &joined);
        // s_{J^O} and the monoidal identification
        let Simplex::Sym(j, perm) = sym else { unreachable!() };
        let Simplex::Join(phi, parts) = *j else { unreachable!() };
        if !phi.is_surjective() {
            continue;
        }
        out.add_term(parts, R::from_i64(interchange * sh.sign * perm.sign()));
    }
    Ok(out)
}

/// The 𝔧-coalgebra structure on simplicial chains: `ξ ⊗ y ↦ Σ ± y₁⊗…⊗yₙ`
/// for a basis element `f ∈ 𝔧(n)` and a `q`-simplex `y`.
///
/// Obtained from `C ≅ L ⊗ σC`, `y ↦ e⊗σy`, with `e` of degree −1:
/// `(u_n⊗σ⁻¹f)⊗(e⊗σy) ↦ (−1)^{|σ⁻¹f|} u_n(e) ⊗ 𝔞(σ⁻¹f⊗σy)`, then
/// `e^{⊗n}⊗σy₁⊗…⊗σyₙ ↦ ±(e⊗σy₁)⊗…⊗(e⊗σyₙ)` by the Koszul rule.
pub fn coalgebra_j<R: Ring>(f: &OSMorphism, y_set: &dyn Presheaf, y: &Simplex, q: usize) -> Tensor<R> {
    let n = f.target();
    let m = f.source() as i64;
    let outer = parity_sign(m - 1);
    let a = coaction_a::<R>(f, y_set, y, q + 1);
    let mut out = LinComb::zero();
    let mut order = Vec::with_capacity(2 * n);
    for i in 0..n {
        order.push(i);
        order.push(n + i);
    }
    for (parts, c) in a.iter() {
        let mut degrees = vec![-1i64; n];
        // σyᵢ has the O-degree of yᵢ as an element of Y₊
        let sizes: Vec<i64> = parts.iter().map(|s| simplex_size(s)).collect();
        degrees.extend(&sizes);
        let s = outer * koszul_sign(&degrees, &order);
        out.add_term(parts.clone(), c.clone() * R::from_i64(s));
    }
    out
}

/// O-degree (number of vertices) of a simplex of a complex, i.e. `dim + 1`.
fn simplex_size(s: &Simplex) -> i64 {
    match s {
        Simplex::Verts(v) => v.len() as i64,
        other => panic!("coalgebra_j expects vertex tuples, got {other:?}"),
    }
}

/// Linear extension of [`coalgebra_j`] in the operad slot.
pub fn cooperation<R: Ring>(xi: &OperadElement<R>, y_set: &dyn Presheaf, y: &Simplex, q: usize) -> Tensor<R> {
    assert_eq!(xi.op, Operad::J, "cooperations are taken in 𝔧");
    let mut out = LinComb::zero();
    for (f, c) in xi.terms.iter() {
        out.add_scaled(&coalgebra_j(f, y_set, y, q), c);
    }
    out
}

/// [`cooperation`] on normalized chains: `y` nondegenerate, tensors with a
/// degenerate factor dropped.
pub fn cooperation_normalized<R: Ring>(xi: &OperadElement<R>, y_set: &dyn Presheaf, y: &Simplex, q: usize) -> Tensor<R> {
    cooperation(xi, y_set, y, q).filter(|parts| parts.iter().all(|s| !is_degenerate(y_set, s, simplex_size(s) as usize - 1)))
}

/// The Alexander–Whitney coproduct `y ↦ Σᵢ y[0..i] ⊗ y[i..q]`, written
/// directly as an oracle.
pub fn alexander_whitney<R: Ring>(y_set: &dyn Presheaf, y: &Simplex, q: usize) -> Tensor<R> {
    let mut out = LinComb::zero();
    for i in 0..=q {
        let front = OMap::new((1..=i as u32 + 1).collect(), q + 1).unwrap();
        let back = OMap::new((i as u32 + 1..=q as u32 + 1).collect(), q + 1).unwrap();
        let parts = vec![
            y_set.act(y, &OSMorphism::from_omap(front)),
            y_set.act(y, &OSMorphism::from_omap(back)),
        ];
        out.add_term(parts, R::one());
    }
    out
}

/// The representative `e_i ∈ 𝔧(2)_i`: alternating `(1,2,1,2,…)` of length
/// `i+2` with natural fibre orders.
pub fn cup_i_element<R: Ring>(i: usize) -> OperadElement<R> {
    let images = (0..i as u32 + 2).map(|t| t % 2 + 1).collect();
    OperadElement::basis(Operad::J, OSMorphism::natural(&SetMap::new(images, 2).unwrap())).unwrap()
}

// ---------------------------------------------------------------------------
// Chain-map packaging

/// `op(n)` with keys wrapped as [`Simplex::Mor`], so it can be tensored with chains.
pub fn operad_chains<R: Ring>(op: Operad, n: usize, hi: i64) -> Result<ChainComplex<Simplex, R>, ChainError> {
    let name = format!("{}({n})", op.symbol());
    ChainComplex::from_fn(
        &name,
        op.bottom(n),
        hi,
        move |d| operads::basis(op, n, d).into_iter().map(Simplex::Mor).collect(),
        move |s, _| {
            operads::differential::<R>(op, s.as_mor().unwrap()).map_keys(|g| Some(Simplex::Mor(g.clone())))
        },
    )
}

fn pair_degree<K: Label, R: Ring>(c: &ChainComplex<K, R>, k: &K) -> usize {
    c.degree_of(k).expect("key in window") as usize
}

/// `𝔞(n) ⊗ C^O(X,X(0)) → C^O(X,X(0))^{⊗n}` as a verified chain map.
/// `x_chains` must be the relative chains of `(X, X(0))`.
pub fn coaction_a_map<R: Ring>(
    n: usize,
    x_set: PresheafRef,
    x_chains: &ChainComplex<Simplex, R>,
    op_degree: i64,
) -> Result<ChainMap<Vec<Simplex>, Vec<Simplex>, R>, ChainError> {
    let a = operad_chains::<R>(Operad::A, n, op_degree)?;
    let source = tensor(&[a, x_chains.clone()])?;
    let target = tensor(&vec![x_chains.clone(); n])?;
    let xc = x_chains.clone();
    ChainMap::new(&format!("𝔞_{n}^X"), &source, &target, 0, move |keys: &Vec<Simplex>, _| {
        let f = keys[0].as_mor().unwrap();
        let p = pair_degree(&xc, &keys[1]);
        coaction_a(f, x_set.as_ref(), &keys[1], p)
    })
}

/// `𝔧(n) ⊗ C(Y) → C(Y)^{⊗n}` as a verified chain map; `y_chains` are the
/// (absolute or normalized) chains of `Y`.
pub fn coalgebra_j_map<R: Ring>(
    n: usize,
    y_set: PresheafRef,
    y_chains: &ChainComplex<Simplex, R>,
    op_degree: i64,
    normalized: bool,
) -> Result<ChainMap<Vec<Simplex>, Vec<Simplex>, R>, ChainError> {
    let j = operad_chains::<R>(Operad::J, n, op_degree)?;
    let source = tensor(&[j, y_chains.clone()])?;
    let target = tensor(&vec![y_chains.clone(); n])?;
    let yc = y_chains.clone();
    ChainMap::new(&format!("𝔧_{n}^Y"), &source, &target, 0, move |keys: &Vec<Simplex>, _| {
        let xi = OperadElement::basis(Operad::J, keys[0].as_mor().unwrap().clone()).unwrap();
        let q = pair_degree(&yc, &keys[1]);
        if normalized {
            cooperation_normalized(&xi, y_set.as_ref(), &keys[1], q)
        } else {
            cooperation(&xi, y_set.as_ref(), &keys[1], q)
        }
    })
}

// ---------------------------------------------------------------------------
// Checks

/// Coherence of the coaction with operad composition:
/// `θ(γ(ξ;ζ)⊗y) = (−1)^{|ξ||ζ|} Σ ± ⊗ᵢ θ(ζᵢ⊗yᵢ)` over `θ(ξ⊗y) = Σ y₁⊗…⊗yₙ`,
/// the inner sign being the Koszul sign of `ζ₁…ζₙ y₁…yₙ ↦ ζ₁y₁…ζₙyₙ`.
/// Checked for the 𝔧-coalgebra `C(Y)`, `ξ ∈ 𝔧(n)`, `ζᵢ ∈ 𝔧(kᵢ)` with the
/// given bounds, on every simplex of degree `≤ max_q`.
///
/// With `normalized`, only nondegenerate `y` are used and tensors with a
/// degenerate factor are discarded on both sides. On unnormalized chains the
/// two sides differ by such tensors: a shuffle step of `ζᵢ` taken while the
/// outer map sits in a fibre other than `i` leaves `b` constant on a part.
pub fn check_coherence(
    y_set: &PresheafRef,
    max_arity: usize,
    max_op_degree: i64,
    max_q: usize,
    normalized: bool,
) -> Result<usize, String> {
    let mut els = Vec::new();
    for k in 1..=max_arity {
        for d in 0..=max_op_degree {
            els.extend(operads::basis(Operad::J, k, d));
        }
    }
    let mut instances = Vec::new();
    for xi in &els {
        let n = xi.target();
        let mut tuples: Vec<Vec<OSMorphism>> = vec![vec![]];
        for _ in 0..n {
            tuples = tuples
                .iter()
                .flat_map(|t| {
                    els.iter().map(move |z| {
                        let mut t2 = t.clone();
                        t2.push(z.clone());
                        t2
                    })
                })
                .collect();
        }
        for t in tuples {
            // total operad degree ≤ max_op_degree keeps the check affordable
            let total = Operad::J.degree_of(xi) + t.iter().map(|z| Operad::J.degree_of(z)).sum::<i64>();
            if total <= max_op_degree {
                instances.push((xi.clone(), t));
            }
        }
    }
    let simplices: Vec<(Simplex, usize)> = (0..=max_q)
        .flat_map(|q| y_set.simplices(q).iter().map(move |s| (s.clone(), q)).collect::<Vec<_>>())
        .filter(|(s, q)| !normalized || !is_degenerate(y_set.as_ref(), s, *q))
        .collect();
    let theta = |xi: &OperadElement<i64>, y: &Simplex, q: usize| {
        if normalized {
            cooperation_normalized(xi, y_set.as_ref(), y, q)
        } else {
            cooperation(xi, y_set.as_ref(), y, q)
        }
    };
    let count = std::sync::atomic::AtomicUsize::new(0);
    instances.par_iter().try_for_each(|(xi, zetas)| -> Result<(), String> {
        let xe = OperadElement::<i64>::basis(Operad::J, xi.clone()).unwrap();
        let zes: Vec<_> = zetas.iter().map(|z| OperadElement::<i64>::basis(Operad::J, z.clone()).unwrap()).collect();
        let composite = compose(&xe, &zes).map_err(|e| e.to_string())?;
        let dz: Vec<i64> = zes.iter().map(|z| z.degree).collect();
        let outer = parity_sign(xe.degree * dz.iter().sum::<i64>());
        let n = zes.len();
        let mut order = Vec::new();
        for i in 0..n {
            order.push(i);
            order.push(n + i);
        }
        for (y, q) in &simplices {
            let lhs = theta(&composite, y, *q);
            let mut rhs: Tensor<i64> = LinComb::zero();
            for (parts, c) in theta(&xe, y, *q).iter() {
                let mut degrees = dz.clone();
                degrees.extend(parts.iter().map(|s| simplex_size(s) - 1));
                let sign = outer * koszul_sign(&degrees, &order);
                let mut acc: Tensor<i64> = LinComb::term(vec![], *c * sign);
                for (z, part) in zes.iter().zip(parts) {
                    let piece = theta(z, part, simplex_size(part) as usize - 1);
                    acc = tensor_product(&acc, &piece);
                }
                rhs.add_assign(&acc);
            }
            if lhs != rhs {
                return Err(format!("coherence fails: ξ={xi:?} ζ={zetas:?} y={y:?}: {lhs:?} vs {rhs:?}"));
            }
            count.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        }
        Ok(())
    })?;
    Ok(count.into_inner())
}

/// Concatenation product of tensors (no sign: both sides already sorted out).
fn tensor_product<R: Ring>(a: &Tensor<R>, b: &Tensor<R>) -> Tensor<R> {
    let mut out = LinComb::zero();
    for (ka, ca) in a.iter() {
        for (kb, cb) in b.iter() {
            let mut k = ka.clone();
            k.extend(kb.iter().cloned());
            out.add_term(k, ca.clone() * cb.clone());
        }
    }
    out
}

/// Equivariance in the operad slot: `θ(ξ·π ⊗ y)` equals `θ(ξ⊗y)` with
/// output factors permuted (new factor `i` = old factor `π(i)`) and Koszul
/// signs, for all basis `ξ ∈ 𝔧(n)_{≤max_op_degree}`.
pub fn check_equivariance(y_set: &PresheafRef, n: usize, max_op_degree: i64, max_q: usize) -> Result<usize, String> {
    let mut count = 0;
    for d in 0..=max_op_degree {
        for f in operads::basis(Operad::J, n, d) {
            let xi = OperadElement::<i64>::basis(Operad::J, f.clone()).unwrap();
            for pi in Perm::all(n) {
                let order: Vec<usize> = (1..=n as u32).map(|i| pi.apply(i) as usize - 1).collect();
                for q in 0..=max_q {
                    for y in y_set.simplices(q).iter() {
                        let lhs = cooperation(&xi.act(&pi), y_set.as_ref(), y, q);
                        let rhs: Tensor<i64> = cooperation(&xi, y_set.as_ref(), y, q)
                            .iter()
                            .map(|(parts, c)| {
                                let degs: Vec<i64> = parts.iter().map(|s| simplex_size(s) - 1).collect();
                                let k = koszul_sign(&degs, &order);
                                (order.iter().map(|&i| parts[i].clone()).collect(), c * k)
                            })
                            .collect();
                        if lhs != rhs {
                            return Err(format!("ξ={f:?} π={:?} y={y:?}: {lhs:?} vs {rhs:?}", pi.images()));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// The fast coaction formula agrees with the staged pipeline.
pub fn check_staged(x_set: &PresheafRef, max_arity: usize, max_m: usize, max_p: usize) -> Result<usize, String> {
    let mut count = 0;
    for n in 1..=max_arity {
        for m in n..=max_m {
            for f in OSMorphism::all_surjective(m, n) {
                for p in 1..=max_p {
                    for x in x_set.simplices(p).iter() {
                        let fast = coaction_a::<i64>(&f, x_set.as_ref(), x, p);
                        let slow = coaction_a_staged::<i64>(&f, x_set, x, p)?;
                        if fast != slow {
                            return Err(format!("f={f:?} x={x:?}: {fast:?} vs {slow:?}"));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// The coaction on `Y₊` and on another augmentation of `Y` agree.
pub fn check_augmentation_independence(
    y_plus: &PresheafRef,
    y_alt: &PresheafRef,
    max_m: usize,
    max_p: usize,
) -> Result<usize, String> {
    let mut count = 0;
    for n in 1..=2 {
        for m in n..=max_m {
            for f in OSMorphism::all_surjective(m, n) {
                for p in 1..=max_p {
                    let xs = y_plus.simplices(p);
                    if *xs != *y_alt.simplices(p) {
                        return Err(format!("augmentations differ in degree {p}"));
                    }
                    for x in xs.iter() {
                        let a = coaction_a_staged::<i64>(&f, y_plus, x, p)?;
                        let b = coaction_a_staged::<i64>(&f, y_alt, x, p)?;
                        if a != b {
                            return Err(format!("f={f:?} x={x:?}: {a:?} vs {b:?}"));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Naturality along an inclusion of complexes that preserves vertex labels,
/// e.g. `∂Δ³ ↪ Δ³`: the coalgebra maps of the two agree on the image.
pub fn check_naturality(sub: &PresheafRef, total: &PresheafRef, max_op_degree: i64, max_q: usize) -> Result<usize, String> {
    let mut count = 0;
    for n in 1..=2 {
        for d in 0..=max_op_degree {
            for f in operads::basis(Operad::J, n, d) {
                for q in 0..=max_q {
                    for y in sub.simplices(q).iter() {
                        let a = coalgebra_j::<i64>(&f, sub.as_ref(), y, q);
                        let b = coalgebra_j::<i64>(&f, total.as_ref(), y, q);
                        if a != b {
                            return Err(format!("f={f:?} y={y:?}"));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Calibration of `θ(id₂)` against Alexander–Whitney: the sign in each
/// output bidegree `(i, q−i)`, or an error if the two differ by more than a
/// per-bidegree sign.
pub fn aw_calibration(y_set: &dyn Presheaf, max_q: usize) -> Result<BTreeMap<(usize, usize), i64>, String> {
    let id2 = OSMorphism::identity(2);
    let mut table = BTreeMap::new();
    for q in 0..=max_q {
        for y in y_set.simplices(q).iter() {
            let got = coalgebra_j::<i64>(&id2, y_set, y, q);
            let want = alexander_whitney::<i64>(y_set, y, q);
            if got.len() != want.len() {
                return Err(format!("term count differs at {y:?}"));
            }
            for (parts, c) in want.iter() {
                let g = got.coeff(parts);
                if g.abs() != c.abs() {
                    return Err(format!("{parts:?} missing in θ(id₂)({y:?})"));
                }
                let bideg = (simplex_size(&parts[0]) as usize - 1, simplex_size(&parts[1]) as usize - 1);
                let s = g * c;
                if let Some(old) = table.insert(bideg, s) {
                    if old != s {
                        return Err(format!("sign not constant in bidegree {bideg:?}"));
                    }
                }
            }
        }
    }
    Ok(table)
}

/// `d∘Δᵢ + Δᵢ∘d = Δ_{i−1} + T∘Δ_{i−1}` mod 2 on normalized chains, every
/// nondegenerate simplex of degree `≤ max_q`.
pub fn check_cup_i_relation(y_set: &PresheafRef, max_i: usize, max_q: usize) -> Result<usize, String> {
    type F2 = Fp<2>;
    let chains = crate::chains::normalized_chains::<F2>(crate::presheaves::PresheafPair::absolute(y_set.clone()), max_q as i64 + max_i as i64 + 1)
        .map_err(|e| e.to_string())?;
    let tensor_diff = |t: &Tensor<F2>| -> Tensor<F2> {
        t.flat_map(|parts| {
            let degs: Vec<i64> = parts.iter().map(|s| simplex_size(s) - 1).collect();
            crate::chains::tensor_diff(parts, &degs, &|_, k, d| chains.diff(k, d))
        })
    };
    let mut count = 0;
    for i in 0..=max_i {
        let ei = cup_i_element::<F2>(i);
        for q in 0..=max_q {
            for y in chains.basis(q as i64) {
                let apply = |x: &LinComb<Simplex, F2>, qq: usize, xi: &OperadElement<F2>| -> Tensor<F2> {
                    x.flat_map(|s| cooperation_normalized(xi, y_set.as_ref(), s, qq))
                };
                let lhs = {
                    let mut l = tensor_diff(&cooperation_normalized(&ei, y_set.as_ref(), y, q));
                    if q > 0 {
                        l.add_assign(&apply(&chains.diff(y, q as i64), q - 1, &ei));
                    }
                    l
                };
                let rhs = if i == 0 {
                    LinComb::zero()
                } else {
                    let prev = cooperation_normalized(&cup_i_element::<F2>(i - 1), y_set.as_ref(), y, q);
                    let mut r = prev.clone();
                    r.add_assign(&prev.map_keys(|p| Some(vec![p[1].clone(), p[0].clone()])));
                    r
                };
                if lhs != rhs {
                    return Err(format!("cup-{i} relation fails at {y:?}: {lhs:?} vs {rhs:?}"));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

// ---------------------------------------------------------------------------
// Cochains mod 2 and Steenrod squares

/// Normalized cochains of a complex mod 2, with the coboundary and the
/// cochain operations dual to the cooperations.
pub struct Cochains {
    pub space: PresheafRef,
    chains: ChainComplex<Simplex, Fp<2>>,
    top: usize,
}

/// A cochain of a fixed degree, as the set of simplices where it is 1.
pub type Cochain = std::collections::BTreeSet<Simplex>;

impl Cochains {
    pub fn new(space: PresheafRef, top: usize) -> Result<Self, ChainError> {
        let chains =
            crate::chains::normalized_chains::<Fp<2>>(crate::presheaves::PresheafPair::absolute(space.clone()), 2 * top as i64 + 2)?;
        Ok(Cochains { space, chains, top })
    }

    pub fn basis(&self, d: usize) -> &[Simplex] {
        self.chains.basis(d as i64)
    }

    /// Largest cohomological degree of interest.
    pub fn top_degree(&self) -> usize {
        self.top
    }

    /// Pairing `⟨a, c⟩` for a chain `c`.
    fn eval(a: &Cochain, c: &LinComb<Simplex, Fp<2>>) -> bool {
        c.iter().filter(|(s, _)| a.contains(*s)).count() % 2 == 1
    }

    /// `δa` in degree `d+1`.
    pub fn coboundary(&self, a: &Cochain, d: usize) -> Cochain {
        self.basis(d + 1).iter().filter(|s| Self::eval(a, &self.chains.diff(s, d as i64 + 1))).cloned().collect()
    }

    /// `(a ⊗ b)(θ(ξ)(c))` as a cochain of degree `|a|+|b|−|ξ|`.
    pub fn product(&self, xi: &OperadElement<Fp<2>>, cochains: &[(&Cochain, usize)]) -> (Cochain, usize) {
        let total: i64 = cochains.iter().map(|(_, d)| *d as i64).sum::<i64>() - xi.degree;
        if total < 0 {
            return (Cochain::new(), 0);
        }
        let out = self
            .basis(total as usize)
            .iter()
            .filter(|c| {
                let t = cooperation_normalized(xi, self.space.as_ref(), c, total as usize);
                t.iter()
                    .filter(|(parts, _)| {
                        parts.iter().zip(cochains).all(|(s, (a, d))| simplex_size(s) as usize - 1 == *d && a.contains(s))
                    })
                    .count()
                    % 2
                    == 1
            })
            .cloned()
            .collect();
        (out, total as usize)
    }

    /// `a ∪_j b`.
    pub fn cup_j(&self, j: usize, a: &Cochain, da: usize, b: &Cochain, db: usize) -> (Cochain, usize) {
        self.product(&cup_i_element(j), &[(a, da), (b, db)])
    }

    /// `a ∪ b` from the Alexander–Whitney oracle.
    pub fn cup_aw(&self, a: &Cochain, da: usize, b: &Cochain, db: usize) -> Cochain {
        self.basis(da + db)
            .iter()
            .filter(|c| {
                alexander_whitney::<Fp<2>>(self.space.as_ref(), c, da + db)
                    .iter()
                    .filter(|(p, _)| simplex_size(&p[0]) as usize - 1 == da && a.contains(&p[0]) && b.contains(&p[1]))
                    .count()
                    % 2
                    == 1
            })
            .cloned()
            .collect()
    }

    fn vector(&self, a: &Cochain, d: usize) -> Vec<bool> {
        self.basis(d).iter().map(|s| a.contains(s)).collect()
    }

    fn from_vector(&self, v: &[bool], d: usize) -> Cochain {
        self.basis(d).iter().zip(v).filter(|(_, &b)| b).map(|(s, _)| s.clone()).collect()
    }

    /// Coboundaries `δ(s*)` of the dual basis of degree `d−1`.
    fn coboundary_columns(&self, d: usize) -> Vec<Vec<bool>> {
        if d == 0 {
            return vec![];
        }
        self.basis(d - 1)
            .iter()
            .map(|s| self.vector(&self.coboundary(&[s.clone()].into_iter().collect(), d - 1), d))
            .collect()
    }

    pub fn is_cocycle(&self, a: &Cochain, d: usize) -> bool {
        self.coboundary(a, d).is_empty()
    }

    /// Representatives of a basis of `H^d(Y; 𝔽₂)`.
    pub fn cohomology_basis(&self, d: usize) -> Vec<Cochain> {
        let n = self.basis(d).len();
        let cocycles = f2_kernel(&(0..self.basis(d + 1).len()).map(|_| ()).collect::<Vec<_>>(), n, |col| {
            let mut a = Cochain::new();
            a.insert(self.basis(d)[col].clone());
            self.vector(&self.coboundary(&a, d), d + 1)
        });
        let mut span = self.coboundary_columns(d);
        let mut reps = Vec::new();
        for z in cocycles {
            if !f2_in_span(&span, &z) {
                span.push(z.clone());
                reps.push(self.from_vector(&z, d));
            }
        }
        reps
    }

    /// Coordinates of the class of a cocycle in the basis `reps` of `H^d`.
    pub fn class_of(&self, a: &Cochain, d: usize, reps: &[Cochain]) -> Option<Vec<bool>> {
        let mut cols: Vec<Vec<bool>> = reps.iter().map(|r| self.vector(r, d)).collect();
        let r = cols.len();
        cols.extend(self.coboundary_columns(d));
        f2_solve(&cols, &self.vector(a, d)).map(|x| x[..r].to_vec())
    }

    /// `Sq^i(x) = x ∪_{d−i} x` for a cocycle of degree `d`; zero for `i > d`.
    pub fn steenrod(&self, i: usize, x: &Cochain, d: usize) -> Result<(Cochain, usize), String> {
        if !self.is_cocycle(x, d) {
            return Err("not a cocycle".into());
        }
        if i > d {
            return Ok((Cochain::new(), d + i));
        }
        Ok(self.cup_j(d - i, x, d, x, d))
    }
}

/// Vectors of a kernel basis of the linear map `e_col ↦ image(col)` on `n` columns.
fn f2_kernel(_rows: &[()], n: usize, image: impl Fn(usize) -> Vec<bool>) -> Vec<Vec<bool>> {
    // row-reduce the augmented matrix [image(col) | e_col]
    let mut rows: Vec<(Vec<bool>, Vec<bool>)> = (0..n)
        .map(|c| {
            let mut e = vec![false; n];
            e[c] = true;
            (image(c), e)
        })
        .collect();
    let width = rows.first().map_or(0, |r| r.0.len());
    let mut pivot_row = 0;
    for col in 0..width {
        let Some(p) = (pivot_row..rows.len()).find(|&r| rows[r].0[col]) else { continue };
        rows.swap(pivot_row, p);
        for r in 0..rows.len() {
            if r != pivot_row && rows[r].0[col] {
                let (a, b) = (rows[pivot_row].clone(), &mut rows[r]);
                for k in 0..width {
                    b.0[k] ^= a.0[k];
                }
                for k in 0..n {
                    b.1[k] ^= a.1[k];
                }
            }
        }
        pivot_row += 1;
    }
    rows.into_iter().filter(|(img, _)| img.iter().all(|b| !b)).map(|(_, e)| e).collect()
}

/// Solve `Σ xᵢ colᵢ = target` over 𝔽₂.
fn f2_solve(cols: &[Vec<bool>], target: &[bool]) -> Option<Vec<bool>> {
    let rows = target.len();
    let n = cols.len();
    // augmented matrix, row-major
    let mut m: Vec<Vec<bool>> = (0..rows).map(|r| (0..n).map(|c| cols[c][r]).chain([target[r]]).collect()).collect();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..n {
        let Some(p) = (pr..rows).find(|&r| m[r][c]) else { continue };
        m.swap(pr, p);
        for r in 0..rows {
            if r != pr && m[r][c] {
                let a = m[pr].clone();
                for k in 0..=n {
                    m[r][k] ^= a[k];
                }
            }
        }
        pivots.push(c);
        pr += 1;
    }
    if (pr..rows).any(|r| m[r][n]) {
        return None;
    }
    let mut x = vec![false; n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n];
    }
    Some(x)
}

fn f2_in_span(cols: &[Vec<bool>], v: &[bool]) -> bool {
    f2_solve(cols, v).is_some()
}

fn render_cochain(space: &dyn Presheaf, a: &Cochain) -> Vec<String> {
    let _ = space;
    a.iter().map(|s| format!("{s:?}")).collect()
}

fn render_class(coords: &Option<Vec<bool>>) -> Value {
    match coords {
        None => Value::String("not a cocycle".into()),
        Some(c) if c.iter().all(|b| !b) => Value::String("0".into()),
        Some(c) => Value::Array(c.iter().map(|&b| Value::from(u8::from(b))).collect()),
    }
}

/// The Steenrod report of a complex up to cohomological degree `top`, plus
/// the well-definedness check: each square is recomputed on `perturbations`
/// representatives `x + δz` with `z` drawn from a seeded generator.
pub fn steenrod_report(cochains: &Cochains, name: &str, perturbations: usize, seed: u64) -> (Value, IdentityReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = IdentityReport::new(
        "Sq^i is well defined on cohomology",
        json!({"space": name, "top_degree": cochains.top, "perturbations": perturbations, "seed": seed}),
    );
    let mut classes = Vec::new();
    let bases: Vec<Vec<Cochain>> = (0..=2 * cochains.top).map(|d| cochains.cohomology_basis(d)).collect();
    for d in 0..=cochains.top {
        for x in &bases[d] {
            let mut sq = Vec::new();
            for i in 0..=d {
                let (y, e) = cochains.steenrod(i, x, d).unwrap();
                let coords = cochains.class_of(&y, e, &bases[e]);
                for _ in 0..perturbations {
                    let z: Cochain = if d == 0 {
                        Cochain::new()
                    } else {
                        cochains.basis(d - 1).iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
                    };
                    let dz = if d == 0 { Cochain::new() } else { cochains.coboundary(&z, d - 1) };
                    let x2: Cochain = x.symmetric_difference(&dz).cloned().collect();
                    let (y2, _) = cochains.steenrod(i, &x2, d).unwrap();
                    let c2 = cochains.class_of(&y2, e, &bases[e]);
                    report.record(c2 == coords, || format!("Sq^{i} of {x:?} + δ{z:?}"));
                }
                sq.push(json!({"i": i, "image-class": render_class(&coords)}));
            }
            classes.push(json!({
                "degree": d,
                "representative": render_cochain(cochains.space.as_ref(), x),
                "sq": sq,
            }));
        }
    }
    (json!({"space": name, "coefficients": "F2", "classes": classes}), report)
}

/// Shared handle for the fixtures used by the verification suites.
pub fn fixture(name: &str) -> Option<PresheafRef> {
    use crate::presheaves::fixtures;
    let y: PresheafRef = match name {
        "simplex1" | "delta1" => fixtures::simplex(1),
        "simplex2" | "delta2" => fixtures::simplex(2),
        "simplex3" | "delta3" => fixtures::simplex(3),
        "sphere2" | "boundary3" => fixtures::boundary_simplex(3),
        "circle" | "s1" => fixtures::circle(),
        "rp2" => fixtures::rp2(),
        _ => return None,
    };
    Some(Arc::clone(&y))
}
