//! The surjection operad 𝒮 on small arities and the comparison map `S: 𝔧 → 𝒮`.
//!
//! A basis element of `𝒮(n)_d` is a nondegenerate surjection
//! `f: (n+d)‾ → n̄`, written as its sequence of values. Conventions:
//!
//! - differential: `d f = Σᵢ (−1)^{π_f(i)+f(i)} dᵢf`, degenerate and
//!   non-surjective faces dropped first;
//! - right action: `f·π = (−1)^{ξ(f,π⁻¹)} π⁻¹∘f` with
//!   `ξ(f,τ) = Σ_{i<j, τ(i)>τ(j)} (aᵢ−1)(aⱼ−1)`, `aᵢ = |f⁻¹(i)|`;
//! - partial composition `f ∘ᵢ g` by interval cuts: the `r` occurrences of
//!   `i` in `f` are replaced by consecutive overlapping intervals of `g`,
//!   with the sign of [`cut_sign`]; full composition iterates `∘ₙ,…,∘₁`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::chains::{ChainComplex, ChainError};
use crate::lincomb::LinComb;
use crate::linalg::{rank_field, SparseMatrix};
use crate::operads::{self, compose, Operad, OperadElement};
use crate::oscalc::{canonical_decompose, OSMorphism, Perm, SetMap};
use crate::report::IdentityReport;
use crate::scalar::{Fp, Ring};

#[derive(Debug, Error)]
pub enum SurjectionError {
    #[error("not a nondegenerate surjection: {0:?}")]
    Degenerate(Vec<u32>),
    #[error("arity mismatch: {outer} inputs expected, {given} given")]
    ArityMismatch { outer: usize, given: usize },
    #[error(transparent)]
    Chain(#[from] ChainError),
}

fn parity(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Surjective with no two equal adjacent values.
pub fn is_nondegenerate(f: &SetMap) -> bool {
    f.is_surjective() && f.images().windows(2).all(|w| w[0] != w[1])
}

/// `s(f) = (−1)^{mn} sgn(π_f) (−1)^{Σ f(j)}`.
pub fn surjection_sign(f: &SetMap) -> i64 {
    let (m, n) = (f.source() as i64, f.target() as i64);
    let (_, pi) = canonical_decompose(f);
    let sum: i64 = f.images().iter().map(|&v| v as i64).sum();
    parity(m * n) * pi.sign() * parity(sum)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectionElement<R: Ring> {
    pub arity: usize,
    pub degree: i64,
    pub terms: LinComb<SetMap, R>,
}

impl<R: Ring> SurjectionElement<R> {
    pub fn zero(arity: usize, degree: i64) -> Self {
        SurjectionElement { arity, degree, terms: LinComb::zero() }
    }

    pub fn basis(f: SetMap) -> Result<Self, SurjectionError> {
        if !is_nondegenerate(&f) {
            return Err(SurjectionError::Degenerate(f.images().to_vec()));
        }
        Ok(SurjectionElement { arity: f.target(), degree: (f.source() - f.target()) as i64, terms: LinComb::basis(f) })
    }

    /// Build from a value sequence, e.g. `&[1, 2, 1]`.
    pub fn from_values(values: &[u32], arity: usize) -> Result<Self, SurjectionError> {
        let f = SetMap::new(values.to_vec(), arity).map_err(|_| SurjectionError::Degenerate(values.to_vec()))?;
        Self::basis(f)
    }

    pub fn differential(&self) -> Self {
        SurjectionElement { degree: self.degree - 1, terms: self.terms.flat_map(differential), ..self.clone() }
    }

    /// Right action `x·π`.
    pub fn act(&self, pi: &Perm) -> Self {
        SurjectionElement { terms: self.terms.flat_map(|f| act_basis(f, pi)), ..self.clone() }
    }
}

/// Basis of `𝒮(n)_d`.
pub fn basis(n: usize, d: i64) -> Vec<SetMap> {
    if d < 0 {
        return vec![];
    }
    let mut out: Vec<SetMap> = SetMap::all_surjective(n + d as usize, n).into_iter().filter(is_nondegenerate).collect();
    out.sort();
    out
}

/// `dᵢf = f∘δᵢ`: drop the `i`-th value (1-based).
fn face(f: &SetMap, i: usize) -> SetMap {
    let mut v = f.images().to_vec();
    v.remove(i - 1);
    SetMap::new(v, f.target()).unwrap()
}

pub fn differential<R: Ring>(f: &SetMap) -> LinComb<SetMap, R> {
    let (_, pi) = canonical_decompose(f);
    let mut out = LinComb::zero();
    for i in 1..=f.source() {
        let g = face(f, i);
        if is_nondegenerate(&g) {
            out.add_term(g, R::from_i64(parity(pi.apply(i as u32) as i64 + f.apply(i as u32) as i64)));
        }
    }
    out
}

/// `𝒮(n)` on degrees `0..=hi`, with `d∘d = 0` checked.
pub fn surjection_operad<R: Ring>(n: usize, hi: i64) -> Result<ChainComplex<SetMap, R>, SurjectionError> {
    Ok(ChainComplex::from_fn(&format!("S({n})"), 0, hi, move |d| basis(n, d), |f, _| differential(f))?)
}

fn xi_sign(f: &SetMap, tau: &Perm) -> i64 {
    let a = f.fiber_sizes();
    let n = a.len();
    let mut e = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            if tau.apply(i as u32 + 1) > tau.apply(j as u32 + 1) {
                e += (a[i] as i64 - 1) * (a[j] as i64 - 1);
            }
        }
    }
    parity(e)
}

/// `f·π = (−1)^{ξ(f,π⁻¹)} π⁻¹∘f`.
pub fn act_basis<R: Ring>(f: &SetMap, pi: &Perm) -> LinComb<SetMap, R> {
    let tau = pi.inverse();
    let g = SetMap::new(f.images().iter().map(|&v| tau.apply(v)).collect(), f.target()).unwrap();
    LinComb::term(g, R::from_i64(xi_sign(f, &tau)))
}

/// Weakly increasing sequences `1 = c₀ ≤ c₁ ≤ … ≤ c_r = len`.
fn cuts(r: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(r: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            let mut c = cur.clone();
            c.push(len);
            out.push(c);
            return;
        }
        let lo = *cur.last().unwrap();
        for c in lo..=len {
            cur.push(c);
            rec(r, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, len, &mut vec![1], &mut out);
    out
}

/// Sign of one interval-cut term `h` of `f ∘ᵢ g`, where the `t`-th
/// occurrence of `i` (at position `jₜ` of `f`, `m` = length of `f`) receives
/// the interval `g[c_{t−1}..c_t]`:
///
/// ```text
/// s(f) s(g) s(h) · λ · (−1)^{Σₜ (cₜ − c_{t−1})(m − jₜ)}
/// ```
///
/// The exponent is the shuffle sign of the unique Eilenberg–Zilber path
/// producing `h`; `λ` is the desuspension sign of `γ(f; 1,…,g,…,1)`, which
/// depends only on arities and degrees.
fn cut_sign(f: &SetMap, i: u32, g: &SetMap, c: &[usize], occ: &[usize], h: &SetMap) -> i64 {
    let m = f.source();
    let shuffle: usize = (1..c.len()).map(|t| (c[t] - c[t - 1]) * (m - occ[t - 1])).sum();
    let mut gs: Vec<OSMorphism> = vec![OSMorphism::identity(1); f.target()];
    gs[i as usize - 1] = OSMorphism::natural(g);
    let lambda = operads::lambda_sign(&OSMorphism::natural(f), &gs);
    surjection_sign(f) * surjection_sign(g) * surjection_sign(h) * lambda * parity(shuffle as i64)
}

/// `f ∘ᵢ g` on basis elements.
pub fn partial_compose<R: Ring>(f: &SetMap, i: u32, g: &SetMap) -> LinComb<SetMap, R> {
    let (fv, gv) = (f.images(), g.images());
    let k = g.target() as u32;
    let occ: Vec<usize> = (0..fv.len()).filter(|&j| fv[j] == i).map(|j| j + 1).collect();
    let mut out = LinComb::zero();
    for c in cuts(occ.len(), gv.len()) {
        let mut values = Vec::with_capacity(fv.len() + gv.len());
        let mut t = 0;
        for &v in fv {
            if v == i {
                t += 1;
                values.extend(gv[c[t - 1] - 1..c[t]].iter().map(|&w| w + i - 1));
            } else {
                values.push(if v < i { v } else { v + k - 1 });
            }
        }
        let h = SetMap::new(values, f.target() + g.target() - 1).unwrap();
        if is_nondegenerate(&h) {
            let sign = cut_sign(f, i, g, &c, &occ, &h);
            out.add_term(h, R::from_i64(sign));
        }
    }
    out
}

/// `γ(f; g₁,…,gₙ) = (−1)^{Σ_{i<j}|gᵢ||gⱼ|} (…(f ∘ₙ gₙ) ∘ₙ₋₁ …) ∘₁ g₁`.
pub fn compose_basis<R: Ring>(f: &SetMap, gs: &[SetMap]) -> Result<LinComb<SetMap, R>, SurjectionError> {
    if gs.len() != f.target() {
        return Err(SurjectionError::ArityMismatch { outer: f.target(), given: gs.len() });
    }
    let degs: Vec<i64> = gs.iter().map(|g| (g.source() - g.target()) as i64).collect();
    let mut e = 0;
    for i in 0..degs.len() {
        for j in i + 1..degs.len() {
            e += degs[i] * degs[j];
        }
    }
    let mut acc: LinComb<SetMap, R> = LinComb::term(f.clone(), R::from_i64(parity(e)));
    for (i, g) in gs.iter().enumerate().rev() {
        acc = acc.flat_map(|h| partial_compose(h, i as u32 + 1, g));
    }
    Ok(acc)
}

/// Multilinear extension of [`compose_basis`], with the Koszul sign of
/// distributing `f ⊗ g₁ ⊗ …` over sums being trivial on basis elements.
pub fn compose_elements<R: Ring>(x: &SurjectionElement<R>, ys: &[SurjectionElement<R>]) -> Result<SurjectionElement<R>, SurjectionError> {
    if ys.len() != x.arity {
        return Err(SurjectionError::ArityMismatch { outer: x.arity, given: ys.len() });
    }
    let mut tuples: Vec<(Vec<SetMap>, R)> = vec![(vec![], R::one())];
    for y in ys {
        let mut next = Vec::new();
        for (t, c) in &tuples {
            for (g, cg) in y.terms.iter() {
                let mut t2 = t.clone();
                t2.push(g.clone());
                next.push((t2, c.clone() * cg.clone()));
            }
        }
        tuples = next;
    }
    let mut terms = LinComb::zero();
    for (f, cf) in x.terms.iter() {
        for (gs, c) in &tuples {
            terms.add_scaled(&compose_basis(f, gs)?, &(cf.clone() * c.clone()));
        }
    }
    Ok(SurjectionElement {
        arity: ys.iter().map(|y| y.arity).sum(),
        degree: x.degree + ys.iter().map(|y| y.degree).sum::<i64>(),
        terms,
    })
}

/// `S(σ⁻ⁿf) = s(f)·f`, zero for degenerate underlying maps.
pub fn map_s_basis<R: Ring>(f: &OSMorphism) -> LinComb<SetMap, R> {
    let u = f.underlying();
    if is_nondegenerate(&u) {
        LinComb::term(u.clone(), R::from_i64(surjection_sign(&u)))
    } else {
        LinComb::zero()
    }
}

pub fn map_s<R: Ring>(x: &OperadElement<R>) -> SurjectionElement<R> {
    assert_eq!(x.op, Operad::J, "S is defined on 𝔧");
    SurjectionElement { arity: x.arity, degree: x.degree, terms: x.terms.flat_map(map_s_basis) }
}

/// Bounds for [`verify_bridge`].
#[derive(Clone, Debug)]
pub struct BridgeBounds {
    /// Chain-map and equivariance checks: arities `1..=max_arity`.
    pub max_arity: usize,
    pub max_degree: i64,
    /// Composition checks: outer arity, inner arities, and total degree.
    pub max_compose_arity: usize,
    pub max_compose_degree: i64,
    pub max_cup_i: usize,
}

impl Default for BridgeBounds {
    fn default() -> Self {
        BridgeBounds { max_arity: 3, max_degree: 3, max_compose_arity: 2, max_compose_degree: 2, max_cup_i: 3 }
    }
}

fn j_el(f: &OSMorphism) -> OperadElement<i64> {
    OperadElement::basis(Operad::J, f.clone()).unwrap()
}

/// The bridge identities, exhaustively within bounds. Reports, in order:
/// `d∘d = 0` on 𝒮, `S∘d = d∘S`, `S(x·π) = S(x)·π`, composition
/// compatibility, `S(eᵢ) = ±(1,2,1,…)`, and surjectivity of `S` on bases.
pub fn verify_bridge(bounds: &BridgeBounds) -> Vec<IdentityReport> {
    let b = json!({
        "max_arity": bounds.max_arity, "max_degree": bounds.max_degree,
        "max_compose_arity": bounds.max_compose_arity, "max_compose_degree": bounds.max_compose_degree,
    });
    let mut reports = Vec::new();

    let mut r = IdentityReport::new("d∘d = 0 on S(n)", b.clone());
    for n in 1..=bounds.max_arity {
        for d in 0..=bounds.max_degree + 1 {
            for f in basis(n, d) {
                let dd = differential::<i64>(&f).flat_map(differential);
                r.record(dd.is_zero(), || format!("f={:?}", f.images()));
            }
        }
    }
    reports.push(r);

    let j_basis: Vec<OSMorphism> = (1..=bounds.max_arity)
        .flat_map(|n| (0..=bounds.max_degree).flat_map(move |d| operads::basis(Operad::J, n, d)))
        .collect();

    let mut r = IdentityReport::new("S∘d = d∘S", b.clone());
    r.absorb(
        j_basis
            .par_iter()
            .map(|f| {
                let x = j_el(f);
                let lhs = map_s(&x.differential()).terms;
                let rhs = map_s(&x).differential().terms;
                (lhs != rhs).then(|| format!("f={f:?}: {lhs:?} vs {rhs:?}"))
            })
            .collect(),
    );
    reports.push(r);

    let mut r = IdentityReport::new("S(x·π) = S(x)·π", b.clone());
    r.absorb(
        j_basis
            .par_iter()
            .flat_map_iter(|f| {
                Perm::all(f.target()).into_iter().map(move |pi| {
                    let x = j_el(f);
                    let lhs = map_s(&x.act(&pi)).terms;
                    let rhs = map_s(&x).act(&pi).terms;
                    (lhs != rhs).then(|| format!("f={f:?} π={:?}: {lhs:?} vs {rhs:?}", pi.images()))
                })
            })
            .collect(),
    );
    reports.push(r);

    let mut r = IdentityReport::new("S(γ(x; y)) = γ(S x; S y)", b.clone());
    let small: Vec<OSMorphism> = (1..=bounds.max_compose_arity)
        .flat_map(|n| (0..=bounds.max_compose_degree).flat_map(move |d| operads::basis(Operad::J, n, d)))
        .collect();
    let mut instances = Vec::new();
    for f in &small {
        let mut tuples: Vec<Vec<OSMorphism>> = vec![vec![]];
        for _ in 0..f.target() {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    small.iter().map(move |g| {
                        let mut t2 = t.clone();
                        t2.push(g.clone());
                        t2
                    })
                })
                .collect();
        }
        for t in tuples {
            let total = Operad::J.degree_of(f) + t.iter().map(|g| Operad::J.degree_of(g)).sum::<i64>();
            if total <= bounds.max_compose_degree {
                instances.push((f.clone(), t));
            }
        }
    }
    r.absorb(
        instances
            .par_iter()
            .map(|(f, gs)| {
                let x = j_el(f);
                let ys: Vec<_> = gs.iter().map(j_el).collect();
                let lhs = map_s(&compose(&x, &ys).unwrap()).terms;
                let sys: Vec<_> = ys.iter().map(map_s).collect();
                let rhs = compose_elements(&map_s(&x), &sys).unwrap().terms;
                (lhs != rhs).then(|| format!("f={f:?} g={gs:?}: {lhs:?} vs {rhs:?}"))
            })
            .collect(),
    );
    reports.push(r);

    reports.push(check_partial_axioms(bounds.max_compose_arity + 1, bounds.max_compose_degree));

    let mut r = IdentityReport::new("S(e_i) = ±(1,2,1,2,…)", json!({"max_i": bounds.max_cup_i}));
    for i in 0..=bounds.max_cup_i {
        let e = crate::coactions::cup_i_element::<i64>(i);
        let s = map_s(&e).terms;
        let alt = SetMap::new((0..i as u32 + 2).map(|t| t % 2 + 1).collect(), 2).unwrap();
        r.record(s.len() == 1 && s.coeff(&alt).abs() == 1, || format!("S(e_{i}) = {s:?}"));
    }
    reports.push(r);

    let mut r = IdentityReport::new("S hits every basis surjection", b);
    for n in 1..=bounds.max_arity {
        for d in 0..=bounds.max_degree {
            for f in basis(n, d) {
                let lift = OSMorphism::natural(&f);
                let s = map_s_basis::<i64>(&lift);
                r.record(s.coeff(&f).abs() == 1 && s.len() == 1, || format!("f={:?}", f.images()));
            }
        }
    }
    reports.push(r);
    reports
}

fn sdeg(f: &SetMap) -> i64 {
    (f.source() - f.target()) as i64
}

fn compose_lc(x: &LinComb<SetMap, i64>, i: u32, y: &LinComb<SetMap, i64>) -> LinComb<SetMap, i64> {
    let mut out = LinComb::zero();
    for (f, a) in x.iter() {
        for (g, b) in y.iter() {
            out.add_scaled(&partial_compose(f, i, g), &(a * b));
        }
    }
    out
}

/// `𝒮` on its own: Leibniz `d(f∘ᵢg) = df∘ᵢg + (−1)^{|f|} f∘ᵢdg`, sequential
/// `(f∘ᵢg)∘_{i+j−1}h = f∘ᵢ(g∘ⱼh)` and parallel
/// `(f∘ᵢg)∘_{j+k−1}h = (−1)^{|g||h|}(f∘ⱼh)∘ᵢg` (`i<j`, `k` = arity of `g`).
pub fn check_partial_axioms(max_arity: usize, max_total_degree: i64) -> IdentityReport {
    let mut r = IdentityReport::new(
        "S(n) partial compositions: Leibniz and associativity",
        json!({"max_arity": max_arity, "max_total_degree": max_total_degree}),
    );
    let els: Vec<SetMap> =
        (1..=max_arity).flat_map(|n| (0..=max_total_degree).flat_map(move |d| basis(n, d))).collect();
    let b = |f: &SetMap| LinComb::<SetMap, i64>::basis(f.clone());
    for f in &els {
        for g in &els {
            if sdeg(f) + sdeg(g) > max_total_degree {
                continue;
            }
            for i in 1..=f.target() as u32 {
                let fg = partial_compose::<i64>(f, i, g);
                let lhs = fg.flat_map(differential);
                let mut rhs = compose_lc(&differential(f), i, &b(g));
                rhs.add_scaled(&compose_lc(&b(f), i, &differential(g)), &parity(sdeg(f)));
                r.record(lhs == rhs, || format!("Leibniz f={:?} i={i} g={:?}", f.images(), g.images()));
                for h in &els {
                    if sdeg(f) + sdeg(g) + sdeg(h) > max_total_degree {
                        continue;
                    }
                    for j in 1..=g.target() as u32 {
                        let lhs = compose_lc(&fg, i + j - 1, &b(h));
                        let rhs = compose_lc(&b(f), i, &partial_compose(g, j, h));
                        r.record(lhs == rhs, || {
                            format!("sequential f={:?} i={i} g={:?} j={j} h={:?}", f.images(), g.images(), h.images())
                        });
                    }
                    let k = g.target() as u32;
                    for j in i + 1..=f.target() as u32 {
                        let lhs = compose_lc(&fg, j + k - 1, &b(h));
                        let rhs = compose_lc(&partial_compose(f, j, h), i, &b(g)).scale(&parity(sdeg(g) * sdeg(h)));
                        r.record(lhs == rhs, || {
                            format!("parallel f={:?} i={i} g={:?} j={j} h={:?}", f.images(), g.images(), h.images())
                        });
                    }
                }
            }
        }
    }
    r
}

/// Dimension of the kernel of `S: 𝔧(n)_d → 𝒮(n)_d` over 𝔽₂ and over ℚ
/// (computed mod a large prime), per degree. Reported, not asserted.
pub fn kernel_dimensions(n: usize, max_degree: i64) -> BTreeMap<i64, (usize, usize)> {
    type P = Fp<1_000_003>;
    let mut out = BTreeMap::new();
    for d in 0..=max_degree {
        let src = operads::basis(Operad::J, n, d);
        let tgt = basis(n, d);
        let index: BTreeMap<&SetMap, usize> = tgt.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let build = |red: &dyn Fn(i64) -> Option<()>| -> Vec<Vec<(usize, i64)>> {
            src.iter()
                .map(|f| {
                    map_s_basis::<i64>(f)
                        .iter()
                        .filter(|(_, c)| red(**c).is_some())
                        .map(|(g, c)| (index[g], *c))
                        .collect()
                })
                .collect()
        };
        let cols = build(&|_| Some(()));
        let m2 = SparseMatrix::<Fp<2>> {
            rows: tgt.len(),
            cols: cols.iter().map(|c| c.iter().map(|&(r, v)| (r, Fp::<2>::new(v))).collect()).collect(),
        };
        let mp = SparseMatrix::<P> {
            rows: tgt.len(),
            cols: cols.iter().map(|c| c.iter().map(|&(r, v)| (r, P::new(v))).collect()).collect(),
        };
        out.insert(d, (src.len() - rank_field(&m2), src.len() - rank_field(&mp)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sm(v: &[u32], n: usize) -> SetMap {
        SetMap::new(v.to_vec(), n).unwrap()
    }

    #[test]
    fn signs() {
        assert_eq!(surjection_sign(&sm(&[1, 2], 2)), -1);
        assert_eq!(surjection_sign(&sm(&[1, 2, 1], 2)), -1);
        assert_eq!(surjection_sign(&sm(&[1, 1, 2, 2], 2)), 1);
        let id2 = OperadElement::<i64>::basis(Operad::J, OSMorphism::identity(2)).unwrap();
        assert_eq!(map_s(&id2).terms, LinComb::term(sm(&[1, 2], 2), -1));
        let e1 = crate::coactions::cup_i_element::<i64>(1);
        assert_eq!(map_s(&e1).terms, LinComb::term(sm(&[1, 2, 1], 2), -1));
        // degenerate underlying map
        let f = OSMorphism::natural(&sm(&[1, 1, 2], 2));
        assert!(map_s_basis::<i64>(&f).is_zero());
    }

    #[test]
    fn surjection_complex() {
        assert!(differential::<i64>(&sm(&[1, 2], 2)).is_zero());
        for n in 2..=3 {
            surjection_operad::<i64>(n, 4).unwrap();
        }
        assert_eq!(basis(2, 1).len(), 2);
        assert_eq!(basis(3, 0).len(), 6);
    }

    #[test]
    fn partial_composition_examples() {
        // (1,2) ∘₁ (1,2) = (1,2,3)
        let c = partial_compose::<i64>(&sm(&[1, 2], 2), 1, &sm(&[1, 2], 2));
        assert_eq!(c, LinComb::basis(sm(&[1, 2, 3], 3)));
        // (1,2,1) ∘₁ (1,2): two cuts survive
        let c = partial_compose::<i64>(&sm(&[1, 2, 1], 2), 1, &sm(&[1, 2], 2));
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn bridge() {
        let bounds = BridgeBounds { max_arity: 3, max_degree: 2, max_compose_arity: 2, max_compose_degree: 2, max_cup_i: 3 };
        for r in verify_bridge(&bounds) {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn kernels() {
        let k = kernel_dimensions(2, 2);
        // degree 0: 𝔧(2)₀ has two elements, both mapped isomorphically
        assert_eq!(k[&0], (0, 0));
    }
}
