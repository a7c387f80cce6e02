//! The chain operads 𝔞 and 𝔧 = Λ𝔞.
//!
//! `𝔞(n)` has basis the surjective OΣ-morphisms `(d+1)‾ → n̄` in degree `d`,
//! and is identified with the relative simplicial chains of `U(OΣ_n)`
//! (boundary = non-surjective maps); its differential is the simplicial one.
//! Composition is the multi-shuffle Eilenberg–Zilber map followed by `Ψ`.
//!
//! `𝔧(n) = σ^{1−n} 𝔞(n) ⊗ sgn_n` is modelled as the arity-wise tensor product
//! `CoEnd_L(n) ⊗ 𝔞(n)`, where `L` is spanned by one element `e` of degree
//! −1 and `u_n : e ↦ e^{⊗n}` spans `CoEnd_L(n)` in degree `1−n`. Every sign
//! in `𝔧` comes from the Koszul rule applied to that picture:
//! - `d(u_n ⊗ a) = (−1)^{1−n} u_n ⊗ da`;
//! - `u_n · π = sgn(π) u_n`;
//! - `γ(u_n; u_{k₁},…,u_{kₙ}) = (−1)^{Σ(kᵢ−1)(i−1) + (n−1)(K−n)} u_K`, where the
//!   second exponent is the Koszul sign of the composition rule
//!   `γ(F; G) = (−1)^{|F||G|} (G₁⊗…⊗Gₙ)∘F` in `CoEnd`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::chains::{homology_z, koszul_sign, shuffles, ChainComplex, ChainError, Homology};
use crate::lincomb::LinComb;
use crate::linalg::smith_form;
use crate::oscalc::{factorial, OMap, OSMorphism, Perm};
use crate::report::IdentityReport;
use crate::scalar::Ring;

#[derive(Debug, Error)]
pub enum OperadError {
    #[error("arity mismatch: {outer} inputs expected, {given} given")]
    ArityMismatch { outer: usize, given: usize },
    #[error("composition with a nullary input is not defined at chain level")]
    NullaryInput,
    #[error("{0:?} is not a basis element (it is not surjective)")]
    NotSurjective(OSMorphism),
    #[error("the augmentation is only defined on 𝔧(n)₀")]
    NotInDegreeZero,
    #[error(transparent)]
    Chain(#[from] ChainError),
}

pub type Result<T> = std::result::Result<T, OperadError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Operad {
    /// `𝔞(n) = σ⁻¹C^O(OΣ_n, ∂OΣ_n)`.
    A,
    /// `𝔧(n) = σ^{−n}C^O(OΣ_n, ∂OΣ_n) ⊗ sgn_n`.
    J,
}

impl Operad {
    pub fn symbol(self) -> &'static str {
        match self {
            Operad::A => "a",
            Operad::J => "j",
        }
    }

    /// Source size of basis morphisms in arity `n`, degree `d`.
    pub fn source_size(self, n: usize, d: i64) -> Option<usize> {
        let m = match self {
            Operad::A => d + 1,
            Operad::J => d + n as i64,
        };
        (m >= 0).then_some(m as usize)
    }

    /// Degree of a basis morphism.
    pub fn degree_of(self, f: &OSMorphism) -> i64 {
        match self {
            Operad::A => f.source() as i64 - 1,
            Operad::J => f.source() as i64 - f.target() as i64,
        }
    }

    /// Lowest nonzero degree in arity `n`.
    pub fn bottom(self, n: usize) -> i64 {
        match self {
            Operad::A => n as i64 - 1,
            Operad::J => 0,
        }
    }
}

/// Basis of `op(n)_d`, ordered lexicographically by `(omap, perm)`.
pub fn basis(op: Operad, n: usize, d: i64) -> Vec<OSMorphism> {
    let Some(m) = op.source_size(n, d) else { return vec![] };
    if n == 0 {
        return if m == 0 { vec![OSMorphism::identity(0)] } else { vec![] };
    }
    let mut out = OSMorphism::all_surjective(m, n);
    out.sort();
    out
}

/// `d^O f = Σ_{i=1}^m (−1)^i f∘δ_i` modulo non-surjective maps.
fn o_boundary<R: Ring>(f: &OSMorphism) -> LinComb<OSMorphism, R> {
    let m = f.source();
    let mut out = LinComb::zero();
    for i in 1..=m {
        let g = f.compose(&OSMorphism::from_omap(OMap::delta(i, m))).unwrap();
        if g.is_surjective() {
            out.add_term(g, R::sign(i as i64));
        }
    }
    out
}

/// Differential of a basis element.
pub fn differential<R: Ring>(op: Operad, f: &OSMorphism) -> LinComb<OSMorphism, R> {
    let d = o_boundary::<R>(f);
    match op {
        Operad::A => d.neg(),
        Operad::J => d.scale(&R::sign(f.target() as i64)),
    }
}

/// `op(n)` on degrees `bottom..=hi`.
pub fn complex<R: Ring>(op: Operad, n: usize, hi: i64) -> Result<ChainComplex<OSMorphism, R>> {
    let name = format!("{}({n})", op.symbol());
    Ok(ChainComplex::from_fn(&name, op.bottom(n), hi, move |d| basis(op, n, d), move |f, _| differential(op, f))?)
}

/// A homogeneous element of `op(n)_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperadElement<R: Ring> {
    pub op: Operad,
    pub arity: usize,
    pub degree: i64,
    pub terms: LinComb<OSMorphism, R>,
}

impl<R: Ring> OperadElement<R> {
    pub fn basis(op: Operad, f: OSMorphism) -> Result<Self> {
        if !f.is_surjective() {
            return Err(OperadError::NotSurjective(f));
        }
        Ok(OperadElement { op, arity: f.target(), degree: op.degree_of(&f), terms: LinComb::basis(f) })
    }

    pub fn zero(op: Operad, arity: usize, degree: i64) -> Self {
        OperadElement { op, arity, degree, terms: LinComb::zero() }
    }

    /// `σ⁻¹id ∈ 𝔞(1)₀`, resp. its image in `𝔧(1)₀`.
    pub fn unit(op: Operad) -> Self {
        Self::basis(op, OSMorphism::identity(1)).unwrap()
    }

    pub fn differential(&self) -> Self {
        OperadElement {
            op: self.op,
            arity: self.arity,
            degree: self.degree - 1,
            terms: self.terms.flat_map(|f| differential(self.op, f)),
        }
    }

    /// Right action `x·π`.
    pub fn act(&self, pi: &Perm) -> Self {
        OperadElement { terms: self.terms.flat_map(|f| act_basis(self.op, pi, f)), ..self.clone() }
    }
}

/// `f·π = π⁻¹∘f`, times `sgn(π)` in 𝔧.
pub fn act_basis<R: Ring>(op: Operad, pi: &Perm, f: &OSMorphism) -> LinComb<OSMorphism, R> {
    let g = OSMorphism::from_perm(pi.inverse()).compose(f).unwrap();
    let c = match op {
        Operad::A => R::one(),
        Operad::J => R::from_i64(pi.sign()),
    };
    LinComb::term(g, c)
}

/// `γ_𝔞` on basis elements: `Ψ_* ∘ EZ`.
///
/// For a shuffle `(a₀,a₁,…,aₙ)` the morphism `Ψ(f a₀; g₁a₁,…,gₙaₙ)` sends `x`
/// to block `i = f(a₀x)`, position `gᵢ(aᵢx)`; within a fibre, points are
/// ordered by the rank of `aᵢx` in its `gᵢ`-fibre, then by `x` (degeneracies
/// are order-preserving and the inclusions `i_I` carry the natural order).
fn a_compose<R: Ring>(f: &OSMorphism, gs: &[OSMorphism]) -> LinComb<OSMorphism, R> {
    let mut dims = vec![f.source() - 1];
    dims.extend(gs.iter().map(|g| g.source() - 1));
    let uf = f.underlying();
    let ug: Vec<_> = gs.iter().map(|g| g.underlying()).collect();
    let ranks: Vec<Vec<u32>> = gs
        .iter()
        .map(|g| {
            let mut r = vec![0u32; g.source() + 1];
            for fib in g.fibers() {
                for (pos, &p) in fib.iter().enumerate() {
                    r[p as usize] = pos as u32;
                }
            }
            r
        })
        .collect();
    let mut offset = vec![0u32; gs.len() + 1];
    for (i, g) in gs.iter().enumerate() {
        offset[i + 1] = offset[i] + g.target() as u32;
    }
    let total = offset[gs.len()] as usize;
    let mut out = LinComb::zero();
    let mut keys: Vec<(u32, u32, u32)> = Vec::new();
    for sh in shuffles(&dims).iter() {
        let size = sh.maps[0].source();
        keys.clear();
        for x in 1..=size as u32 {
            let i = uf.apply(sh.maps[0].apply(x)) as usize - 1;
            let p = sh.maps[i + 1].apply(x);
            keys.push((offset[i] + ug[i].apply(p), ranks[i][p as usize], x));
        }
        keys.sort_unstable();
        let mut fibers = vec![Vec::new(); total];
        for &(t, _, x) in &keys {
            fibers[t as usize - 1].push(x);
        }
        if fibers.iter().all(|fb| !fb.is_empty()) {
            out.add_term(OSMorphism::from_fibers(size, &fibers).unwrap(), R::from_i64(sh.sign));
        }
    }
    out
}

/// The sign relating `γ_𝔧` to `γ_𝔞` on basis elements: Koszul sign of
/// `u_n⊗f⊗u_{k₁}⊗g₁⊗… ↦ u_n⊗u_{k₁}⊗…⊗f⊗g₁⊗…` times the CoEnd sign
/// `γ(F; G₁,…,Gₙ) = (−1)^{|F|·Σ|Gᵢ|} (G₁⊗…⊗Gₙ)∘F`.
pub fn lambda_sign(f: &OSMorphism, gs: &[OSMorphism]) -> i64 {
    let n = gs.len();
    let mut degrees = vec![1 - n as i64, f.source() as i64 - 1];
    for g in gs {
        degrees.push(1 - g.target() as i64);
        degrees.push(g.source() as i64 - 1);
    }
    let mut order: Vec<usize> = (0..=n).map(|i| 2 * i).collect();
    order.extend((0..=n).map(|i| 2 * i + 1));
    // (u_{k₁}⊗…⊗u_{kₙ})∘u_n applied to e, and the Koszul sign of passing
    // the inner operations across the outer one
    let inner: i64 = gs.iter().map(|g| 1 - g.target() as i64).sum();
    let coend: i64 = gs.iter().enumerate().map(|(i, g)| (g.target() as i64 - 1) * i as i64).sum::<i64>()
        + (1 - n as i64) * inner;
    koszul_sign(&degrees, &order) * if coend % 2 == 0 { 1 } else { -1 }
}

/// `γ(f; g₁,…,gₙ)` on basis elements.
pub fn compose_basis<R: Ring>(op: Operad, f: &OSMorphism, gs: &[OSMorphism]) -> Result<LinComb<OSMorphism, R>> {
    if gs.len() != f.target() {
        return Err(OperadError::ArityMismatch { outer: f.target(), given: gs.len() });
    }
    if gs.is_empty() {
        return Ok(LinComb::basis(f.clone()));
    }
    if gs.iter().any(|g| g.target() == 0) {
        return Err(OperadError::NullaryInput);
    }
    let a = a_compose::<R>(f, gs);
    Ok(match op {
        Operad::A => a,
        Operad::J => a.scale(&R::from_i64(lambda_sign(f, gs))),
    })
}

/// Multilinear composition of homogeneous elements.
pub fn compose<R: Ring>(x: &OperadElement<R>, ys: &[OperadElement<R>]) -> Result<OperadElement<R>> {
    if ys.len() != x.arity {
        return Err(OperadError::ArityMismatch { outer: x.arity, given: ys.len() });
    }
    let arity = ys.iter().map(|y| y.arity).sum();
    let degree = x.degree + ys.iter().map(|y| y.degree).sum::<i64>();
    let mut terms = LinComb::zero();
    let mut choice: Vec<(OSMorphism, R)> = Vec::new();
    fn rec<R: Ring>(
        op: Operad,
        f: &OSMorphism,
        c: &R,
        ys: &[OperadElement<R>],
        choice: &mut Vec<(OSMorphism, R)>,
        out: &mut LinComb<OSMorphism, R>,
    ) -> Result<()> {
        if choice.len() == ys.len() {
            let gs: Vec<OSMorphism> = choice.iter().map(|(g, _)| g.clone()).collect();
            let coeff = choice.iter().fold(c.clone(), |acc, (_, d)| acc * d.clone());
            out.add_scaled(&compose_basis(op, f, &gs)?, &coeff);
            return Ok(());
        }
        for (g, d) in ys[choice.len()].terms.iter() {
            choice.push((g.clone(), d.clone()));
            rec(op, f, c, ys, choice, out)?;
            choice.pop();
        }
        Ok(())
    }
    for (f, c) in x.terms.iter() {
        rec(x.op, f, c, ys, &mut choice, &mut terms)?;
    }
    Ok(OperadElement { op: x.op, arity, degree, terms })
}

/// `sgn : 𝔧(n)₀ → k`.
pub fn augmentation<R: Ring>(x: &OperadElement<R>) -> Result<R> {
    if x.op != Operad::J || x.degree != 0 {
        return Err(OperadError::NotInDegreeZero);
    }
    Ok(x.terms.iter().fold(R::zero(), |acc, (f, c)| acc + c.clone() * R::from_i64(f.underlying_sign())))
}

trait UnderlyingSign {
    fn underlying_sign(&self) -> i64;
}

impl UnderlyingSign for OSMorphism {
    /// Sign of the underlying bijection.
    fn underlying_sign(&self) -> i64 {
        let u = self.underlying();
        Perm::new(u.images().to_vec()).expect("bijection").sign()
    }
}

/// Block permutation of `Σ_K`: block `i` (size `ks[i]`) goes to position
/// `π(i)`, keeping its internal order.
pub fn block_permutation(pi: &Perm, ks: &[usize]) -> Perm {
    let n = ks.len();
    // target block sizes: the block landing in slot j has size ks[π⁻¹(j)]
    let inv = pi.inverse();
    let mut target_offset = vec![0u32; n + 1];
    for j in 0..n {
        target_offset[j + 1] = target_offset[j] + ks[inv.apply(j as u32 + 1) as usize - 1] as u32;
    }
    let mut images = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        let j = pi.apply(i as u32 + 1) as usize - 1;
        for r in 0..k as u32 {
            images.push(target_offset[j] + r + 1);
        }
    }
    Perm::new(images).unwrap()
}

// ---------------------------------------------------------------------------
// Verification

/// Bounds for [`verify_operad_axioms`]: arities of every element involved,
/// degree of every element, and the total degree of each instance.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AxiomBounds {
    pub max_arity: usize,
    pub max_degree: i64,
    pub max_total_degree: i64,
}

fn elements(op: Operad, bounds: &AxiomBounds) -> Vec<OSMorphism> {
    let mut out = Vec::new();
    for n in 1..=bounds.max_arity {
        for d in op.bottom(n)..=bounds.max_degree {
            out.extend(basis(op, n, d));
        }
    }
    out
}

fn tuples(choices: &[OSMorphism], len: usize, op: Operad, budget: i64) -> Vec<Vec<OSMorphism>> {
    let mut out = vec![(Vec::new(), 0i64)];
    for _ in 0..len {
        let mut next = Vec::new();
        for (t, used) in &out {
            for c in choices {
                let d = op.degree_of(c) - op.bottom(c.target());
                if used + d <= budget {
                    let mut t2: Vec<OSMorphism> = t.clone();
                    t2.push(c.clone());
                    next.push((t2, used + d));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(t, _)| t).collect()
}

fn deg_of(op: Operad, f: &OSMorphism) -> i64 {
    op.degree_of(f)
}

/// Excess of degree above the bottom of the arity; bounds the cost of an instance.
fn excess(op: Operad, f: &OSMorphism) -> i64 {
    op.degree_of(f) - op.bottom(f.target())
}

fn e<R: Ring>(op: Operad, f: &OSMorphism) -> OperadElement<R> {
    OperadElement::basis(op, f.clone()).unwrap()
}

/// Exhaustive check of the operad identities on basis elements within bounds.
///
/// Returned reports, in order: `d∘d = 0`, the Leibniz rule for `γ`,
/// associativity, left unit, right unit, equivariance in the outer slot,
/// equivariance in the inner slots, and (for 𝔧) agreement of the degree-0
/// part with the permutation operad up to the recorded sign.
pub fn verify_operad_axioms(op: Operad, bounds: &AxiomBounds) -> Vec<IdentityReport> {
    let b = json!({"operad": op.symbol(), "max_arity": bounds.max_arity, "max_degree": bounds.max_degree, "max_total_degree": bounds.max_total_degree});
    let els = elements(op, bounds);
    let budget = bounds.max_total_degree;
    let mut reports = Vec::new();

    // d∘d = 0
    let mut r = IdentityReport::new(&format!("d∘d = 0 in {}(n)", op.symbol()), b.clone());
    for n in 0..=bounds.max_arity {
        let hi = op.bottom(n) + bounds.max_degree.max(1) + 1;
        match complex::<i64>(op, n, hi) {
            Ok(c) => r.instance_count += (op.bottom(n)..=hi).map(|d| c.rank(d)).sum::<usize>(),
            Err(err) => r.fail(err.to_string()),
        }
    }
    reports.push(r);

    // instances (x; y₁,…,yₙ)
    let outer: Vec<(OSMorphism, Vec<OSMorphism>)> = els
        .iter()
        .filter(|x| excess(op, x) <= budget)
        .flat_map(|x| {
            tuples(&els, x.target(), op, budget - excess(op, x)).into_iter().map(move |ys| (x.clone(), ys))
        })
        .collect();

    // Leibniz
    let mut r = IdentityReport::new("d γ(x;y) = γ(dx;y) + Σ ± γ(x;…,dyᵢ,…)", b.clone());
    r.absorb(
        outer
            .par_iter()
            .map(|(x, ys)| {
                let xe = e::<i64>(op, x);
                let yes: Vec<_> = ys.iter().map(|y| e::<i64>(op, y)).collect();
                let lhs = compose(&xe, &yes).unwrap().differential().terms;
                let mut rhs = compose(&xe.differential(), &yes).unwrap().terms;
                let mut before = xe.degree;
                for i in 0..yes.len() {
                    let mut yd = yes.clone();
                    yd[i] = yes[i].differential();
                    rhs.add_scaled(&compose(&xe, &yd).unwrap().terms, &i64::sign(before));
                    before += yes[i].degree;
                }
                (lhs != rhs).then(|| format!("x={x:?} y={ys:?}: {lhs:?} vs {rhs:?}"))
            })
            .collect(),
    );
    reports.push(r);

    // associativity
    let mut r = IdentityReport::new("γ(γ(x;y);z) = ± γ(x;γ(y₁;z),…)", b.clone());
    let assoc: Vec<(OSMorphism, Vec<OSMorphism>, Vec<OSMorphism>)> = outer
        .iter()
        .flat_map(|(x, ys)| {
            let used: i64 = excess(op, x) + ys.iter().map(|y| excess(op, y)).sum::<i64>();
            let k: usize = ys.iter().map(|y| y.target()).sum();
            tuples(&els, k, op, budget - used).into_iter().map(move |zs| (x.clone(), ys.clone(), zs))
        })
        .collect();
    r.absorb(
        assoc
            .par_iter()
            .map(|(x, ys, zs)| {
                let xe = e::<i64>(op, x);
                let yes: Vec<_> = ys.iter().map(|y| e::<i64>(op, y)).collect();
                let zes: Vec<_> = zs.iter().map(|z| e::<i64>(op, z)).collect();
                let lhs = compose(&compose(&xe, &yes).unwrap(), &zes).unwrap().terms;
                let mut inner = Vec::new();
                let mut offset = 0;
                let mut order = Vec::new();
                let n = ys.len();
                for (i, y) in yes.iter().enumerate() {
                    let block = &zes[offset..offset + y.arity];
                    order.push(i);
                    order.extend((0..y.arity).map(|j| n + offset + j));
                    inner.push(compose(y, block).unwrap());
                    offset += y.arity;
                }
                let mut degrees: Vec<i64> = ys.iter().map(|y| deg_of(op, y)).collect();
                degrees.extend(zs.iter().map(|z| deg_of(op, z)));
                let eps = koszul_sign(&degrees, &order);
                let rhs = compose(&xe, &inner).unwrap().terms.scale(&eps);
                (lhs != rhs).then(|| format!("x={x:?} y={ys:?} z={zs:?}"))
            })
            .collect(),
    );
    reports.push(r);

    // units
    let unit = OperadElement::<i64>::unit(op);
    let mut r = IdentityReport::new("γ(1; y) = y", b.clone());
    for y in &els {
        let ye = e::<i64>(op, y);
        r.record(compose(&unit, &[ye.clone()]).unwrap() == ye, || format!("y={y:?}"));
    }
    reports.push(r);
    let mut r = IdentityReport::new("γ(x; 1,…,1) = x", b.clone());
    for x in &els {
        let xe = e::<i64>(op, x);
        let got = compose(&xe, &vec![unit.clone(); x.target()]).unwrap();
        r.record(got == xe, || format!("x={x:?} gives {:?}", got.terms));
    }
    reports.push(r.known("γ(x; 1,…,1) is x with its fibre orders made natural"));

    // outer equivariance: γ(x·π; y) = ε γ(x; y_{π⁻¹(1)},…)·π_{k}
    let mut r = IdentityReport::new("γ(x·π; y) = ε γ(x; π·y)·π⟨k⟩", b.clone());
    r.absorb(
        outer
            .par_iter()
            .flat_map_iter(|(x, ys)| {
                Perm::all(x.target()).into_iter().map(move |pi| {
                    let xe = e::<i64>(op, x);
                    let yes: Vec<_> = ys.iter().map(|y| e::<i64>(op, y)).collect();
                    let lhs = compose(&xe.act(&pi), &yes).unwrap().terms;
                    let inv = pi.inverse();
                    let order: Vec<usize> = (1..=ys.len() as u32).map(|j| inv.apply(j) as usize - 1).collect();
                    let permuted: Vec<_> = order.iter().map(|&i| yes[i].clone()).collect();
                    let degrees: Vec<i64> = ys.iter().map(|y| deg_of(op, y)).collect();
                    let eps = koszul_sign(&degrees, &order);
                    let ks: Vec<usize> = ys.iter().map(|y| y.target()).collect();
                    let big = block_permutation(&pi, &ks);
                    let rhs = compose(&xe, &permuted).unwrap().act(&big).terms.scale(&eps);
                    (lhs != rhs).then(|| format!("x={x:?} π={:?} y={ys:?}", pi.images()))
                })
            })
            .collect(),
    );
    reports.push(r);

    // inner equivariance: γ(x; y₁·τ₁,…) = γ(x; y)·(τ₁⊕…⊕τₙ)
    let mut r = IdentityReport::new("γ(x; y·τ) = γ(x; y)·(⊕τᵢ)", b.clone());
    r.absorb(
        outer
            .par_iter()
            .flat_map_iter(|(x, ys)| {
                let taus: Vec<Vec<Perm>> = ys.iter().fold(vec![vec![]], |acc, y| {
                    acc.iter()
                        .flat_map(|t| {
                            Perm::all(y.target()).into_iter().map(move |p| {
                                let mut t2 = t.clone();
                                t2.push(p);
                                t2
                            })
                        })
                        .collect()
                });
                taus.into_iter().map(move |ts| {
                    let xe = e::<i64>(op, x);
                    let yes: Vec<_> = ys.iter().map(|y| e::<i64>(op, y)).collect();
                    let acted: Vec<_> = yes.iter().zip(&ts).map(|(y, t)| y.act(t)).collect();
                    let lhs = compose(&xe, &acted).unwrap().terms;
                    let rhs = compose(&xe, &yes).unwrap().act(&Perm::direct_sum(&ts)).terms;
                    (lhs != rhs).then(|| format!("x={x:?} y={ys:?} τ={ts:?}"))
                })
            })
            .collect(),
    );
    reports.push(r);

    if op == Operad::J {
        reports.push(verify_degree_zero(bounds.max_arity.min(3)));
    }
    reports
}

/// The permutation-operad composite of bijections, read off the unique
/// injective shuffle path: the `t`-th point visits stage `r` of the outer
/// map and position `s` of the inner map attached to `π(r)`.
pub fn permutation_composite(pi: &Perm, rhos: &[Perm]) -> Perm {
    let ks: Vec<usize> = rhos.iter().map(Perm::len).collect();
    let mut offset = vec![0u32; ks.len() + 1];
    for i in 0..ks.len() {
        offset[i + 1] = offset[i] + ks[i] as u32;
    }
    let mut images = Vec::new();
    for r in 1..=pi.len() as u32 {
        let j = pi.apply(r) as usize - 1;
        for s in 1..=ks[j] as u32 {
            images.push(offset[j] + rhos[j].apply(s));
        }
    }
    Perm::new(images).unwrap()
}

fn bijection(pi: &Perm) -> OSMorphism {
    OSMorphism::from_perm(pi.clone())
}

/// Signs `ε(π; ρ₁,…,ρₙ)` with `γ_𝔧(π; ρ) = ε · permutation_composite(π; ρ)`,
/// for all `n, kᵢ ≤ max` (with `kᵢ ≥ 1`), in enumeration order.
pub fn degree_zero_signs(max: usize) -> std::result::Result<Vec<((Perm, Vec<Perm>), i64)>, String> {
    let mut out = Vec::new();
    for n in 1..=max {
        for ks in crate::joins::compositions_bounded(n, max).into_iter().filter(|ks| ks.iter().all(|&k| k >= 1)) {
            let rho_sets: Vec<Vec<Perm>> = ks.iter().map(|&k| Perm::all(k)).collect();
            let mut combos: Vec<Vec<Perm>> = vec![vec![]];
            for set in &rho_sets {
                combos = combos
                    .iter()
                    .flat_map(|c| {
                        set.iter().map(move |p| {
                            let mut c2 = c.clone();
                            c2.push(p.clone());
                            c2
                        })
                    })
                    .collect();
            }
            for pi in Perm::all(n) {
                for rhos in &combos {
                    let gs: Vec<OSMorphism> = rhos.iter().map(bijection).collect();
                    let got = compose_basis::<i64>(Operad::J, &bijection(&pi), &gs).map_err(|e| e.to_string())?;
                    let want = bijection(&permutation_composite(&pi, rhos));
                    if got.len() != 1 || got.coeff(&want).abs() != 1 {
                        return Err(format!("γ({:?}; {rhos:?}) = {got:?}, expected ±{want:?}", pi.images()));
                    }
                    out.push(((pi.clone(), rhos.clone()), got.coeff(&want)));
                }
            }
        }
    }
    Ok(out)
}

fn verify_degree_zero(max: usize) -> IdentityReport {
    let b = json!({"max_arity": max, "max_inner_arity": max});
    IdentityReport::from_check(
        "γ_𝔧 on 𝔧(*)₀ = ± permutation operad",
        b,
        degree_zero_signs(max).map(|v| v.len()),
    )
}

// ---------------------------------------------------------------------------
// E∞ certification

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub arity: usize,
    pub window: i64,
    /// `H_d` for `d = 0..window−1`, rendered.
    pub homology: Vec<String>,
    pub reports: Vec<IdentityReport>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(IdentityReport::passed)
    }
}

/// Certify `𝔧(n)` on the window `0..=D`: `H₀ = ℤ` with the augmentation an
/// isomorphism on it, `H_d = 0` for `1 ≤ d < D`, and `Σ_n` acting freely on
/// each basis.
pub fn certify_einfinity(n: usize, window: i64) -> Result<Certificate> {
    let c = complex::<i64>(Operad::J, n, window)?;
    let b = json!({"arity": n, "window": window});
    let mut reports = Vec::new();
    let mut homology = Vec::new();
    let mut hr = IdentityReport::new("H_*(𝔧(n)) = ℤ in degree 0", b.clone());
    for d in 0..window {
        let h = homology_z(&c, d)?;
        let want = if d == 0 { Homology::free(1) } else { Homology::free(0) };
        hr.record(h == want, || format!("H_{d} = {h}"));
        homology.push(h.to_string());
    }
    reports.push(hr);

    // augmentation: kills boundaries, and sends id to 1
    let mut ar = IdentityReport::new("sgn∘d = 0 and sgn(id) = 1", b.clone());
    for f in c.basis(1) {
        let de = e::<i64>(Operad::J, f).differential();
        ar.record(augmentation(&de).unwrap() == 0, || format!("sgn(d{f:?}) ≠ 0"));
    }
    ar.record(augmentation(&e::<i64>(Operad::J, &OSMorphism::identity(n))).unwrap() == 1, || "sgn(id) ≠ 1".into());
    reports.push(ar);

    // 𝔧(n)₀ = im d ⊕ k[id], with im d = span{id − sgn(π)π}
    let mut sr = IdentityReport::new("𝔧(n)₀ = k[id − sgn(π)π] ⊕ k[id], first summand = im d", b.clone());
    if window >= 1 {
        let s = smith_form(&c.matrix(1)?);
        let nf = factorial(n as u64) as usize;
        sr.record(s.rank + 1 == nf, || format!("rank im d = {} ≠ n!−1", s.rank));
        sr.record(s.torsion().is_empty(), || "k[Σ_n]/im d has torsion".into());
    }
    reports.push(sr);

    let mut fr = IdentityReport::new("Σ_n acts freely on every basis", b);
    let perms: Vec<Perm> = Perm::all(n).into_iter().filter(|p| !p.is_identity()).collect();
    for d in 0..=window {
        for f in c.basis(d) {
            let fixed = perms.iter().find(|p| OSMorphism::from_perm(p.inverse()).compose(f).unwrap() == *f);
            fr.record(fixed.is_none(), || format!("{:?} fixes {f:?}", fixed.unwrap().images()));
        }
    }
    reports.push(fr);
    Ok(Certificate { arity: n, window, homology, reports })
}

/// Ranks of `𝔧(n)_d` for the given degrees (`C(d+n−1, n−1)·(d+n)!`).
pub fn basis_ranks(op: Operad, n: usize, degrees: std::ops::RangeInclusive<i64>) -> BTreeMap<i64, usize> {
    degrees.map(|d| (d, basis(op, n, d).len())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau() -> Perm {
        Perm::new(vec![2, 1]).unwrap()
    }

    /// `Ψ_* ∘ EZ` computed literally through the set-level `Ψ`.
    fn a_compose_reference(f: &OSMorphism, gs: &[OSMorphism]) -> LinComb<OSMorphism, i64> {
        let mut dims = vec![f.source() - 1];
        dims.extend(gs.iter().map(|g| g.source() - 1));
        let mut out = LinComb::zero();
        for sh in shuffles(&dims).iter() {
            let lift = |g: &OSMorphism, a: &OMap| g.compose(&OSMorphism::from_omap(a.clone())).unwrap();
            let big_g: Vec<OSMorphism> = gs.iter().zip(&sh.maps[1..]).map(|(g, a)| lift(g, a)).collect();
            let h = crate::joins::psi(&lift(f, &sh.maps[0]), &big_g);
            if h.is_surjective() {
                out.add_term(h, sh.sign);
            }
        }
        out
    }

    #[test]
    fn fast_composition_matches_reference() {
        let bounds = AxiomBounds { max_arity: 2, max_degree: 2, max_total_degree: 2 };
        let els = elements(Operad::A, &bounds);
        let mut count = 0;
        for x in &els {
            for ys in tuples(&els, x.target(), Operad::A, 2) {
                assert_eq!(a_compose::<i64>(x, &ys), a_compose_reference(x, &ys), "x={x:?} ys={ys:?}");
                count += 1;
            }
        }
        assert!(count > 100);
    }

    #[test]
    fn degree_zero_and_sizes() {
        // 𝔧(n)₀ = k[Σ_n]
        for n in 1..=3 {
            let b = basis(Operad::J, n, 0);
            assert_eq!(b.len(), factorial(n as u64) as usize);
            assert!(b.iter().all(|f| f.omap().images().iter().copied().eq(1..=n as u32)));
        }
        // 𝔧(0) = k in degree 0; 𝔞(0) = σ⁻¹k
        assert_eq!(basis(Operad::J, 0, 0).len(), 1);
        assert_eq!(basis(Operad::A, 0, -1).len(), 1);
        assert_eq!(basis(Operad::J, 0, 1).len(), 0);
        let sizes = [(2, 3, 480), (2, 4, 3600), (3, 2, 720), (3, 3, 7200), (1, 4, 120), (1, 5, 720)];
        for (n, d, size) in sizes {
            assert_eq!(basis(Operad::J, n, d).len(), size);
        }
    }

    #[test]
    fn differential_example() {
        // (1,2,1) with fibre order 1<3: d = −(id₂ + τ)
        let f = OSMorphism::natural(&crate::oscalc::SetMap::new(vec![1, 2, 1], 2).unwrap());
        let d = differential::<i64>(Operad::J, &f);
        let want: LinComb<OSMorphism, i64> =
            [(OSMorphism::identity(2), -1), (OSMorphism::from_perm(tau()), -1)].into_iter().collect();
        assert_eq!(d, want);
        // by hand: d^O = −d₁ + d₂ − d₃; d₂ is not surjective; d₁ = (2,1) = τ, d₃ = (1,2) = id
        let d1 = f.compose(&OSMorphism::from_omap(OMap::delta(1, 3))).unwrap();
        assert_eq!(d1.underlying().images(), &[2, 1]);
    }

    #[test]
    fn action_examples() {
        let id2 = e::<i64>(Operad::J, &OSMorphism::identity(2));
        let acted = id2.act(&tau());
        assert_eq!(acted.terms, LinComb::term(OSMorphism::from_perm(tau()), -1));
        assert_eq!(id2.act(&Perm::identity(2)), id2);
        // (x·π)·ρ = x·(πρ)
        for op in [Operad::A, Operad::J] {
            for n in 1..=3 {
                for d in op.bottom(n)..=op.bottom(n) + 2 {
                    for f in basis(op, n, d) {
                        let x = e::<i64>(op, &f);
                        for p in Perm::all(n) {
                            for q in Perm::all(n) {
                                assert_eq!(x.act(&p).act(&q), x.act(&p.compose(&q).unwrap()));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn augmentation_kills_boundaries() {
        for n in 2..=3 {
            for f in basis(Operad::J, n, 1) {
                let de = e::<i64>(Operad::J, &f).differential();
                assert_eq!(augmentation(&de).unwrap(), 0);
            }
        }
        assert!(augmentation(&e::<i64>(Operad::J, &basis(Operad::J, 2, 1)[0])).is_err());
        let c = complex::<i64>(Operad::J, 3, 1).unwrap();
        let s = smith_form(&c.matrix(1).unwrap());
        assert_eq!(s.rank, 5);
        assert!(s.torsion().is_empty());
    }

    #[test]
    fn units() {
        let u = OperadElement::<i64>::unit(Operad::J);
        for f in basis(Operad::J, 2, 1) {
            let x = e::<i64>(Operad::J, &f);
            assert_eq!(compose(&u, &[x.clone()]).unwrap(), x);
            let right = compose(&x, &[u.clone(), u.clone()]).unwrap();
            // composing with units forgets fibre orders
            assert_eq!(right.terms, LinComb::basis(f.naturalize()));
        }
        // nullary inputs are rejected
        let x = e::<i64>(Operad::A, &OSMorphism::identity(1));
        let z = e::<i64>(Operad::A, &OSMorphism::identity(0));
        assert!(matches!(compose(&x, &[z]), Err(OperadError::NullaryInput)));
    }

    #[test]
    fn block_permutations() {
        let p = block_permutation(&tau(), &[1, 2]);
        assert_eq!(p.images(), &[3, 1, 2]);
        let q = block_permutation(&Perm::identity(3), &[2, 1, 1]);
        assert!(q.is_identity());
    }

    #[test]
    fn degree_zero_is_permutation_operad() {
        let signs = degree_zero_signs(3).unwrap();
        // oracle: one injective shuffle path, whose word has cᵢ = kᵢ−1 letters
        // for the inner map hit at each outer stage, plus the Λ-twist
        for ((pi, rhos), sign) in &signs {
            let n = pi.len();
            let c: Vec<i64> = rhos.iter().map(|r| r.len() as i64 - 1).collect();
            let at = |r: usize| c[pi.apply(r as u32) as usize - 1];
            let mut e: i64 = (1..=n).map(|r| at(r) * (n - r) as i64).sum();
            for r in 1..=n {
                for s in r + 1..=n {
                    if pi.apply(r as u32) > pi.apply(s as u32) {
                        e += at(r) * at(s);
                    }
                    e += c[r - 1] * c[s - 1];
                }
                e += c[r - 1] * (r as i64 - 1);
            }
            assert_eq!(*sign, if e % 2 == 0 { 1 } else { -1 }, "π={:?} ρ={rhos:?}", pi.images());
        }
        let negative = signs.iter().filter(|(_, s)| *s < 0).count();
        println!("degree-0 sign table: {} entries, {negative} negative", signs.len());
        // frozen from the first computation of the table
        assert_eq!((signs.len(), negative), FROZEN_DEGREE_ZERO);
    }

    const FROZEN_DEGREE_ZERO: (usize, usize) = (4545, 1092);

    #[test]
    fn axioms_small() {
        let bounds = AxiomBounds { max_arity: 2, max_degree: 1, max_total_degree: 1 };
        for op in [Operad::A, Operad::J] {
            let reports = verify_operad_axioms(op, &bounds);
            for r in &reports {
                let expect_fail = r.identity.starts_with("γ(x; 1");
                assert_eq!(!r.passed(), expect_fail, "{r}");
            }
        }
    }

    #[test]
    fn certify_small() {
        let c = certify_einfinity(2, 3).unwrap();
        assert!(c.passed(), "{:?}", c.reports);
        let c = certify_einfinity(1, 3).unwrap();
        assert!(c.passed(), "{:?}", c.reports);
    }
}
