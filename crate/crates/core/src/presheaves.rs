//! Degreewise-finite presheaves on Δ, O and OΣ.
//!
//! A presheaf is an enumerate-and-act object: `simplices(k)` lists the
//! simplices of degree `k` (vertex count for O/OΣ, dimension for Δ) and
//! `act(x, m)` is the contravariant action of a morphism `m : k′ → k`.
//! Δ-morphisms `[d′] → [d]` are passed as O-morphisms `(d′+1)‾ → (d+1)‾`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::oscalc::{star_decompose, OMap, OSMorphism, Perm, SetMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresheafError {
    #[error("variance mismatch: {0:?} vs {1:?}")]
    VarianceMismatch(Variance, Variance),
    #[error("empty facet list")]
    NoFacets,
    #[error("empty facet")]
    EmptyFacet,
    #[error("unknown vertex {0}")]
    UnknownVertex(i64),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(i64),
}

impl From<PresheafError> for String {
    fn from(e: PresheafError) -> String {
        e.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Delta,
    O,
    OSigma,
}

/// Opaque simplex identifiers. Every presheaf picks one shape.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Simplex {
    /// A point in degree `k` of a constant presheaf, or an augmentation point.
    Point(u32),
    /// A weakly increasing vertex tuple of a simplicial complex (0-based indices).
    Verts(Vec<u32>),
    /// A morphism of a standard object.
    Mor(OSMorphism),
    /// `(x, π)` in a free symmetrisation `XΣ`.
    Sym(Box<Simplex>, Perm),
    /// Element of a product.
    Tuple(Vec<Simplex>),
    /// Element of a join: indexing map and parts.
    Join(SetMap, Vec<Simplex>),
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Simplex::Point(i) => write!(f, "*{i}"),
            Simplex::Verts(v) => write!(f, "{v:?}"),
            Simplex::Mor(m) => write!(f, "{m:?}"),
            Simplex::Sym(x, p) => write!(f, "({x:?},{:?})", p.images()),
            Simplex::Tuple(xs) => write!(f, "⟨{xs:?}⟩"),
            Simplex::Join(phi, xs) => write!(f, "J[{:?}]{xs:?}", phi.images()),
        }
    }
}

impl Simplex {
    pub fn as_mor(&self) -> Option<&OSMorphism> {
        match self {
            Simplex::Mor(m) => Some(m),
            _ => None,
        }
    }

    /// A vertex tuple with two equal adjacent entries.
    pub fn is_degenerate_tuple(&self) -> bool {
        match self {
            Simplex::Verts(v) => v.windows(2).any(|w| w[0] == w[1]),
            _ => false,
        }
    }
}

/// Memo table for per-degree enumerations; fills are idempotent.
#[derive(Default)]
pub struct DegreeCache {
    table: RwLock<HashMap<usize, Arc<Vec<Simplex>>>>,
}

impl DegreeCache {
    pub fn get_or<F: FnOnce() -> Vec<Simplex>>(&self, k: usize, fill: F) -> Arc<Vec<Simplex>> {
        if let Some(v) = self.table.read().unwrap().get(&k) {
            return v.clone();
        }
        let v = Arc::new(fill());
        self.table.write().unwrap().entry(k).or_insert(v).clone()
    }
}

pub trait Presheaf: Send + Sync {
    fn variance(&self) -> Variance;
    fn describe(&self) -> String;
    /// Uncached enumeration of degree `k`.
    fn enumerate(&self, k: usize) -> Vec<Simplex>;
    /// `x ∘ m` for `m : k′ → k` with `x` of degree `k`.
    fn act(&self, x: &Simplex, m: &OSMorphism) -> Simplex;
    fn cache(&self) -> &DegreeCache;

    fn simplices(&self, k: usize) -> Arc<Vec<Simplex>> {
        self.cache().get_or(k, || self.enumerate(k))
    }
}

pub type PresheafRef = Arc<dyn Presheaf>;

/// Morphism size for a given degree under a variance.
pub fn size_of_degree(v: Variance, k: usize) -> usize {
    match v {
        Variance::Delta => k + 1,
        _ => k,
    }
}

/// Face map `d_i` on a degree-`k` simplex (1-based `i` for O/OΣ, 0-based for Δ).
pub fn face(x: &dyn Presheaf, s: &Simplex, k: usize, i: usize) -> Simplex {
    let (idx, n) = match x.variance() {
        Variance::Delta => (i + 1, k + 1),
        _ => (i, k),
    };
    x.act(s, &OSMorphism::from_omap(OMap::delta(idx, n)))
}

/// Degeneracy `s_i` on a degree-`k` simplex (conventions as in [`face`]).
pub fn degeneracy(x: &dyn Presheaf, s: &Simplex, k: usize, i: usize) -> Simplex {
    let (idx, n) = match x.variance() {
        Variance::Delta => (i + 1, k + 1),
        _ => (i, k),
    };
    x.act(s, &OSMorphism::from_omap(OMap::sigma(idx, n)))
}

/// The morphisms acting between degrees `k′ → k` for a variance.
pub fn morphisms(v: Variance, kp: usize, k: usize) -> Vec<OSMorphism> {
    let (a, b) = (size_of_degree(v, kp), size_of_degree(v, k));
    match v {
        Variance::OSigma => OSMorphism::all(a, b),
        _ => OMap::all(a, b).into_iter().map(OSMorphism::from_omap).collect(),
    }
}

/// Exhaustive functoriality check up to `max_degree`. Returns the number of
/// instances checked, or the first failure.
pub fn check_functoriality(x: &dyn Presheaf, max_degree: usize) -> Result<usize, String> {
    let v = x.variance();
    let mut count = 0;
    for k in 0..=max_degree {
        for s in x.simplices(k).iter() {
            let id = OSMorphism::identity(size_of_degree(v, k));
            if &x.act(s, &id) != s {
                return Err(format!("identity fails on {s:?}"));
            }
            for kp in 0..=max_degree {
                for a in morphisms(v, kp, k) {
                    let sa = x.act(s, &a);
                    for kpp in 0..=max_degree {
                        for b in morphisms(v, kpp, kp) {
                            count += 1;
                            let lhs = x.act(&sa, &b);
                            let rhs = x.act(s, &a.compose(&b).unwrap());
                            if lhs != rhs {
                                return Err(format!("{s:?}∘{a:?}∘{b:?}: {lhs:?} ≠ {rhs:?}"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

// ---------------------------------------------------------------------------
// Standard objects

pub struct StandardObject {
    variance: Variance,
    n: usize,
    cache: DegreeCache,
}

/// `Δ_n`, `O_n` or `OΣ_n`.
pub fn standard_object(variance: Variance, n: usize) -> PresheafRef {
    Arc::new(StandardObject { variance, n, cache: DegreeCache::default() })
}

impl Presheaf for StandardObject {
    fn variance(&self) -> Variance {
        self.variance
    }
    fn describe(&self) -> String {
        let name = match self.variance {
            Variance::Delta => "Δ",
            Variance::O => "O",
            Variance::OSigma => "OΣ",
        };
        format!("{name}_{}", self.n)
    }
    fn enumerate(&self, k: usize) -> Vec<Simplex> {
        let target = size_of_degree(self.variance, self.n);
        let src = size_of_degree(self.variance, k);
        match self.variance {
            Variance::OSigma => OSMorphism::all(src, target).into_iter().map(Simplex::Mor).collect(),
            _ => OMap::all(src, target).into_iter().map(|f| Simplex::Mor(OSMorphism::from_omap(f))).collect(),
        }
    }
    fn act(&self, x: &Simplex, m: &OSMorphism) -> Simplex {
        let f = x.as_mor().expect("standard object simplex");
        Simplex::Mor(f.compose(m).expect("degree mismatch"))
    }
    fn cache(&self) -> &DegreeCache {
        &self.cache
    }
}

// ---------------------------------------------------------------------------
// Pairs

pub type SubPredicate = Arc<dyn Fn(&Simplex, usize) -> bool + Send + Sync>;

/// A presheaf with a sub-presheaf given by a membership predicate
/// `(simplex, degree) ↦ bool`.
#[derive(Clone)]
pub struct PresheafPair {
    pub total: PresheafRef,
    pub sub: SubPredicate,
}

impl PresheafPair {
    pub fn new(total: PresheafRef, sub: SubPredicate) -> Self {
        PresheafPair { total, sub }
    }

    /// `(X, X(0))`.
    pub fn augmentation_pair(total: PresheafRef) -> Self {
        PresheafPair { total, sub: Arc::new(|_, k| k == 0) }
    }

    /// `(X, ∅)`.
    pub fn absolute(total: PresheafRef) -> Self {
        PresheafPair { total, sub: Arc::new(|_, _| false) }
    }

    pub fn contains(&self, x: &Simplex, k: usize) -> bool {
        (self.sub)(x, k)
    }

    /// Simplices of degree `k` outside the sub-object.
    pub fn relative_simplices(&self, k: usize) -> Vec<Simplex> {
        self.total.simplices(k).iter().filter(|x| !self.contains(x, k)).cloned().collect()
    }

    /// Closure of the sub-object under all morphisms up to `max_degree`.
    pub fn check_closed(&self, max_degree: usize) -> Result<usize, String> {
        let v = self.total.variance();
        let mut count = 0;
        for k in 0..=max_degree {
            for s in self.total.simplices(k).iter().filter(|s| self.contains(s, k)) {
                for kp in 0..=max_degree {
                    for a in morphisms(v, kp, k) {
                        count += 1;
                        let t = self.total.act(s, &a);
                        if !self.contains(&t, kp) {
                            return Err(format!("{s:?}∘{a:?} leaves the sub-object"));
                        }
                    }
                }
            }
        }
        Ok(count)
    }
}

/// `(P_n, ∂P_n)`: the boundary consists of non-surjective morphisms.
pub fn boundary(variance: Variance, n: usize) -> PresheafPair {
    PresheafPair {
        total: standard_object(variance, n),
        sub: Arc::new(|x, _| !x.as_mor().expect("standard object simplex").is_surjective()),
    }
}

// ---------------------------------------------------------------------------
// (−)Σ

pub struct SigmaFree {
    inner: PresheafRef,
    cache: DegreeCache,
}

/// `XΣ` with `(XΣ)(n) = X(n) × Σ_n`.
pub fn sigma_free(x: PresheafRef) -> Result<PresheafRef, PresheafError> {
    if x.variance() != Variance::O {
        return Err(PresheafError::VarianceMismatch(x.variance(), Variance::O));
    }
    Ok(Arc::new(SigmaFree { inner: x, cache: DegreeCache::default() }))
}

impl SigmaFree {
    /// The symmetrisation action `(x,π)∘(g,σ) = (x∘π_*g, g^*π∘σ)`.
    pub fn act_on(inner: &dyn Presheaf, x: &Simplex, pi: &Perm, m: &OSMorphism) -> Simplex {
        let (g_star_pi, pi_star_g) = star_decompose(pi, m.omap()).expect("degree mismatch");
        let y = inner.act(x, &OSMorphism::from_omap(pi_star_g));
        Simplex::Sym(Box::new(y), g_star_pi.compose(m.perm()).expect("degree mismatch"))
    }
}

impl Presheaf for SigmaFree {
    fn variance(&self) -> Variance {
        Variance::OSigma
    }
    fn describe(&self) -> String {
        format!("({})Σ", self.inner.describe())
    }
    fn enumerate(&self, k: usize) -> Vec<Simplex> {
        let perms = Perm::all(k);
        let mut out = Vec::new();
        for x in self.inner.simplices(k).iter() {
            for p in &perms {
                out.push(Simplex::Sym(Box::new(x.clone()), p.clone()));
            }
        }
        out
    }
    fn act(&self, x: &Simplex, m: &OSMorphism) -> Simplex {
        match x {
            Simplex::Sym(y, pi) => Self::act_on(self.inner.as_ref(), y, pi, m),
            _ => panic!("not a symmetrised simplex: {x:?}"),
        }
    }
    fn cache(&self) -> &DegreeCache {
        &self.cache
    }
}

/// The unit `η_X : X → I(XΣ)`, `x ↦ (x, id)`.
pub fn eta(x: &Simplex, k: usize) -> Simplex {
    Simplex::Sym(Box::new(x.clone()), Perm::identity(k))
}

// ---------------------------------------------------------------------------
// Augmentations and forgetful functors

pub struct Augment {
    inner: PresheafRef,
    /// Number of augmentation points and the label of every positive-degree
    /// simplex (must be constant on connected components).
    labels: Option<(u32, Arc<dyn Fn(&Simplex) -> u32 + Send + Sync>)>,
    cache: DegreeCache,
}

/// The one-point augmentation `Y₊`.
pub fn augment(y: PresheafRef) -> Result<PresheafRef, PresheafError> {
    if y.variance() != Variance::Delta {
        return Err(PresheafError::VarianceMismatch(y.variance(), Variance::Delta));
    }
    Ok(Arc::new(Augment { inner: y, labels: None, cache: DegreeCache::default() }))
}

/// A two-point augmentation: the component of the first vertex listed goes
/// to `∗1`, every other component to `∗2`.
pub fn augment_two_point(y: PresheafRef) -> Result<PresheafRef, PresheafError> {
    if y.variance() != Variance::Delta {
        return Err(PresheafError::VarianceMismatch(y.variance(), Variance::Delta));
    }
    let comps = components(y.as_ref());
    let yy = y.clone();
    let label = move |s: &Simplex| {
        // first vertex of s, whatever its degree
        let v = first_vertex(yy.as_ref(), s);
        if comps.get(&v).copied().unwrap_or(0) == 0 {
            1
        } else {
            2
        }
    };
    Ok(Arc::new(Augment { inner: y, labels: Some((2, Arc::new(label))), cache: DegreeCache::default() }))
}

fn first_vertex(y: &dyn Presheaf, s: &Simplex) -> Simplex {
    // Act by the vertex map [0] → [d] picking 0; the target size is read off
    // by probing degrees (simplices carry no degree).
    for d in 0..64usize {
        if y.simplices(d).contains(s) {
            if d == 0 {
                return s.clone();
            }
            let m = OSMorphism::from_omap(OMap::new(vec![1], d + 1).unwrap());
            return y.act(s, &m);
        }
    }
    s.clone()
}

/// Connected-component index of every vertex of a simplicial presheaf.
fn components(y: &dyn Presheaf) -> HashMap<Simplex, usize> {
    let verts = y.simplices(0);
    let idx: HashMap<Simplex, usize> = verts.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for e in y.simplices(1).iter() {
        let a = face(y, e, 1, 0);
        let b = face(y, e, 1, 1);
        let (ra, rb) = (find(&mut parent, idx[&a]), find(&mut parent, idx[&b]));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut out = HashMap::new();
    for (v, &i) in &idx {
        let r = find(&mut parent, i);
        let c = match roots.iter().position(|&x| x == r) {
            Some(c) => c,
            None => {
                roots.push(r);
                roots.len() - 1
            }
        };
        out.insert(v.clone(), c);
    }
    // canonical numbering: component of vertex 0 is 0
    if let Some(v0) = verts.first() {
        let c0 = out[v0];
        for c in out.values_mut() {
            if *c == c0 {
                *c = 0;
            } else if *c == 0 {
                *c = c0;
            }
        }
    }
    out
}

impl Presheaf for Augment {
    fn variance(&self) -> Variance {
        Variance::O
    }
    fn describe(&self) -> String {
        match &self.labels {
            None => format!("({})₊", self.inner.describe()),
            Some((n, _)) => format!("({})₊[{n} points]", self.inner.describe()),
        }
    }
    fn enumerate(&self, k: usize) -> Vec<Simplex> {
        if k == 0 {
            let n = self.labels.as_ref().map_or(1, |(n, _)| *n);
            (1..=n).map(Simplex::Point).collect()
        } else {
            self.inner.simplices(k - 1).to_vec()
        }
    }
    fn act(&self, x: &Simplex, m: &OSMorphism) -> Simplex {
        if m.source() == 0 {
            return match (&self.labels, x) {
                (_, Simplex::Point(p)) => Simplex::Point(*p),
                (None, _) => Simplex::Point(1),
                (Some((_, label)), _) => Simplex::Point(label(x)),
            };
        }
        self.inner.act(x, m)
    }
    fn cache(&self) -> &DegreeCache {
        &self.cache
    }
}

pub struct ForgetU {
    inner: PresheafRef,
    cache: DegreeCache,
}

pub struct ForgetI {
    inner: PresheafRef,
    cache: DegreeCache,
}

/// `U` (O → Δ, drop the augmentation) or `I` (OΣ → O).
pub fn forget(x: PresheafRef) -> Result<PresheafRef, PresheafError> {
    match x.variance() {
        Variance::O => Ok(Arc::new(ForgetU { inner: x, cache: DegreeCache::default() })),
        Variance::OSigma => Ok(Arc::new(ForgetI { inner: x, cache: DegreeCache::default() })),
        Variance::Delta => Err(PresheafError::VarianceMismatch(Variance::Delta, Variance::O)),
    }
}

impl Presheaf for ForgetU {
    fn variance(&self) -> Variance {
        Variance::Delta
    }
    fn describe(&self) -> String {
        format!("U({})", self.inner.describe())
    }
    fn enumerate(&self, d: usize) -> Vec<Simplex> {
        self.inner.simplices(d + 1).to_vec()
    }
    fn act(&self, x: &Simplex, m: &OSMorphism) -> Simplex {
        self.inner.act(x, m)
    }
    fn cache(&self) -> &DegreeCache {
        &self.cache
    }
}

impl Presheaf for ForgetI {
    fn variance(&self) -> Variance {
        Variance::O
    }
    fn describe(&self) -> String {
        format!("I({})", self.inner.describe())
    }
    fn enumerate(&self, k: usize) -> Vec<Simplex> {
        self.inner.simplices(k).to_vec()
    }
    fn act(&self, x: &Simplex, m: &OSMorphism) -> Simplex {
        debug_assert!(m.perm().is_identity(), "I only admits O-morphisms");
        self.inner.act(x, m)
    }
    fn cache(&self) -> &DegreeCache {
        &self.cache
    }
}

// ---------------------------------------------------------------------------
// Products and constants

pub struct Terminal {
    variance: Variance,
    cache: DegreeCache,
}

pub fn terminal(variance: Variance) -> PresheafRef {
    Arc::new(Terminal { variance, cache: DegreeCache::default() })
}

impl Presheaf for Terminal {
    fn variance(&self) -> Variance {
        self.variance
    }
    fn describe(&self) -> String {
        "∗".into()
    }
    fn enumerate(&self, k: usize) -> Vec<Simplex> {
        vec![Simplex::Point(k as u32)]
    }
    fn act(&self, _x: &Simplex, m: &OSMorphism) -> Simplex {
        let k = match self.variance {
            Variance::Delta => m.source() - 1,
            _ => m.source(),
        };
        Simplex::Point(k as u32)
    }
    fn cache(&self) -> &DegreeCache {
        &self.cache
    }
}

pub struct Product {
    factors: Vec<PresheafRef>,
    variance: Variance,
    cache: DegreeCache,
}

/// Degreewise cartesian product with the diagonal action.
pub fn product(factors: Vec<PresheafRef>) -> Result<PresheafRef, PresheafError> {
    let variance = factors.first().map_or(Variance::O, |f| f.variance());
    for f in &factors {
        if f.variance() != variance {
            return Err(PresheafError::VarianceMismatch(variance, f.variance()));
        }
    }
    Ok(Arc::new(Product { factors, variance, cache: DegreeCache::default() }))
}

impl Presheaf for Product {
    fn variance(&self) -> Variance {
        self.variance
    }
    fn describe(&self) -> String {
        self.factors.iter().map(|f| f.describe()).collect::<Vec<_>>().join("×")
    }
    fn enumerate(&self, k: usize) -> Vec<Simplex> {
        let mut acc: Vec<Vec<Simplex>> = vec![vec![]];
        for f in &self.factors {
            let s = f.simplices(k);
            let mut next = Vec::with_capacity(acc.len() * s.len());
            for a in &acc {
                for x in s.iter() {
                    let mut t = a.clone();
                    t.push(x.clone());
                    next.push(t);
                }
            }
            acc = next;
        }
        acc.into_iter().map(Simplex::Tuple).collect()
    }
    fn act(&self, x: &Simplex, m: &OSMorphism) -> Simplex {
        match x {
            Simplex::Tuple(xs) => {
                Simplex::Tuple(xs.iter().zip(&self.factors).map(|(x, f)| f.act(x, m)).collect())
            }
            _ => panic!("not a product simplex: {x:?}"),
        }
    }
    fn cache(&self) -> &DegreeCache {
        &self.cache
    }
}

// ---------------------------------------------------------------------------
// Ordered simplicial complexes

/// The simplicial set of an ordered simplicial complex: degree-`d` simplices
/// are weakly increasing `(d+1)`-tuples of vertex indices supported on a face.
pub struct ComplexSet {
    name: String,
    vertices: Vec<i64>,
    facets: Vec<Vec<u32>>,
    cache: DegreeCache,
}

/// Build the simplicial set of a complex given by facets over an ordered
/// vertex list.
pub fn from_facets(vertices: &[i64], facets: &[Vec<i64>]) -> Result<Arc<ComplexSet>, PresheafError> {
    from_facets_named("complex", vertices, facets)
}

pub fn from_facets_named(name: &str, vertices: &[i64], facets: &[Vec<i64>]) -> Result<Arc<ComplexSet>, PresheafError> {
    if facets.is_empty() {
        return Err(PresheafError::NoFacets);
    }
    let mut seen = BTreeSet::new();
    for &v in vertices {
        if !seen.insert(v) {
            return Err(PresheafError::DuplicateVertex(v));
        }
    }
    let mut fs = Vec::new();
    for f in facets {
        if f.is_empty() {
            return Err(PresheafError::EmptyFacet);
        }
        let mut idx = Vec::new();
        for v in f {
            let i = vertices.iter().position(|w| w == v).ok_or(PresheafError::UnknownVertex(*v))?;
            idx.push(i as u32);
        }
        idx.sort_unstable();
        idx.dedup();
        fs.push(idx);
    }
    Ok(Arc::new(ComplexSet { name: name.to_string(), vertices: vertices.to_vec(), facets: fs, cache: DegreeCache::default() }))
}

impl ComplexSet {
    pub fn vertices(&self) -> &[i64] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<u32>] {
        &self.facets
    }

    pub fn dimension(&self) -> usize {
        self.facets.iter().map(|f| f.len() - 1).max().unwrap_or(0)
    }

    /// Nondegenerate simplices of dimension `d` (strictly increasing tuples).
    pub fn nondegenerate(&self, d: usize) -> Vec<Simplex> {
        self.simplices(d).iter().filter(|s| !s.is_degenerate_tuple()).cloned().collect()
    }

    /// Render a simplex with the original vertex labels.
    pub fn label(&self, s: &Simplex) -> Vec<i64> {
        match s {
            Simplex::Verts(v) => v.iter().map(|&i| self.vertices[i as usize]).collect(),
            _ => vec![],
        }
    }
}

impl Presheaf for ComplexSet {
    fn variance(&self) -> Variance {
        Variance::Delta
    }
    fn describe(&self) -> String {
        self.name.clone()
    }
    fn enumerate(&self, d: usize) -> Vec<Simplex> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            for t in OMap::all(d + 1, f.len()) {
                out.insert(t.images().iter().map(|&i| f[i as usize - 1]).collect::<Vec<u32>>());
            }
        }
        out.into_iter().map(Simplex::Verts).collect()
    }
    fn act(&self, x: &Simplex, m: &OSMorphism) -> Simplex {
        match x {
            Simplex::Verts(v) => {
                debug_assert!(m.perm().is_identity());
                Simplex::Verts(m.omap().images().iter().map(|&i| v[i as usize - 1]).collect())
            }
            _ => panic!("not a vertex tuple: {x:?}"),
        }
    }
    fn cache(&self) -> &DegreeCache {
        &self.cache
    }
}

/// Fixture complexes used throughout the tests and the CLI.
pub mod fixtures {
    use super::*;

    pub fn simplex(n: usize) -> Arc<ComplexSet> {
        let v: Vec<i64> = (0..=n as i64).collect();
        from_facets_named(&format!("Δ{n}"), &v, &[v.clone()]).unwrap()
    }

    pub fn boundary_simplex(n: usize) -> Arc<ComplexSet> {
        let v: Vec<i64> = (0..=n as i64).collect();
        let facets: Vec<Vec<i64>> =
            (0..=n as i64).map(|skip| v.iter().copied().filter(|&x| x != skip).collect()).collect();
        from_facets_named(&format!("∂Δ{n}"), &v, &facets).unwrap()
    }

    /// The circle as the boundary of a triangle.
    pub fn circle() -> Arc<ComplexSet> {
        from_facets_named("S1", &[0, 1, 2], &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    /// The six-vertex, ten-triangle triangulation of the real projective plane.
    pub fn rp2() -> Arc<ComplexSet> {
        let facets = vec![
            vec![1, 2, 3],
            vec![1, 3, 4],
            vec![1, 4, 5],
            vec![1, 5, 6],
            vec![1, 2, 6],
            vec![2, 3, 5],
            vec![3, 4, 6],
            vec![2, 4, 5],
            vec![3, 5, 6],
            vec![2, 4, 6],
        ];
        from_facets_named("RP2", &[1, 2, 3, 4, 5, 6], &facets).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_counts() {
        assert_eq!(standard_object(Variance::OSigma, 1).simplices(2).len(), 2);
        assert_eq!(standard_object(Variance::OSigma, 2).simplices(2).len(), 6);
        for n in 0..4 {
            assert_eq!(standard_object(Variance::OSigma, n).simplices(0).len(), 1);
        }
    }

    #[test]
    fn boundary_counts() {
        for n in 1..=4 {
            let p = boundary(Variance::OSigma, n);
            for k in 0..n {
                assert!(p.relative_simplices(k).is_empty());
            }
            assert_eq!(p.relative_simplices(n).len() as u64, crate::oscalc::factorial(n as u64));
        }
        let x = Simplex::Mor(OSMorphism::from_omap(OMap::new(vec![1, 1], 2).unwrap()));
        assert!(boundary(Variance::OSigma, 2).contains(&x, 2));
        assert!(boundary(Variance::OSigma, 3).check_closed(3).is_ok());
    }

    #[test]
    fn functoriality_of_fixtures() {
        assert!(check_functoriality(standard_object(Variance::OSigma, 2).as_ref(), 3).is_ok());
        assert!(check_functoriality(standard_object(Variance::O, 2).as_ref(), 4).is_ok());
        let d1 = fixtures::simplex(1);
        let s = sigma_free(augment(d1.clone()).unwrap()).unwrap();
        assert!(check_functoriality(s.as_ref(), 3).is_ok());
        assert!(check_functoriality(d1.as_ref(), 3).is_ok());
    }

    #[test]
    fn face_formula_in_sigma_free() {
        // d_1(x, π) = (d_{π(1)} x, d_1 π) with π = (2,1)
        let o2 = standard_object(Variance::O, 2);
        let s = sigma_free(o2.clone()).unwrap();
        let tau = Perm::new(vec![2, 1]).unwrap();
        for x in o2.simplices(2).iter() {
            let lhs = face(s.as_ref(), &Simplex::Sym(Box::new(x.clone()), tau.clone()), 2, 1);
            let rhs = Simplex::Sym(Box::new(face(o2.as_ref(), x, 2, 2)), Perm::identity(1));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn sigma_free_of_standard_is_standard() {
        let o2 = standard_object(Variance::O, 2);
        let s = sigma_free(o2).unwrap();
        let os2 = standard_object(Variance::OSigma, 2);
        let to_mor = |x: &Simplex| match x {
            Simplex::Sym(y, p) => Simplex::Mor(OSMorphism::new(y.as_mor().unwrap().omap().clone(), p.clone()).unwrap()),
            _ => unreachable!(),
        };
        for k in 0..=3 {
            let a: BTreeSet<Simplex> = s.simplices(k).iter().map(to_mor).collect();
            let b: BTreeSet<Simplex> = os2.simplices(k).iter().cloned().collect();
            assert_eq!(a, b);
            for x in s.simplices(k).iter() {
                for kp in 0..=3 {
                    for m in morphisms(Variance::OSigma, kp, k) {
                        assert_eq!(to_mor(&s.act(x, &m)), os2.act(&to_mor(x), &m));
                    }
                }
            }
        }
    }

    #[test]
    fn augment_and_forget() {
        let d2 = standard_object(Variance::Delta, 2);
        let a = augment(d2.clone()).unwrap();
        assert_eq!(a.simplices(0).len(), 1);
        let o3 = standard_object(Variance::O, 3);
        for k in 0..=4 {
            assert_eq!(a.simplices(k).len(), o3.simplices(k).len());
        }
        let u = forget(a).unwrap();
        for d in 0..=3 {
            assert_eq!(*u.simplices(d), *d2.simplices(d));
        }
        let i = forget(standard_object(Variance::OSigma, 2)).unwrap();
        assert_eq!(i.variance(), Variance::O);
        let x = sigma_free(augment(fixtures::circle()).unwrap()).unwrap();
        let ux = forget(forget(x).unwrap()).unwrap();
        assert_eq!(ux.simplices(1).len(), 6 * 2);
    }

    #[test]
    fn eta_commutes_with_faces() {
        let x = augment(fixtures::simplex(2)).unwrap();
        let xs = sigma_free(x.clone()).unwrap();
        for k in 1..=3 {
            for s in x.simplices(k).iter() {
                for i in 1..=k {
                    assert_eq!(face(xs.as_ref(), &eta(s, k), k, i), eta(&face(x.as_ref(), s, k, i), k - 1));
                }
            }
        }
    }

    #[test]
    fn product_counts() {
        let a = standard_object(Variance::O, 2);
        let b = standard_object(Variance::O, 1);
        let p = product(vec![a.clone(), b.clone()]).unwrap();
        for k in 0..=3 {
            assert_eq!(p.simplices(k).len(), a.simplices(k).len() * b.simplices(k).len());
        }
        assert!(check_functoriality(p.as_ref(), 3).is_ok());
        let t = product(vec![a.clone(), terminal(Variance::O)]).unwrap();
        assert_eq!(t.simplices(3).len(), a.simplices(3).len());
        assert!(product(vec![a, standard_object(Variance::OSigma, 1)]).is_err());
    }

    #[test]
    fn complex_counts() {
        let d2 = fixtures::simplex(2);
        assert_eq!(d2.nondegenerate(1).len(), 3);
        // weakly increasing tuples on a 3-set: C(3+d, d+1)
        for d in 0..4 {
            assert_eq!(d2.simplices(d).len() as u64, crate::oscalc::binomial(3 + d as u64, d as u64 + 1));
        }
        let rp2 = fixtures::rp2();
        assert_eq!(rp2.nondegenerate(0).len(), 6);
        assert_eq!(rp2.nondegenerate(1).len(), 15);
        assert_eq!(rp2.nondegenerate(2).len(), 10);
        assert!(from_facets(&[1, 2], &[]).is_err());
        assert!(matches!(from_facets(&[1, 2], &[vec![1, 3]]), Err(PresheafError::UnknownVertex(3))));
    }

    /// Independent recount of weakly increasing tuples supported on faces.
    #[test]
    fn complex_recount() {
        let x = fixtures::boundary_simplex(3);
        for d in 0..=4usize {
            let mut count = 0;
            for t in OMap::all(d + 1, 4) {
                let support: BTreeSet<u32> = t.images().iter().copied().collect();
                if support.len() <= 3 {
                    count += 1;
                }
            }
            assert_eq!(x.simplices(d).len(), count);
        }
    }

    #[test]
    fn two_point_augmentation() {
        let a = augment_two_point(fixtures::circle()).unwrap();
        assert_eq!(a.simplices(0).len(), 2);
        assert!(check_functoriality(a.as_ref(), 3).is_ok());
    }
}
