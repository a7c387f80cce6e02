//! Morphisms of the categories Set, O and OΣ on the objects n̄ = {1,…,n}.
//!
//! An OΣ-morphism is a set map with a total order on every fibre. It is stored
//! in the normal form `(omap, perm)` with underlying map `omap ∘ perm`; the
//! fibre over `j` is ordered by the values of `perm`, i.e. it reads
//! `perm⁻¹(p)` for `p ∈ omap⁻¹(j)` in increasing order.
//!
//! All indices are 1-based. Empty morphisms `0̄ → n̄` are ordinary values.

use std::fmt;
use std::hash::Hash;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OsError {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("value {value} out of range 1..={bound}")]
    OutOfRange { value: u32, bound: usize },
    #[error("not a permutation: {0:?}")]
    NotBijection(Vec<u32>),
    #[error("not order-preserving: {0:?}")]
    NotMonotone(Vec<u32>),
    #[error("subset is not strictly increasing: {0:?}")]
    BadSubset(Vec<u32>),
    #[error("morphism does not land in the given subset")]
    NotInSubset,
    #[error("block data mismatch: {0}")]
    BlockMismatch(String),
    #[error("cannot parse morphism: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, OsError>;

fn check_range(images: &[u32], bound: usize) -> Result<()> {
    for &v in images {
        if v == 0 || v as usize > bound {
            return Err(OsError::OutOfRange { value: v, bound });
        }
    }
    Ok(())
}

fn check_subset(subset: &[u32], m: usize) -> Result<()> {
    check_range(subset, m)?;
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return Err(OsError::BadSubset(subset.to_vec()));
    }
    Ok(())
}

/// Advance `v` to the next lexicographic tuple with entries in `1..=n`
/// subject to `monotone`. Returns false when exhausted.
fn next_tuple(v: &mut [u32], n: u32, monotone: bool) -> bool {
    let k = v.len();
    for i in (0..k).rev() {
        if v[i] < n {
            v[i] += 1;
            let fill = if monotone { v[i] } else { 1 };
            for x in v.iter_mut().skip(i + 1) {
                *x = fill;
            }
            return true;
        }
    }
    false
}

fn all_tuples(k: usize, n: usize, monotone: bool) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut v = vec![1u32; k];
    loop {
        out.push(v.clone());
        if !next_tuple(&mut v, n as u32, monotone) {
            break;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Perm

/// A permutation of n̄ in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        check_range(&images, n)?;
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if seen[v as usize] {
                return Err(OsError::NotBijection(images));
            }
            seen[v as usize] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm { images: (1..=n as u32).collect() }
    }

    /// The adjacent transposition exchanging `i` and `i+1`.
    pub fn transposition(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i - 1, i);
        p
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Perm { images: inv }
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.len() != other.len() {
            return Err(OsError::SizeMismatch { expected: self.len(), found: other.len() });
        }
        Ok(Perm { images: other.images.iter().map(|&i| self.apply(i)).collect() })
    }

    pub fn inversions(&self) -> usize {
        let v = &self.images;
        let mut c = 0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] > v[j] {
                    c += 1;
                }
            }
        }
        c
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i64 {
        if self.inversions() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `d_i π`: erase position `i` and reindex.
    pub fn delete(&self, i: usize) -> Perm {
        let removed = self.images[i - 1];
        let images = self
            .images
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i - 1)
            .map(|(_, &v)| if v > removed { v - 1 } else { v })
            .collect();
        Perm { images }
    }

    /// Block sum `π₁ ⊕ … ⊕ π_r` acting on consecutive blocks.
    pub fn direct_sum(parts: &[Perm]) -> Perm {
        let mut images = Vec::new();
        let mut off = 0u32;
        for p in parts {
            images.extend(p.images.iter().map(|&v| v + off));
            off += p.len() as u32;
        }
        Perm { images }
    }

    /// All permutations of n̄ in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut v: Vec<u32> = (1..=n as u32).collect();
        loop {
            out.push(Perm { images: v.clone() });
            // next_permutation
            let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
                break;
            };
            let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
            v.swap(i - 1, j);
            v[i..].reverse();
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

// ---------------------------------------------------------------------------
// SetMap

/// A set map k̄ → n̄.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetMap {
    images: Vec<u32>,
    target: usize,
}

impl SetMap {
    pub fn new(images: Vec<u32>, target: usize) -> Result<Self> {
        check_range(&images, target)?;
        Ok(SetMap { images, target })
    }

    pub fn identity(n: usize) -> Self {
        SetMap { images: (1..=n as u32).collect(), target: n }
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn source(&self) -> usize {
        self.images.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize - 1]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SetMap) -> Result<SetMap> {
        if other.target != self.source() {
            return Err(OsError::SizeMismatch { expected: self.source(), found: other.target });
        }
        Ok(SetMap { images: other.images.iter().map(|&i| self.apply(i)).collect(), target: self.target })
    }

    /// Sorted preimage of a subset.
    pub fn preimage(&self, subset: &[u32]) -> Vec<u32> {
        (1..=self.source() as u32).filter(|&x| subset.contains(&self.apply(x))).collect()
    }

    /// Sorted fibre over `j`.
    pub fn fiber(&self, j: u32) -> Vec<u32> {
        (1..=self.source() as u32).filter(|&x| self.apply(x) == j).collect()
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.target];
        for &v in &self.images {
            sizes[v as usize - 1] += 1;
        }
        sizes
    }

    pub fn is_surjective(&self) -> bool {
        self.fiber_sizes().iter().all(|&s| s > 0)
    }

    pub fn is_injective(&self) -> bool {
        self.fiber_sizes().iter().all(|&s| s <= 1)
    }

    pub fn is_monotone(&self) -> bool {
        self.images.windows(2).all(|w| w[0] <= w[1])
    }

    /// Nondegenerate in the surjection-operad sense: surjective with no two
    /// equal adjacent values.
    pub fn is_nondegenerate(&self) -> bool {
        self.is_surjective() && self.images.windows(2).all(|w| w[0] != w[1])
    }

    pub fn all(k: usize, n: usize) -> Vec<SetMap> {
        all_tuples(k, n, false).into_iter().map(|images| SetMap { images, target: n }).collect()
    }

    pub fn all_surjective(k: usize, n: usize) -> Vec<SetMap> {
        Self::all(k, n).into_iter().filter(|f| f.is_surjective()).collect()
    }
}

impl fmt::Debug for SetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Set{:?}→{}", self.images, self.target)
    }
}

// ---------------------------------------------------------------------------
// OMap

/// An order-preserving map k̄ → n̄.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OMap {
    images: Vec<u32>,
    target: usize,
}

impl OMap {
    pub fn new(images: Vec<u32>, target: usize) -> Result<Self> {
        check_range(&images, target)?;
        if images.windows(2).any(|w| w[0] > w[1]) {
            return Err(OsError::NotMonotone(images));
        }
        Ok(OMap { images, target })
    }

    pub fn identity(n: usize) -> Self {
        OMap { images: (1..=n as u32).collect(), target: n }
    }

    /// The order-preserving map with the given fibre sizes.
    pub fn from_fiber_sizes(sizes: &[usize]) -> Self {
        let mut images = Vec::new();
        for (j, &s) in sizes.iter().enumerate() {
            images.extend(std::iter::repeat(j as u32 + 1).take(s));
        }
        OMap { images, target: sizes.len() }
    }

    /// Coface `δ_i : (n−1)‾ → n̄` missing `i`.
    pub fn delta(i: usize, n: usize) -> Self {
        assert!(1 <= i && i <= n);
        OMap { images: (1..=n as u32).filter(|&v| v as usize != i).collect(), target: n }
    }

    /// Codegeneracy `σ_i : (n+1)‾ → n̄` hitting `i` twice.
    pub fn sigma(i: usize, n: usize) -> Self {
        assert!(1 <= i && i <= n);
        let images = (1..=n as u32 + 1).map(|v| if v as usize > i { v - 1 } else { v }).collect();
        OMap { images, target: n }
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn source(&self) -> usize {
        self.images.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize - 1]
    }

    pub fn as_set_map(&self) -> SetMap {
        SetMap { images: self.images.clone(), target: self.target }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OMap) -> Result<OMap> {
        if other.target != self.source() {
            return Err(OsError::SizeMismatch { expected: self.source(), found: other.target });
        }
        Ok(OMap { images: other.images.iter().map(|&i| self.apply(i)).collect(), target: self.target })
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        self.as_set_map().fiber_sizes()
    }

    pub fn is_surjective(&self) -> bool {
        self.as_set_map().is_surjective()
    }

    pub fn all(k: usize, n: usize) -> Vec<OMap> {
        all_tuples(k, n, true).into_iter().map(|images| OMap { images, target: n }).collect()
    }

    pub fn all_surjective(k: usize, n: usize) -> Vec<OMap> {
        Self::all(k, n).into_iter().filter(|f| f.is_surjective()).collect()
    }
}

impl fmt::Debug for OMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O{:?}→{}", self.images, self.target)
    }
}

// ---------------------------------------------------------------------------
// Decompositions

/// Unique factorisation `u = g ∘ π` with `g` order-preserving and `π`
/// order-preserving on each fibre of `u` (natural fibre orders).
pub fn canonical_decompose(u: &SetMap) -> (OMap, Perm) {
    let k = u.source();
    let mut order: Vec<u32> = (1..=k as u32).collect();
    order.sort_by_key(|&x| (u.apply(x), x));
    let mut rho = vec![0u32; k];
    for (rank, &x) in order.iter().enumerate() {
        rho[x as usize - 1] = rank as u32 + 1;
    }
    let mut g = u.images.clone();
    g.sort_unstable();
    (OMap { images: g, target: u.target }, Perm { images: rho })
}

/// For `π ∈ Σ_n` and `g ∈ O(k̄,n̄)`, the unique pair `(g^*π, π_*g)` with
/// `π∘g = (π_*g)∘(g^*π)` and `g^*π` order-preserving on the fibres of `g`.
pub fn star_decompose(pi: &Perm, g: &OMap) -> Result<(Perm, OMap)> {
    if pi.len() != g.target() {
        return Err(OsError::SizeMismatch { expected: pi.len(), found: g.target() });
    }
    let u = SetMap { images: g.images.iter().map(|&x| pi.apply(x)).collect(), target: g.target };
    let (h, rho) = canonical_decompose(&u);
    Ok((rho, h))
}

// ---------------------------------------------------------------------------
// OSMorphism

/// A morphism of OΣ in normal form `(omap, perm)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OSMorphism {
    omap: OMap,
    perm: Perm,
}

impl OSMorphism {
    pub fn new(omap: OMap, perm: Perm) -> Result<Self> {
        if omap.source() != perm.len() {
            return Err(OsError::SizeMismatch { expected: omap.source(), found: perm.len() });
        }
        Ok(OSMorphism { omap, perm })
    }

    pub fn from_omap(omap: OMap) -> Self {
        let perm = Perm::identity(omap.source());
        OSMorphism { omap, perm }
    }

    pub fn from_perm(perm: Perm) -> Self {
        OSMorphism { omap: OMap::identity(perm.len()), perm }
    }

    /// The set map `u` with natural fibre orders.
    pub fn natural(u: &SetMap) -> Self {
        let (omap, perm) = canonical_decompose(u);
        OSMorphism { omap, perm }
    }

    /// Build from explicitly ordered fibres (one list per target element).
    pub fn from_fibers(source: usize, fibers: &[Vec<u32>]) -> Result<Self> {
        let sizes: Vec<usize> = fibers.iter().map(Vec::len).collect();
        let total: usize = sizes.iter().sum();
        if total != source {
            return Err(OsError::SizeMismatch { expected: source, found: total });
        }
        let inv: Vec<u32> = fibers.iter().flatten().copied().collect();
        let perm = Perm::new(inv)?.inverse();
        Ok(OSMorphism { omap: OMap::from_fiber_sizes(&sizes), perm })
    }

    pub fn identity(n: usize) -> Self {
        OSMorphism { omap: OMap::identity(n), perm: Perm::identity(n) }
    }

    pub fn omap(&self) -> &OMap {
        &self.omap
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn source(&self) -> usize {
        self.perm.len()
    }

    pub fn target(&self) -> usize {
        self.omap.target()
    }

    pub fn underlying(&self) -> SetMap {
        SetMap {
            images: self.perm.images.iter().map(|&p| self.omap.apply(p)).collect(),
            target: self.omap.target,
        }
    }

    /// Ordered fibres, one per target element.
    pub fn fibers(&self) -> Vec<Vec<u32>> {
        let inv = self.perm.inverse();
        let mut out = vec![Vec::new(); self.target()];
        for p in 1..=self.source() as u32 {
            out[self.omap.apply(p) as usize - 1].push(inv.apply(p));
        }
        out
    }

    pub fn is_surjective(&self) -> bool {
        self.omap.is_surjective()
    }

    /// True when every fibre carries the natural order of the source.
    pub fn is_natural(&self) -> bool {
        self.fibers().iter().all(|f| f.windows(2).all(|w| w[0] < w[1]))
    }

    /// The morphism with the same underlying map and natural fibre orders.
    pub fn naturalize(&self) -> Self {
        Self::natural(&self.underlying())
    }

    /// Composition `self ∘ other` by `(f,π)∘(g,σ) = (f∘π_*g, g^*π∘σ)`.
    pub fn compose(&self, other: &OSMorphism) -> Result<OSMorphism> {
        if other.target() != self.source() {
            return Err(OsError::SizeMismatch { expected: self.source(), found: other.target() });
        }
        let (g_star_pi, pi_star_g) = star_decompose(&self.perm, &other.omap)?;
        Ok(OSMorphism { omap: self.omap.compose(&pi_star_g)?, perm: g_star_pi.compose(&other.perm)? })
    }

    /// Post-composition with a permutation of the target: `σ ∘ self`.
    pub fn left_perm(&self, sigma: &Perm) -> Result<OSMorphism> {
        OSMorphism::from_perm(sigma.clone()).compose(self)
    }

    /// Text form `u=[…] ; pi=[…]`.
    pub fn render(&self) -> String {
        format!("u={:?} ; pi={:?}", self.underlying().images, self.perm.images)
            .replace(' ', "")
            .replace(";", " ; ")
    }

    /// Inverse of [`render`](Self::render). The target size is needed because
    /// `u` alone does not determine it.
    pub fn parse(text: &str, target: usize) -> Result<Self> {
        let err = || OsError::Parse(text.to_string());
        let (a, b) = text.split_once(';').ok_or_else(err)?;
        let list = |s: &str, key: &str| -> Result<Vec<u32>> {
            let s = s.trim().strip_prefix(key).ok_or_else(err)?.trim();
            let s = s.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(err)?;
            if s.trim().is_empty() {
                return Ok(vec![]);
            }
            s.split(',').map(|t| t.trim().parse::<u32>().map_err(|_| err())).collect()
        };
        let u = SetMap::new(list(a, "u=")?, target)?;
        let perm = Perm::new(list(b, "pi=")?)?;
        if perm.len() != u.source() {
            return Err(OsError::SizeMismatch { expected: u.source(), found: perm.len() });
        }
        // omap is forced: it is the sorted image list.
        let mut g = u.images.clone();
        g.sort_unstable();
        let omap = OMap::new(g, target)?;
        let x = OSMorphism { omap, perm };
        if x.underlying() != u {
            return Err(OsError::Parse(format!("{text}: perm incompatible with u")));
        }
        Ok(x)
    }

    pub fn all(k: usize, n: usize) -> Vec<OSMorphism> {
        let perms = Perm::all(k);
        let mut out = Vec::new();
        for omap in OMap::all(k, n) {
            for p in &perms {
                out.push(OSMorphism { omap: omap.clone(), perm: p.clone() });
            }
        }
        out
    }

    pub fn all_surjective(k: usize, n: usize) -> Vec<OSMorphism> {
        let perms = Perm::all(k);
        let mut out = Vec::new();
        for omap in OMap::all_surjective(k, n) {
            for p in &perms {
                out.push(OSMorphism { omap: omap.clone(), perm: p.clone() });
            }
        }
        out
    }
}

impl fmt::Debug for OSMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OΣ({:?}→{};{:?})", self.underlying().images, self.target(), self.perm.images)
    }
}

impl fmt::Display for OSMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// ---------------------------------------------------------------------------
// Uniform interface over Set, O, OΣ

/// Operations shared by the three concrete categories.
pub trait Morphism: Clone + Eq + Hash + fmt::Debug + Send + Sync + 'static {
    const CATEGORY: &'static str;

    fn source(&self) -> usize;
    fn target(&self) -> usize;
    fn identity(n: usize) -> Self;
    /// `self ∘ other`.
    fn compose(&self, other: &Self) -> Result<Self>;
    /// `i_I : |I|‾ → m̄`, the order-preserving injection with image `I`.
    fn inclusion(subset: &[u32], m: usize) -> Result<Self>;
    fn underlying(&self) -> SetMap;
    /// Restrict the target to a subset containing the image, relabelling
    /// `I ≅ |I|‾` order-preservingly.
    fn corestrict(&self, subset: &[u32]) -> Result<Self>;
    /// Block assembly `f⟨g₁,…,gₙ⟩`; only the blocks of `f` are used.
    fn assemble(blocks: &SetMap, gs: &[Self]) -> Result<Self>;
    fn enumerate(k: usize, n: usize) -> Vec<Self>;
}

fn relabel(images: &[u32], subset: &[u32]) -> Result<Vec<u32>> {
    images
        .iter()
        .map(|v| subset.iter().position(|s| s == v).map(|p| p as u32 + 1).ok_or(OsError::NotInSubset))
        .collect()
}

impl Morphism for SetMap {
    const CATEGORY: &'static str = "Set";
    fn source(&self) -> usize {
        SetMap::source(self)
    }
    fn target(&self) -> usize {
        self.target
    }
    fn identity(n: usize) -> Self {
        SetMap::identity(n)
    }
    fn compose(&self, other: &Self) -> Result<Self> {
        SetMap::compose(self, other)
    }
    fn inclusion(subset: &[u32], m: usize) -> Result<Self> {
        check_subset(subset, m)?;
        Ok(SetMap { images: subset.to_vec(), target: m })
    }
    fn underlying(&self) -> SetMap {
        self.clone()
    }
    fn corestrict(&self, subset: &[u32]) -> Result<Self> {
        check_subset(subset, self.target)?;
        Ok(SetMap { images: relabel(&self.images, subset)?, target: subset.len() })
    }
    fn assemble(blocks: &SetMap, gs: &[Self]) -> Result<Self> {
        let n = blocks.target();
        if gs.len() != n {
            return Err(OsError::BlockMismatch(format!("{} blocks, {} morphisms", n, gs.len())));
        }
        let sizes = blocks.fiber_sizes();
        let mut offsets = Vec::with_capacity(n);
        let mut total = 0;
        for (i, g) in gs.iter().enumerate() {
            if sizes[i] != g.source() {
                return Err(OsError::BlockMismatch(format!(
                    "block {} has size {}, morphism source {}",
                    i + 1,
                    sizes[i],
                    g.source()
                )));
            }
            offsets.push(total);
            total += g.target as u32;
        }
        // x is the (seen[b]+1)-th point of its block b
        let mut seen = vec![0usize; n];
        let images = blocks
            .images
            .iter()
            .map(|&b| {
                let b = b as usize - 1;
                let v = offsets[b] + gs[b].images[seen[b]];
                seen[b] += 1;
                v
            })
            .collect();
        Ok(SetMap { images, target: total as usize })
    }
    fn enumerate(k: usize, n: usize) -> Vec<Self> {
        SetMap::all(k, n)
    }
}

impl Morphism for OMap {
    const CATEGORY: &'static str = "O";
    fn source(&self) -> usize {
        OMap::source(self)
    }
    fn target(&self) -> usize {
        self.target
    }
    fn identity(n: usize) -> Self {
        OMap::identity(n)
    }
    fn compose(&self, other: &Self) -> Result<Self> {
        OMap::compose(self, other)
    }
    fn inclusion(subset: &[u32], m: usize) -> Result<Self> {
        check_subset(subset, m)?;
        Ok(OMap { images: subset.to_vec(), target: m })
    }
    fn underlying(&self) -> SetMap {
        self.as_set_map()
    }
    fn corestrict(&self, subset: &[u32]) -> Result<Self> {
        check_subset(subset, self.target)?;
        Ok(OMap { images: relabel(&self.images, subset)?, target: subset.len() })
    }
    fn assemble(blocks: &SetMap, gs: &[Self]) -> Result<Self> {
        if !blocks.is_monotone() {
            return Err(OsError::NotMonotone(blocks.images.clone()));
        }
        let os: Vec<OSMorphism> = gs.iter().cloned().map(OSMorphism::from_omap).collect();
        let h = OSMorphism::assemble(blocks, &os)?;
        debug_assert!(h.perm.is_identity());
        Ok(h.omap)
    }
    fn enumerate(k: usize, n: usize) -> Vec<Self> {
        OMap::all(k, n)
    }
}

impl Morphism for OSMorphism {
    const CATEGORY: &'static str = "OΣ";
    fn source(&self) -> usize {
        OSMorphism::source(self)
    }
    fn target(&self) -> usize {
        OSMorphism::target(self)
    }
    fn identity(n: usize) -> Self {
        OSMorphism::identity(n)
    }
    fn compose(&self, other: &Self) -> Result<Self> {
        OSMorphism::compose(self, other)
    }
    fn inclusion(subset: &[u32], m: usize) -> Result<Self> {
        Ok(OSMorphism::from_omap(OMap::inclusion(subset, m)?))
    }
    fn underlying(&self) -> SetMap {
        OSMorphism::underlying(self)
    }
    fn corestrict(&self, subset: &[u32]) -> Result<Self> {
        check_subset(subset, self.target())?;
        let omap = OMap { images: relabel(&self.omap.images, subset)?, target: subset.len() };
        Ok(OSMorphism { omap, perm: self.perm.clone() })
    }
    fn assemble(blocks: &SetMap, gs: &[Self]) -> Result<Self> {
        let n = blocks.target();
        if gs.len() != n {
            return Err(OsError::BlockMismatch(format!("{} blocks, {} morphisms", n, gs.len())));
        }
        let mut fibers = Vec::new();
        for (i, g) in gs.iter().enumerate() {
            let block = blocks.fiber(i as u32 + 1);
            if block.len() != g.source() {
                return Err(OsError::BlockMismatch(format!(
                    "block {} has size {}, morphism source {}",
                    i + 1,
                    block.len(),
                    g.source()
                )));
            }
            for fib in g.fibers() {
                fibers.push(fib.iter().map(|&p| block[p as usize - 1]).collect::<Vec<u32>>());
            }
        }
        OSMorphism::from_fibers(blocks.source(), &fibers)
    }
    fn enumerate(k: usize, n: usize) -> Vec<Self> {
        OSMorphism::all(k, n)
    }
}

/// `i_I` in any of the three categories.
pub fn include_subset<M: Morphism>(subset: &[u32], m: usize) -> Result<M> {
    M::inclusion(subset, m)
}

/// `(f_I, f^I)` for `I ⊆ m̄`.
pub fn restrict<M: Morphism>(f: &M, subset: &[u32]) -> Result<(M, M)> {
    let j = f.underlying().preimage(subset);
    let f_lower = f.compose(&M::inclusion(&j, f.source())?)?;
    let f_upper = f_lower.corestrict(subset)?;
    Ok((f_lower, f_upper))
}

/// `f^I` alone.
pub fn restrict_upper<M: Morphism>(f: &M, subset: &[u32]) -> Result<M> {
    Ok(restrict(f, subset)?.1)
}

/// `f⟨g₁,…,gₙ⟩`.
pub fn block_assemble<M: Morphism>(f: &SetMap, gs: &[M]) -> Result<M> {
    M::assemble(f, gs)
}

/// All subsets of m̄ as sorted lists.
pub fn subsets(m: usize) -> Vec<Vec<u32>> {
    (0u32..(1 << m))
        .map(|mask| (1..=m as u32).filter(|&i| mask & (1 << (i - 1)) != 0).collect())
        .collect()
}

/// Binomial coefficient (small arguments).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tau() -> Perm {
        Perm::new(vec![2, 1]).unwrap()
    }

    /// Compose by concatenating ordered fibres, straight from the definition.
    fn compose_oracle(a: &OSMorphism, b: &OSMorphism) -> OSMorphism {
        let bf = b.fibers();
        let fibers: Vec<Vec<u32>> = a
            .fibers()
            .iter()
            .map(|fa| fa.iter().flat_map(|&y| bf[y as usize - 1].clone()).collect())
            .collect();
        OSMorphism::from_fibers(b.source(), &fibers).unwrap()
    }

    #[test]
    fn perm_basics() {
        let p = Perm::new(vec![2, 3, 1]).unwrap();
        assert_eq!(p.compose(&p.inverse()).unwrap(), Perm::identity(3));
        assert_eq!(p.sign(), 1);
        assert_eq!(tau().sign(), -1);
        assert_eq!(Perm::all(4).len(), 24);
        assert!(Perm::new(vec![1, 1]).is_err());
        assert_eq!(Perm::new(vec![3, 1, 2]).unwrap().delete(1), Perm::identity(2));
    }

    #[test]
    fn sign_of_face() {
        // sgn(d_i π) = (−1)^{i+π(i)} sgn(π)
        for n in 1..=5 {
            for p in Perm::all(n) {
                for i in 1..=n {
                    let e = (i as i64 + p.apply(i as u32) as i64) % 2;
                    let s = if e == 0 { 1 } else { -1 };
                    assert_eq!(p.delete(i).sign(), s * p.sign());
                }
            }
        }
    }

    #[test]
    fn compose_examples() {
        let x = OSMorphism::new(OMap::new(vec![1, 2], 2).unwrap(), tau()).unwrap();
        let xx = x.compose(&x).unwrap();
        assert_eq!(xx, OSMorphism::identity(2));
        let id = OSMorphism::identity(2);
        assert_eq!(id.compose(&x).unwrap(), x);
    }

    #[test]
    fn compose_matches_fiber_oracle() {
        let a = OSMorphism::new(OMap::new(vec![1, 1, 2], 2).unwrap(), Perm::new(vec![1, 3, 2]).unwrap()).unwrap();
        for b in OSMorphism::all(3, 3) {
            assert_eq!(a.compose(&b).unwrap(), compose_oracle(&a, &b));
        }
        for k in 0..=3 {
            for n in 0..=3 {
                for m in 0..=3 {
                    for a in OSMorphism::all(n, m) {
                        for b in OSMorphism::all(k, n) {
                            let c = a.compose(&b).unwrap();
                            assert_eq!(c, compose_oracle(&a, &b));
                            assert_eq!(c.underlying(), a.underlying().compose(&b.underlying()).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn compose_size_mismatch() {
        let a = OSMorphism::identity(2);
        let b = OSMorphism::identity(3);
        assert!(matches!(a.compose(&b), Err(OsError::SizeMismatch { .. })));
    }

    #[test]
    fn star_decompose_examples() {
        let g = OMap::new(vec![1, 1, 2], 2).unwrap();
        let (gp, pg) = star_decompose(&tau(), &g).unwrap();
        assert_eq!(pg.images(), &[1, 2, 2]);
        assert_eq!(gp.images(), &[2, 3, 1]);
        let (gp, pg) = star_decompose(&Perm::identity(2), &g).unwrap();
        assert_eq!((gp, pg), (Perm::identity(3), g.clone()));
        let p = Perm::new(vec![3, 1, 2]).unwrap();
        let (gp, pg) = star_decompose(&p, &OMap::identity(3)).unwrap();
        assert_eq!((gp, pg), (p, OMap::identity(3)));
    }

    /// Brute-force uniqueness of the star decomposition for sizes ≤ 4.
    #[test]
    fn star_decompose_unique() {
        for n in 0..=3 {
            for k in 0..=4 {
                for g in OMap::all(k, n) {
                    for pi in Perm::all(n) {
                        let pg: Vec<u32> = g.images().iter().map(|&x| pi.apply(x)).collect();
                        let mut sols = Vec::new();
                        for h in OMap::all(k, n) {
                            for rho in Perm::all(k) {
                                let ok_square = (1..=k as u32).all(|x| h.apply(rho.apply(x)) == pg[x as usize - 1]);
                                let ok_order = (1..=k as u32).all(|x| {
                                    (x + 1..=k as u32)
                                        .all(|y| g.apply(x) != g.apply(y) || rho.apply(x) < rho.apply(y))
                                });
                                if ok_square && ok_order {
                                    sols.push((rho.clone(), h.clone()));
                                }
                            }
                        }
                        assert_eq!(sols.len(), 1);
                        assert_eq!(sols[0], star_decompose(&pi, &g).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_decompose_example() {
        let u = SetMap::new(vec![1, 2, 1], 2).unwrap();
        let (g, p) = canonical_decompose(&u);
        assert_eq!(g.images(), &[1, 1, 2]);
        assert_eq!(p.images(), &[1, 3, 2]);
        assert_eq!(p.sign(), -1);
        // exhaustive uniqueness on Σ_3
        let sols: Vec<_> = Perm::all(3)
            .into_iter()
            .filter(|r| {
                let ok_sq = (1..=3u32).all(|x| g.apply(r.apply(x)) == u.apply(x));
                let ok_ord = u.fiber(1).windows(2).all(|w| r.apply(w[0]) < r.apply(w[1]));
                ok_sq && ok_ord
            })
            .collect();
        assert_eq!(sols, vec![p]);
        let mono = SetMap::new(vec![1, 1, 3], 3).unwrap();
        assert_eq!(canonical_decompose(&mono), (OMap::new(vec![1, 1, 3], 3).unwrap(), Perm::identity(3)));
    }

    #[test]
    fn inclusion_examples() {
        let i: OMap = include_subset(&[2, 4], 4).unwrap();
        assert_eq!(i.images(), &[2, 4]);
        let id: OSMorphism = include_subset(&[1, 2, 3], 3).unwrap();
        assert_eq!(id, OSMorphism::identity(3));
        let e: SetMap = include_subset(&[], 3).unwrap();
        assert_eq!(e.source(), 0);
        assert!(matches!(include_subset::<OMap>(&[5], 4), Err(OsError::OutOfRange { .. })));
    }

    #[test]
    fn restrict_examples() {
        let f = OMap::new(vec![1, 1, 2], 2).unwrap();
        let (lo, up) = restrict(&f, &[1]).unwrap();
        assert_eq!(lo, OMap::new(vec![1, 1], 2).unwrap());
        assert_eq!(up, OMap::new(vec![1, 1], 1).unwrap());
        let (lo, up) = restrict(&f, &[1, 2]).unwrap();
        assert_eq!((lo, up), (f.clone(), f));
    }

    /// Fibre orders restrict as ordered subsets.
    #[test]
    fn restrict_fiber_oracle() {
        for f in OSMorphism::all(4, 3) {
            for sub in subsets(3) {
                let (_, up) = restrict(&f, &sub).unwrap();
                let j = f.underlying().preimage(&sub);
                let expected: Vec<Vec<u32>> = sub
                    .iter()
                    .map(|&t| {
                        f.fibers()[t as usize - 1]
                            .iter()
                            .map(|x| j.iter().position(|y| y == x).unwrap() as u32 + 1)
                            .collect()
                    })
                    .collect();
                assert_eq!(up.fibers(), expected);
            }
        }
    }

    #[test]
    fn assemble_examples() {
        let f = SetMap::new(vec![1, 2, 1], 2).unwrap();
        let g1 = SetMap::identity(2);
        let g2 = SetMap::identity(1);
        let h = block_assemble(&f, &[g1, g2]).unwrap();
        assert_eq!(h.images(), &[1, 3, 2]);
        let c = SetMap::new(vec![1, 1, 1], 1).unwrap();
        let g = OSMorphism::all(3, 2)[7].clone();
        assert_eq!(block_assemble(&c, &[g.clone()]).unwrap(), g);
        assert!(block_assemble(&f, &[SetMap::identity(1), SetMap::identity(1)]).is_err());
    }

    /// Ordered fibres of an assembled morphism, built blockwise.
    #[test]
    fn assemble_fiber_oracle() {
        let f = SetMap::new(vec![2, 1, 2, 1], 2).unwrap();
        for g1 in OSMorphism::all(2, 2) {
            for g2 in OSMorphism::all(2, 1) {
                let h = block_assemble(&f, &[g1.clone(), g2.clone()]).unwrap();
                let b1 = [2u32, 4];
                let b2 = [1u32, 3];
                let mut expect = Vec::new();
                for fib in g1.fibers() {
                    expect.push(fib.iter().map(|&p| b1[p as usize - 1]).collect::<Vec<_>>());
                }
                for fib in g2.fibers() {
                    expect.push(fib.iter().map(|&p| b2[p as usize - 1]).collect::<Vec<_>>());
                }
                assert_eq!(h.fibers(), expect);
            }
        }
    }

    /// Set-level assembly agrees with assembling natural OΣ lifts.
    #[test]
    fn set_assemble_matches_natural_lift() {
        for k in 0..=4 {
            for f in SetMap::all(k, 2) {
                let sizes = f.fiber_sizes();
                for g1 in SetMap::all(sizes[0], 2) {
                    for g2 in SetMap::all(sizes[1], 3) {
                        let os = [OSMorphism::natural(&g1), OSMorphism::natural(&g2)];
                        let want = OSMorphism::assemble(&f, &os).unwrap().underlying();
                        assert_eq!(block_assemble(&f, &[g1.clone(), g2.clone()]).unwrap(), want);
                    }
                }
            }
        }
    }

    #[test]
    fn hom_counts() {
        for k in 0..=5u64 {
            for n in 0..=5u64 {
                let o = OMap::all(k as usize, n as usize).len() as u64;
                let expect = if n == 0 { u64::from(k == 0) } else { binomial(n + k - 1, k) };
                assert_eq!(o, expect);
                if k <= 4 {
                    assert_eq!(OSMorphism::all(k as usize, n as usize).len() as u64, expect * factorial(k));
                }
            }
        }
    }

    #[test]
    fn render_roundtrip() {
        for x in OSMorphism::all(3, 2) {
            let t = x.render();
            assert_eq!(OSMorphism::parse(&t, 2).unwrap(), x);
        }
        let x = OSMorphism::natural(&SetMap::new(vec![1, 2, 1], 2).unwrap());
        assert_eq!(x.render(), "u=[1,2,1] ; pi=[1,3,2]");
        assert!(OSMorphism::parse("u=[1,2] ; pi=[2,1,3]", 2).is_err());
    }

    fn arb_os(max: usize) -> impl Strategy<Value = OSMorphism> {
        (0..=max, 1..=max).prop_flat_map(|(k, n)| {
            let all = OSMorphism::all(k, n);
            (0..all.len()).prop_map(move |i| all[i].clone())
        })
    }

    proptest! {
        #[test]
        fn roundtrip_normal_form(x in arb_os(4)) {
            let y = OSMorphism::from_fibers(x.source(), &x.fibers()).unwrap();
            prop_assert_eq!(&y, &x);
            if x.is_natural() {
                prop_assert_eq!(OSMorphism::natural(&x.underlying()), x);
            }
        }

        #[test]
        fn identity_laws(x in arb_os(5)) {
            prop_assert_eq!(OSMorphism::identity(x.target()).compose(&x).unwrap(), x.clone());
            prop_assert_eq!(x.compose(&OSMorphism::identity(x.source())).unwrap(), x);
        }
    }
}
