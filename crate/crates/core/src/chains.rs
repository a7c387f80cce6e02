//! Free chain complexes with labeled bases, built from presheaves.
//!
//! Conventions:
//! - the O-differential on `C^O_n(X) = k[X(n)]` is `Σ_{i=1}^n (−1)^i d_i`;
//! - simplicial chains use the usual `Σ_{i=0}^d (−1)^i d_i`;
//! - `σⁿ` raises degrees by `n` and has `d(σⁿx) = (−1)ⁿ σⁿ dx`;
//! - tensor products carry the Koszul sign `d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy`.
//!
//! With these, `C^O(X, X(0)) = σ C(UX)` is the identity on basis elements,
//! and the Eilenberg–Zilber map uses the usual `(p,q)`-shuffle sign.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::joins::{symmetrization_forward, t_sigma};
use crate::lincomb::LinComb;
use crate::linalg::{rank_field, smith_form, SparseMatrix};
use crate::oscalc::{OMap, OSMorphism, Perm};
use crate::presheaves::{
    augment, degeneracy, face, sigma_free, PresheafError, PresheafPair, PresheafRef, Simplex, Variance,
};
use crate::scalar::{Field, Ring};

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("degree {degree} is outside the window {lo}..={hi}")]
    OutOfWindow { degree: i64, lo: i64, hi: i64 },
    #[error("d∘d ≠ 0 on {key} in degree {degree}")]
    DSquared { key: String, degree: i64 },
    #[error("boundary of {key} (degree {degree}) has the term {term} outside the basis")]
    NotInBasis { key: String, term: String, degree: i64 },
    #[error("{name} does not commute with the differentials at {key} (degree {degree})")]
    NotChainMap { name: String, key: String, degree: i64 },
    #[error("window starts at {lo} but the boundary of {key} is nonzero")]
    TruncatedBelow { key: String, lo: i64 },
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
}

pub type Result<T> = std::result::Result<T, ChainError>;

/// Anything usable as a basis label.
pub trait Label: Clone + Ord + Hash + Debug + Send + Sync + 'static {}
impl<T: Clone + Ord + Hash + Debug + Send + Sync + 'static> Label for T {}

type DiffFn<K, R> = Arc<dyn Fn(&K, i64) -> LinComb<K, R> + Send + Sync>;
type MapFn<K1, K2, R> = Arc<dyn Fn(&K1, i64) -> LinComb<K2, R> + Send + Sync>;

struct Bases<K> {
    lo: i64,
    per_degree: Vec<Vec<K>>,
    index: Vec<HashMap<K, usize>>,
}

impl<K: Label> Bases<K> {
    fn get(&self, d: i64) -> &[K] {
        let i = d - self.lo;
        if i < 0 || i as usize >= self.per_degree.len() {
            &[]
        } else {
            &self.per_degree[i as usize]
        }
    }

    fn position(&self, d: i64, k: &K) -> Option<usize> {
        let i = d - self.lo;
        if i < 0 || i as usize >= self.index.len() {
            return None;
        }
        self.index[i as usize].get(k).copied()
    }
}

/// A free chain complex truncated to a window of degrees.
///
/// Below the window the complex is zero; above it, it is unknown. The
/// suspension offset is bookkeeping only: suspended copies share bases.
#[derive(Clone)]
pub struct ChainComplex<K: Label, R: Ring> {
    name: String,
    /// window in unshifted degrees
    lo: i64,
    hi: i64,
    shift: i64,
    bases: Arc<Bases<K>>,
    diff: DiffFn<K, R>,
}

impl<K: Label, R: Ring> Debug for ChainComplex<K, R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (lo, hi) = self.window();
        let ranks: Vec<usize> = (lo..=hi).map(|d| self.rank(d)).collect();
        write!(f, "{} [{lo}..={hi}] ranks {ranks:?}", self.name)
    }
}

impl<K: Label, R: Ring> ChainComplex<K, R> {
    /// Build from a basis enumerator and a differential on basis elements
    /// (both in unshifted degrees), checking that boundaries stay in the
    /// basis and that `d∘d = 0` throughout the window.
    pub fn from_fn<B, D>(name: &str, lo: i64, hi: i64, basis: B, diff: D) -> Result<Self>
    where
        B: Fn(i64) -> Vec<K> + Sync,
        D: Fn(&K, i64) -> LinComb<K, R> + Send + Sync + 'static,
    {
        let c = Self::from_fn_unchecked(name, lo, hi, basis, diff);
        c.validate()?;
        Ok(c)
    }

    /// As [`ChainComplex::from_fn`] without the validation pass.
    pub fn from_fn_unchecked<B, D>(name: &str, lo: i64, hi: i64, basis: B, diff: D) -> Self
    where
        B: Fn(i64) -> Vec<K> + Sync,
        D: Fn(&K, i64) -> LinComb<K, R> + Send + Sync + 'static,
    {
        let per_degree: Vec<Vec<K>> = (lo..=hi).into_par_iter().map(&basis).collect();
        let index = per_degree.iter().map(|b| b.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()).collect();
        ChainComplex {
            name: name.to_string(),
            lo,
            hi,
            shift: 0,
            bases: Arc::new(Bases { lo, per_degree, index }),
            diff: Arc::new(diff),
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.window();
        for d in lo..=hi {
            self.basis(d).par_iter().try_for_each(|k| -> Result<()> {
                let dk = self.diff(k, d);
                if d == lo && !dk.is_zero() {
                    return Err(ChainError::TruncatedBelow { key: format!("{k:?}"), lo });
                }
                for t in dk.keys() {
                    if self.bases.position(d - 1 - self.shift, t).is_none() {
                        return Err(ChainError::NotInBasis {
                            key: format!("{k:?}"),
                            term: format!("{t:?}"),
                            degree: d,
                        });
                    }
                }
                if !self.diff_lc(&dk, d - 1).is_zero() {
                    return Err(ChainError::DSquared { key: format!("{k:?}"), degree: d });
                }
                Ok(())
            })?;
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Window in (shifted) degrees.
    pub fn window(&self) -> (i64, i64) {
        (self.lo + self.shift, self.hi + self.shift)
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn basis(&self, d: i64) -> &[K] {
        self.bases.get(d - self.shift)
    }

    pub fn rank(&self, d: i64) -> usize {
        self.basis(d).len()
    }

    pub fn position(&self, d: i64, k: &K) -> Option<usize> {
        self.bases.position(d - self.shift, k)
    }

    /// Degree of a basis label, if it occurs in the window.
    pub fn degree_of(&self, k: &K) -> Option<i64> {
        let (lo, hi) = self.window();
        (lo..=hi).find(|&d| self.position(d, k).is_some())
    }

    /// Differential of a basis element of degree `d`.
    pub fn diff(&self, k: &K, d: i64) -> LinComb<K, R> {
        let out = (self.diff)(k, d - self.shift);
        if self.shift.rem_euclid(2) == 1 {
            out.neg()
        } else {
            out
        }
    }

    pub fn diff_lc(&self, x: &LinComb<K, R>, d: i64) -> LinComb<K, R> {
        x.flat_map(|k| self.diff(k, d))
    }

    /// Matrix of `d : C_d → C_{d−1}` (columns indexed by `basis(d)`).
    pub fn matrix(&self, d: i64) -> Result<SparseMatrix<R>> {
        let (lo, hi) = self.window();
        if d < lo || d > hi {
            return Err(ChainError::OutOfWindow { degree: d, lo, hi });
        }
        let rows = self.rank(d - 1);
        let cols: Result<Vec<Vec<(usize, R)>>> = self
            .basis(d)
            .par_iter()
            .map(|k| {
                self.diff(k, d)
                    .iter()
                    .map(|(t, c)| {
                        self.position(d - 1, t).map(|i| (i, c.clone())).ok_or_else(|| {
                            if d == lo {
                                ChainError::TruncatedBelow { key: format!("{k:?}"), lo }
                            } else {
                                ChainError::NotInBasis { key: format!("{k:?}"), term: format!("{t:?}"), degree: d }
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(SparseMatrix { rows, cols: cols? })
    }

    /// `σⁿ` of this complex; shares the bases.
    pub fn suspend(&self, n: i64) -> Self {
        let mut out = self.clone();
        out.shift += n;
        out.name = format!("σ^{}({})", n, self.name);
        out
    }

    /// The same complex with coefficients pushed along `ℤ → R2`.
    pub fn change_ring<R2: Ring>(&self, f: fn(&R) -> R2) -> ChainComplex<K, R2> {
        let diff = self.diff.clone();
        ChainComplex {
            name: self.name.clone(),
            lo: self.lo,
            hi: self.hi,
            shift: self.shift,
            bases: self.bases.clone(),
            diff: Arc::new(move |k, d| diff(k, d).map_coeffs(f)),
        }
    }

    /// JSON export: basis labels per degree and each differential as sparse
    /// triplets `{d, row, col, value}`.
    pub fn to_json(&self) -> Result<Value> {
        let (lo, hi) = self.window();
        let mut degrees = Vec::new();
        let mut entries = Vec::new();
        for d in lo..=hi {
            degrees.push(json!({
                "degree": d,
                "rank": self.rank(d),
                "basis": self.basis(d).iter().map(|k| format!("{k:?}")).collect::<Vec<_>>(),
            }));
            for (row, col, v) in self.matrix(d)?.triplets() {
                let s = v.to_string();
                let value = s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s));
                entries.push(json!({"d": d, "row": row, "col": col, "value": value}));
            }
        }
        Ok(json!({
            "name": self.name,
            "ring": R::name(),
            "window": [lo, hi],
            "shift": self.shift,
            "degrees": degrees,
            "differential": entries,
        }))
    }
}

/// A linear map of a declared degree `k` satisfying `d f = (−1)^k f d`,
/// verified on the whole source window at construction.
#[derive(Clone)]
pub struct ChainMap<K1: Label, K2: Label, R: Ring> {
    pub name: String,
    pub degree: i64,
    pub source: ChainComplex<K1, R>,
    pub target: ChainComplex<K2, R>,
    map: MapFn<K1, K2, R>,
    /// Number of basis elements on which the square was checked.
    pub checked: usize,
}

impl<K1: Label, K2: Label, R: Ring> ChainMap<K1, K2, R> {
    pub fn new<F>(name: &str, source: &ChainComplex<K1, R>, target: &ChainComplex<K2, R>, degree: i64, f: F) -> Result<Self>
    where
        F: Fn(&K1, i64) -> LinComb<K2, R> + Send + Sync + 'static,
    {
        let mut m = ChainMap {
            name: name.to_string(),
            degree,
            source: source.clone(),
            target: target.clone(),
            map: Arc::new(f),
            checked: 0,
        };
        m.checked = m.verify()?;
        Ok(m)
    }

    fn verify(&self) -> Result<usize> {
        let (lo, hi) = self.source.window();
        let (tlo, thi) = self.target.window();
        let sign = R::sign(self.degree);
        let mut count = 0;
        for d in lo..=hi {
            let e = d + self.degree;
            if e < tlo || e > thi {
                continue;
            }
            self.source.basis(d).par_iter().try_for_each(|k| -> Result<()> {
                let fx = self.apply(k, d);
                let lhs = self.target.diff_lc(&fx, e);
                let dx = self.source.diff(k, d);
                let rhs = dx.flat_map(|t| self.apply(t, d - 1)).scale(&sign);
                if lhs != rhs {
                    return Err(ChainError::NotChainMap { name: self.name.clone(), key: format!("{k:?}"), degree: d });
                }
                Ok(())
            })?;
            count += self.source.rank(d);
        }
        Ok(count)
    }

    pub fn apply(&self, k: &K1, d: i64) -> LinComb<K2, R> {
        (self.map)(k, d)
    }

    pub fn apply_lc(&self, x: &LinComb<K1, R>, d: i64) -> LinComb<K2, R> {
        x.flat_map(|k| self.apply(k, d))
    }

    /// Matrix `C_d → D_{d+k}`; terms outside the target basis are an error.
    pub fn matrix(&self, d: i64) -> Result<SparseMatrix<R>> {
        let e = d + self.degree;
        let rows = self.target.rank(e);
        let mut cols = Vec::new();
        for k in self.source.basis(d) {
            let mut col = Vec::new();
            for (t, c) in self.apply(k, d).iter() {
                let i = self.target.position(e, t).ok_or_else(|| ChainError::NotInBasis {
                    key: format!("{k:?}"),
                    term: format!("{t:?}"),
                    degree: d,
                })?;
                col.push((i, c.clone()));
            }
            cols.push(col);
        }
        Ok(SparseMatrix { rows, cols })
    }
}

// ---------------------------------------------------------------------------
// Chains of presheaves

/// Whether a simplex of degree `k` is in the image of a degeneracy.
pub fn is_degenerate(x: &dyn crate::presheaves::Presheaf, s: &Simplex, k: usize) -> bool {
    match x.variance() {
        Variance::Delta => (0..k).any(|i| degeneracy(x, &face(x, s, k, i), k - 1, i) == *s),
        _ => (1..k).any(|i| degeneracy(x, &face(x, s, k, i), k - 1, i) == *s),
    }
}

/// Boundary of a single simplex of degree `k` with the convention of its variance.
pub fn simplex_boundary<R: Ring>(x: &dyn crate::presheaves::Presheaf, s: &Simplex, k: usize) -> LinComb<Simplex, R> {
    let mut out = LinComb::zero();
    match x.variance() {
        Variance::Delta => {
            if k > 0 {
                for i in 0..=k {
                    out.add_term(face(x, s, k, i), R::sign(i as i64));
                }
            }
        }
        _ => {
            for i in 1..=k {
                out.add_term(face(x, s, k, i), R::sign(i as i64));
            }
        }
    }
    out
}

fn window_degree(d: i64) -> Option<usize> {
    (d >= 0).then_some(d as usize)
}

/// `C^O(X)` (or `C(X)` for a simplicial presheaf) on degrees `0..=hi`.
pub fn chains_of<R: Ring>(x: PresheafRef, hi: i64) -> Result<ChainComplex<Simplex, R>> {
    let name = format!("C({})", x.describe());
    let xb = x.clone();
    ChainComplex::from_fn(
        &name,
        0,
        hi,
        move |d| xb.simplices(d as usize).to_vec(),
        move |s, d| window_degree(d).map_or_else(LinComb::zero, |k| simplex_boundary(x.as_ref(), s, k)),
    )
}

/// `C^O(X, X′)`: simplices outside the sub-object, projected differential.
pub fn relative_chains<R: Ring>(pair: PresheafPair, hi: i64) -> Result<ChainComplex<Simplex, R>> {
    let name = format!("C({}, sub)", pair.total.describe());
    let pb = pair.clone();
    ChainComplex::from_fn(
        &name,
        0,
        hi,
        move |d| pb.relative_simplices(d as usize),
        move |s, d| {
            let Some(k) = window_degree(d) else { return LinComb::zero() };
            simplex_boundary::<R>(pair.total.as_ref(), s, k).filter(|t| k == 0 || !pair.contains(t, k - 1))
        },
    )
}

/// Relative chains modulo degenerate simplices.
pub fn normalized_chains<R: Ring>(pair: PresheafPair, hi: i64) -> Result<ChainComplex<Simplex, R>> {
    let name = format!("N({}, sub)", pair.total.describe());
    let pb = pair.clone();
    ChainComplex::from_fn(
        &name,
        0,
        hi,
        move |d| {
            let k = d as usize;
            pb.relative_simplices(k).into_iter().filter(|s| !is_degenerate(pb.total.as_ref(), s, k)).collect()
        },
        move |s, d| {
            let Some(k) = window_degree(d) else { return LinComb::zero() };
            simplex_boundary::<R>(pair.total.as_ref(), s, k)
                .filter(|t| k == 0 || (!pair.contains(t, k - 1) && !is_degenerate(pair.total.as_ref(), t, k - 1)))
        },
    )
}

/// The identification `σC(Y) → C^O(Y₊, Y₊(0))`, identity on basis labels.
pub fn reduced_iso<R: Ring>(y: PresheafRef, hi: i64) -> Result<ChainMap<Simplex, Simplex, R>> {
    let source = chains_of::<R>(y.clone(), hi - 1)?.suspend(1);
    let target = relative_chains::<R>(PresheafPair::augmentation_pair(augment(y)?), hi)?;
    ChainMap::new("σC(Y) ≅ C^O(Y₊,Y₊(0))", &source, &target, 0, |s, _| LinComb::basis(s.clone()))
}

// ---------------------------------------------------------------------------
// Koszul signs and tensor products

/// Sign of `x₁⊗…⊗x_r ↦ x_{order[0]}⊗…⊗x_{order[r−1]}` for homogeneous
/// factors of the given degrees.
pub fn koszul_sign(degrees: &[i64], order: &[usize]) -> i64 {
    let mut odd = 0;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] {
                odd += degrees[order[a]] * degrees[order[b]];
            }
        }
    }
    if odd.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Koszul differential of a pure tensor, given degrees and factor differentials.
pub fn tensor_diff<K: Label, R: Ring>(
    keys: &[K],
    degrees: &[i64],
    diff: &dyn Fn(usize, &K, i64) -> LinComb<K, R>,
) -> LinComb<Vec<K>, R> {
    let mut out = LinComb::zero();
    let mut before = 0;
    for i in 0..keys.len() {
        let sign = R::sign(before);
        for (t, c) in diff(i, &keys[i], degrees[i]).iter() {
            let mut ks = keys.to_vec();
            ks[i] = t.clone();
            out.add_term(ks, c.clone() * sign.clone());
        }
        before += degrees[i];
    }
    out
}

/// Degrees of a pure tensor with respect to factor complexes.
fn tensor_degrees<K: Label, R: Ring>(cs: &[ChainComplex<K, R>], keys: &[K]) -> Vec<i64> {
    keys.iter().zip(cs).map(|(k, c)| c.degree_of(k).expect("tensor factor outside its window")).collect()
}

/// `C₁ ⊗ … ⊗ C_r`, on the range of degrees where it is fully determined.
pub fn tensor<K: Label, R: Ring>(cs: &[ChainComplex<K, R>]) -> Result<ChainComplex<Vec<K>, R>> {
    let windows: Vec<(i64, i64)> = cs.iter().map(ChainComplex::window).collect();
    let lo: i64 = windows.iter().map(|w| w.0).sum();
    let hi = lo + windows.iter().map(|w| w.1 - w.0).min().unwrap_or(0);
    let name = cs.iter().map(|c| c.name().to_string()).collect::<Vec<_>>().join(" ⊗ ");
    let basis_cs = cs.to_vec();
    let diff_cs = cs.to_vec();
    ChainComplex::from_fn(
        &name,
        lo,
        hi,
        move |d| {
            let mut out = Vec::new();
            tensor_basis(&basis_cs, d, &mut Vec::new(), &mut out);
            out
        },
        move |keys: &Vec<K>, _| {
            let degs = tensor_degrees(&diff_cs, keys);
            tensor_diff(keys, &degs, &|i, k, d| diff_cs[i].diff(k, d))
        },
    )
}

fn tensor_basis<K: Label, R: Ring>(cs: &[ChainComplex<K, R>], d: i64, prefix: &mut Vec<K>, out: &mut Vec<Vec<K>>) {
    let i = prefix.len();
    if i == cs.len() {
        if d == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    let rest_lo: i64 = cs[i + 1..].iter().map(|c| c.window().0).sum();
    let (lo, hi) = cs[i].window();
    for e in lo..=hi.min(d - rest_lo) {
        for k in cs[i].basis(e) {
            prefix.push(k.clone());
            tensor_basis(cs, d - e, prefix, out);
            prefix.pop();
        }
    }
}

/// The permutation isomorphism `⊗ C_i → ⊗ C_{order[i]}` with Koszul signs;
/// for two factors and `order = [1, 0]` this is `T(x⊗y) = (−1)^{|x||y|} y⊗x`.
pub fn tensor_permutation<K: Label, R: Ring>(
    cs: &[ChainComplex<K, R>],
    order: &[usize],
) -> Result<ChainMap<Vec<K>, Vec<K>, R>> {
    let source = tensor(cs)?;
    let permuted: Vec<ChainComplex<K, R>> = order.iter().map(|&i| cs[i].clone()).collect();
    let target = tensor(&permuted)?;
    let cs = cs.to_vec();
    let order = order.to_vec();
    ChainMap::new("T", &source, &target, 0, move |keys: &Vec<K>, _| {
        let degs = tensor_degrees(&cs, keys);
        let s = koszul_sign(&degs, &order);
        LinComb::term(order.iter().map(|&i| keys[i].clone()).collect(), R::from_i64(s))
    })
}

/// `σⁿC ⊗ σᵐD → σ^{n+m}(C⊗D)`, `σⁿx⊗σᵐy ↦ (−1)^{m·deg x} σ^{n+m}(x⊗y)`.
pub fn suspension_interchange<K: Label, R: Ring>(
    c: &ChainComplex<K, R>,
    d: &ChainComplex<K, R>,
    n: i64,
    m: i64,
) -> Result<ChainMap<Vec<K>, Vec<K>, R>> {
    let source = tensor(&[c.suspend(n), d.suspend(m)])?;
    let target = tensor(&[c.clone(), d.clone()])?.suspend(n + m);
    let c = c.clone();
    ChainMap::new("σ-interchange", &source, &target, 0, move |keys: &Vec<K>, _| {
        let dx = c.degree_of(&keys[0]).expect("left factor in window");
        LinComb::term(keys.clone(), R::sign(m * dx))
    })
}

// ---------------------------------------------------------------------------
// Eilenberg–Zilber

/// One term of the multi-shuffle: a sign and, per factor, the O-map
/// `(N+1) → (p_i+1)` recording the degeneracies applied to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shuffle {
    pub sign: i64,
    pub maps: Vec<OMap>,
}

type ShuffleTable = RwLock<HashMap<Vec<usize>, Arc<Vec<Shuffle>>>>;

/// All shuffles of simplices of dimensions `dims`. Each term is a lattice
/// path; step `t` advances factor `w[t]`, and the sign is the parity of
/// inversions of the word `w`.
pub fn shuffles(dims: &[usize]) -> Arc<Vec<Shuffle>> {
    static TABLE: OnceLock<ShuffleTable> = OnceLock::new();
    let table = TABLE.get_or_init(Default::default);
    if let Some(s) = table.read().unwrap().get(dims) {
        return s.clone();
    }
    let mut out = Vec::new();
    let mut word = Vec::new();
    let mut left = dims.to_vec();
    shuffle_words(&mut left, &mut word, &mut |w| {
        let inv = (0..w.len()).flat_map(|a| (a + 1..w.len()).map(move |b| (a, b))).filter(|&(a, b)| w[a] > w[b]).count();
        let maps = (0..dims.len())
            .map(|i| {
                let mut pos = 1u32;
                let mut images = vec![1u32];
                for &l in w {
                    if l == i {
                        pos += 1;
                    }
                    images.push(pos);
                }
                OMap::new(images, dims[i] + 1).expect("shuffle path is monotone")
            })
            .collect();
        out.push(Shuffle { sign: if inv % 2 == 0 { 1 } else { -1 }, maps });
    });
    let out = Arc::new(out);
    table.write().unwrap().insert(dims.to_vec(), out.clone());
    out
}

fn shuffle_words(left: &mut [usize], word: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if left.iter().all(|&l| l == 0) {
        emit(word);
        return;
    }
    for i in 0..left.len() {
        if left[i] > 0 {
            left[i] -= 1;
            word.push(i);
            shuffle_words(left, word, emit);
            word.pop();
            left[i] += 1;
        }
    }
}

/// `EZ(x₁⊗…⊗x_r)` for simplices `xs` of simplicial presheaves, as tuples.
pub fn ez_apply<R: Ring>(factors: &[PresheafRef], xs: &[Simplex], dims: &[usize]) -> LinComb<Simplex, R> {
    shuffles(dims)
        .iter()
        .map(|sh| {
            let parts = factors
                .iter()
                .zip(xs)
                .zip(&sh.maps)
                .map(|((f, x), a)| f.act(x, &OSMorphism::from_omap(a.clone())))
                .collect();
            (Simplex::Tuple(parts), R::from_i64(sh.sign))
        })
        .collect()
}

/// The Eilenberg–Zilber chain map `C(X₁)⊗…⊗C(X_r) → C(X₁×…×X_r)`.
pub fn ez_shuffle<R: Ring>(factors: &[PresheafRef], hi: i64) -> Result<ChainMap<Vec<Simplex>, Simplex, R>> {
    let cs: Vec<ChainComplex<Simplex, R>> =
        factors.iter().map(|f| chains_of(f.clone(), hi)).collect::<Result<_>>()?;
    let source = tensor(&cs)?;
    let target = chains_of::<R>(crate::presheaves::product(factors.to_vec())?, hi)?;
    let fs = factors.to_vec();
    ChainMap::new("EZ", &source, &target, 0, move |keys: &Vec<Simplex>, _| {
        let dims: Vec<usize> = keys.iter().zip(&cs).map(|(k, c)| c.degree_of(k).unwrap() as usize).collect();
        ez_apply(&fs, keys, &dims)
    })
}

// ---------------------------------------------------------------------------
// The sign map

/// `s_X(x, π) = sgn(π) x`.
pub fn sign_of<R: Ring>(s: &Simplex) -> LinComb<Simplex, R> {
    match s {
        Simplex::Sym(x, pi) => LinComb::term((**x).clone(), R::from_i64(pi.sign())),
        _ => panic!("not a symmetrised simplex: {s:?}"),
    }
}

/// `s_X : C^O(XΣ, X′Σ) → C^O(X, X′)` for an O-pair; absolute when the
/// sub-object is empty.
pub fn sign_map<R: Ring>(pair: &PresheafPair, hi: i64) -> Result<ChainMap<Simplex, Simplex, R>> {
    let xs = sigma_free(pair.total.clone())?;
    let sub = pair.sub.clone();
    let sym_pair = PresheafPair::new(
        xs,
        Arc::new(move |s, k| match s {
            Simplex::Sym(x, _) => sub(x.as_ref(), k),
            _ => false,
        }),
    );
    let source = relative_chains::<R>(sym_pair, hi)?;
    let target = relative_chains::<R>(pair.clone(), hi)?;
    ChainMap::new("s_X", &source, &target, 0, |s, _| sign_of(s))
}

/// Homology of `C^O(XΣ,X′Σ)` and `C^O(X,X′)` agree on `0..hi` and
/// `s_X ∘ η_X = id`; together these make `s_X` a quasi-isomorphism there
/// (a surjection between isomorphic finitely generated groups is injective).
pub fn check_sign_quasi_iso(pair: &PresheafPair, hi: i64) -> std::result::Result<usize, String> {
    let s = sign_map::<i64>(pair, hi).map_err(|e| e.to_string())?;
    let mut count = s.checked;
    for d in 0..hi {
        for x in s.target.basis(d) {
            let back = s.apply(&crate::presheaves::eta(x, d as usize), d);
            if back != LinComb::basis(x.clone()) {
                return Err(format!("s∘η ≠ id at {x:?}"));
            }
            count += 1;
        }
        let a = homology_z(&s.source, d).map_err(|e| e.to_string())?;
        let b = homology_z(&s.target, d).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("H_{d}: {a} vs {b}"));
        }
    }
    Ok(count)
}

/// Equivariance of the composite
/// `C^O(J^Σ(XΣ,YΣ)) → C^O(J^O(X,Y)Σ) →s C^O(J^O(X,Y)) = C^O(X)⊗C^O(Y)`
/// with respect to the swap, exhaustively up to `max_degree`; also checks
/// `sgn(τ_{p,q}) = (−1)^{pq}` on the way.
pub fn check_sign_symmetry(x: PresheafRef, y: PresheafRef, max_degree: usize) -> std::result::Result<usize, String> {
    use crate::joins::{join, JoinVariant};
    use crate::presheaves::Presheaf;
    let xs = sigma_free(x)?;
    let ys = sigma_free(y)?;
    let fwd = [xs.clone(), ys.clone()];
    let bwd = [ys.clone(), xs.clone()];
    let j = join(JoinVariant::Sigma, fwd.to_vec())?;
    let tau = Perm::new(vec![2, 1]).unwrap();
    let phi = |factors: &[PresheafRef], z: &Simplex| -> (i64, Vec<Simplex>, Vec<i64>) {
        match symmetrization_forward(factors, z) {
            Simplex::Sym(jz, pi) => match *jz {
                Simplex::Join(f, parts) => {
                    let degs = f.fiber_sizes().into_iter().map(|a| a as i64).collect();
                    (pi.sign(), parts, degs)
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    };
    let mut count = 0;
    for p in 0..=max_degree {
        for q in 0..=max_degree - p {
            let block = Perm::new((1..=(p + q) as u32).map(|v| if v as usize <= p { v + q as u32 } else { v - p as u32 }).collect())
                .unwrap();
            if block.sign() != if (p * q) % 2 == 0 { 1 } else { -1 } {
                return Err(format!("sgn(τ_{{{p},{q}}}) ≠ (−1)^{{pq}}"));
            }
        }
    }
    for k in 0..=max_degree {
        for z in j.simplices(k).iter() {
            let (s1, parts, degs) = phi(&fwd, z);
            let lhs_sign = s1 * koszul_sign(&degs, &[1, 0]);
            let lhs = vec![parts[1].clone(), parts[0].clone()];
            let (s2, rhs) = {
                let (s2, parts2, _) = phi(&bwd, &t_sigma(&tau, z));
                (s2, parts2)
            };
            if lhs != rhs || lhs_sign != s2 {
                return Err(format!("swap equivariance fails at {z:?}"));
            }
            count += 1;
        }
    }
    Ok(count)
}

// ---------------------------------------------------------------------------
// Homology

/// A finitely generated abelian group `ℤ^rank ⊕ ⨁ ℤ/t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Homology {
    pub fn free(rank: usize) -> Self {
        Homology { rank, torsion: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for Homology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

fn check_homology_window<K: Label, R: Ring>(c: &ChainComplex<K, R>, d: i64) -> Result<()> {
    let (lo, hi) = c.window();
    if d < lo || d + 1 > hi {
        return Err(ChainError::OutOfWindow { degree: d + 1, lo, hi });
    }
    Ok(())
}

/// `H_d` over ℤ by Smith normal form.
pub fn homology_z<K: Label>(c: &ChainComplex<K, i64>, d: i64) -> Result<Homology> {
    check_homology_window(c, d)?;
    let out = smith_form(&c.matrix(d)?);
    let inc = smith_form(&c.matrix(d + 1)?);
    Ok(Homology { rank: c.rank(d) - out.rank - inc.rank, torsion: inc.torsion() })
}

/// `dim H_d` over a field.
pub fn homology_dim<K: Label, F: Field>(c: &ChainComplex<K, F>, d: i64) -> Result<usize> {
    check_homology_window(c, d)?;
    Ok(c.rank(d) - rank_field(&c.matrix(d)?) - rank_field(&c.matrix(d + 1)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaves::{boundary, fixtures, forget, standard_object};
    use crate::scalar::Fp;

    fn z(n: usize) -> Homology {
        Homology::free(n)
    }

    #[test]
    fn fixture_homology() {
        let tri = chains_of::<i64>(fixtures::simplex(2), 3).unwrap();
        assert_eq!([0, 1, 2].map(|d| homology_z(&tri, d).unwrap()), [z(1), z(0), z(0)]);
        let sphere = chains_of::<i64>(fixtures::boundary_simplex(3), 3).unwrap();
        assert_eq!([0, 1, 2].map(|d| homology_z(&sphere, d).unwrap()), [z(1), z(0), z(1)]);
        let rp2 = normalized_chains::<i64>(PresheafPair::absolute(fixtures::rp2()), 3).unwrap();
        let two = Homology { rank: 0, torsion: vec![BigInt::from(2)] };
        assert_eq!([0, 1, 2].map(|d| homology_z(&rp2, d).unwrap()), [z(1), two, z(0)]);
        // unnormalized chains compute the same
        let rp2u = chains_of::<i64>(fixtures::rp2(), 3).unwrap();
        assert_eq!(homology_z(&rp2u, 1).unwrap().torsion, vec![BigInt::from(2)]);
        let rp2f = rp2.change_ring(|v| Fp::<2>::new(*v));
        assert_eq!([0, 1, 2].map(|d| homology_dim(&rp2f, d).unwrap()), [1, 1, 1]);
        assert!(matches!(homology_z(&tri, 3), Err(ChainError::OutOfWindow { .. })));
    }

    #[test]
    fn standard_chains() {
        // C^O(O_1): one simplex per degree
        let o1 = chains_of::<i64>(standard_object(Variance::O, 1), 4).unwrap();
        assert_eq!((0..=4).map(|d| o1.rank(d)).collect::<Vec<_>>(), vec![1; 5]);
        // d on degree 2: −d₁ + d₂ of the constant map = 0; on degree 1: −1·(empty)
        assert!(o1.diff(&o1.basis(2)[0], 2).is_zero());
        assert_eq!(o1.diff(&o1.basis(1)[0], 1).coeff(&o1.basis(0)[0]), -1);
        // d∘d = 0 is asserted at construction
        let os2 = chains_of::<i64>(standard_object(Variance::OSigma, 2), 5).unwrap();
        assert_eq!(os2.rank(2), 6);
        for d in 2..=5 {
            assert!(os2.matrix(d - 1).unwrap().mul(&os2.matrix(d).unwrap()).is_zero());
        }
    }

    #[test]
    fn relative_ranks() {
        for n in 1..=3 {
            let c = relative_chains::<i64>(boundary(Variance::OSigma, n), n as i64 + 1).unwrap();
            for d in 0..n as i64 {
                assert_eq!(c.rank(d), 0);
            }
            assert_eq!(c.rank(n as i64), crate::oscalc::factorial(n as u64) as usize);
        }
    }

    #[test]
    fn reduced_identification() {
        let m = reduced_iso::<i64>(fixtures::simplex(2), 4).unwrap();
        for d in 1..=4 {
            assert_eq!(m.source.rank(d), m.target.rank(d));
        }
        assert!(m.checked > 0);
    }

    #[test]
    fn tensor_and_symmetry() {
        let c = chains_of::<i64>(fixtures::circle(), 3).unwrap();
        let d = chains_of::<i64>(fixtures::simplex(1), 3).unwrap();
        let cd = tensor(&[c.clone(), d.clone()]).unwrap();
        assert_eq!(cd.window(), (0, 3));
        let t = tensor_permutation(&[c.clone(), d.clone()], &[1, 0]).unwrap();
        let tt = tensor_permutation(&[d.clone(), c.clone()], &[1, 0]).unwrap();
        for deg in 0..=3 {
            for k in cd.basis(deg) {
                let back = tt.apply_lc(&t.apply(k, deg), deg);
                assert_eq!(back, LinComb::basis(k.clone()));
            }
        }
        for (n, m) in [(1, 1), (1, 2), (-1, 1), (2, -1)] {
            suspension_interchange(&c, &d, n, m).unwrap();
        }
        assert_eq!(koszul_sign(&[1, 1], &[1, 0]), -1);
        assert_eq!(koszul_sign(&[1, 2, 1], &[2, 1, 0]), -1);
    }

    #[test]
    fn suspension_signs() {
        let c = chains_of::<i64>(fixtures::simplex(1), 2).unwrap();
        let s = c.suspend(1);
        assert_eq!(s.window(), (1, 3));
        let e = &c.basis(1)[1]; // the edge (0,1)
        assert_eq!(s.diff(e, 2), c.diff(e, 1).neg());
    }

    #[test]
    fn ez_examples() {
        // p = 0: one term with sign +1
        let s = shuffles(&[0, 2]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].sign, 1);
        // p = q = 1: two terms, the classical triangulation of the square
        let s = shuffles(&[1, 1]);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].maps[0].images(), &[1, 2, 2]);
        assert_eq!(s[0].maps[1].images(), &[1, 1, 2]);
        assert_eq!(s[0].sign, 1);
        assert_eq!(s[1].sign, -1);
        let i: PresheafRef = fixtures::simplex(1);
        let m = ez_shuffle::<i64>(&[i.clone(), i.clone()], 3).unwrap();
        assert!(m.checked > 0);
    }

    #[test]
    fn ez_associative() {
        // left-nested binary shuffles recover the multi-shuffle
        for dims in [[1usize, 1, 1], [2, 1, 1], [1, 2, 1], [2, 2, 1]] {
            let direct = shuffles(&dims);
            let ab = shuffles(&dims[..2]);
            let n = dims[0] + dims[1];
            let abc = shuffles(&[n, dims[2]]);
            let mut nested: Vec<(i64, Vec<Vec<u32>>)> = Vec::new();
            for outer in abc.iter() {
                for inner in ab.iter() {
                    let a = inner.maps[0].compose(&outer.maps[0]).unwrap();
                    let b = inner.maps[1].compose(&outer.maps[0]).unwrap();
                    nested.push((outer.sign * inner.sign, vec![a.images().to_vec(), b.images().to_vec(), outer.maps[1].images().to_vec()]));
                }
            }
            let mut flat: Vec<(i64, Vec<Vec<u32>>)> =
                direct.iter().map(|s| (s.sign, s.maps.iter().map(|m| m.images().to_vec()).collect())).collect();
            nested.sort();
            flat.sort();
            assert_eq!(nested, flat);
        }
    }

    #[test]
    fn sign_map_properties() {
        let o2 = standard_object(Variance::O, 2);
        let s = sign_map::<i64>(&PresheafPair::absolute(o2.clone()), 4).unwrap();
        assert!(s.checked > 0);
        // sgn(d₁τ) = +1 for τ ∈ Σ₂
        let tau = Perm::new(vec![2, 1]).unwrap();
        assert_eq!(tau.delete(1).sign(), 1);
        check_sign_quasi_iso(&boundary(Variance::O, 2), 4).unwrap();
        check_sign_quasi_iso(&PresheafPair::augmentation_pair(augment(fixtures::circle()).unwrap()), 3).unwrap();
        check_sign_symmetry(o2.clone(), standard_object(Variance::O, 1), 4).unwrap();
        let _ = forget;
    }
}
