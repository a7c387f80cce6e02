//! Exact linear algebra for homology: ranks over fields and Smith normal
//! form over ℤ.
//!
//! Integer matrices coming from chain complexes here are sparse with tiny
//! entries, so elimination first pivots greedily on unit entries in `i64`
//! (checked), and only the leftover block goes through a dense `BigInt`
//! Smith normal form.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Field, Ring};

/// Column-major sparse matrix: `cols[j]` lists `(row, value)` with nonzero values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<R> {
    pub rows: usize,
    pub cols: Vec<Vec<(usize, R)>>,
}

impl<R: Ring> SparseMatrix<R> {
    pub fn zeros(rows: usize, ncols: usize) -> Self {
        SparseMatrix { rows, cols: vec![Vec::new(); ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix<R>) -> SparseMatrix<R> {
        assert_eq!(self.ncols(), other.rows, "shape mismatch");
        let mut out = SparseMatrix::zeros(self.rows, other.ncols());
        for (j, col) in other.cols.iter().enumerate() {
            let mut acc: BTreeMap<usize, R> = BTreeMap::new();
            for (k, v) in col {
                for (i, w) in &self.cols[*k] {
                    let e = acc.entry(*i).or_insert_with(R::zero);
                    *e = e.clone() + w.clone() * v.clone();
                }
            }
            out.cols[j] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    /// Triplets `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, R)> {
        let mut out = Vec::new();
        for (j, col) in self.cols.iter().enumerate() {
            let mut c = col.clone();
            c.sort_by_key(|(i, _)| *i);
            for (i, v) in c {
                out.push((i, j, v));
            }
        }
        out
    }
}

/// Rank over a field by Gaussian elimination on sparse rows.
pub fn rank_field<F: Field>(m: &SparseMatrix<F>) -> usize {
    // work with columns as sparse vectors keyed by row; pivot on the lowest row index
    let mut pivots: BTreeMap<usize, BTreeMap<usize, F>> = BTreeMap::new();
    let mut rank = 0;
    for col in &m.cols {
        let mut v: BTreeMap<usize, F> = col.iter().cloned().collect();
        loop {
            let Some((&lead, lv)) = v.iter().next() else { break };
            let lv = lv.clone();
            match pivots.get(&lead) {
                Some(p) => {
                    // v -= (lv / p[lead]) * p
                    let factor = lv * p[&lead].inverse().expect("nonzero pivot");
                    for (i, w) in p {
                        let e = v.entry(*i).or_insert_with(F::zero);
                        *e = e.clone() - factor.clone() * w.clone();
                        if e.is_zero() {
                            v.remove(i);
                        }
                    }
                }
                None => {
                    pivots.insert(lead, v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Result of a Smith normal form computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    /// Invariant factors `d₁ | d₂ | …`, all positive; entries equal to 1 included.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Smith normal form of an integer matrix.
pub fn smith_form(m: &SparseMatrix<i64>) -> SmithForm {
    match unit_pivot_reduce(m) {
        Some((units, rest)) => {
            let mut s = dense_smith(rest);
            let mut factors = vec![BigInt::one(); units];
            factors.append(&mut s.invariant_factors);
            SmithForm { rank: units + s.rank, invariant_factors: factors }
        }
        None => {
            let mut dense = vec![vec![BigInt::zero(); m.ncols()]; m.rows];
            for (j, col) in m.cols.iter().enumerate() {
                for (i, v) in col {
                    dense[*i][j] = BigInt::from(*v);
                }
            }
            dense_smith(dense)
        }
    }
}

/// Greedy elimination on ±1 pivots. Returns the number of unit pivots and
/// the remaining dense block, or `None` on `i64` overflow.
fn unit_pivot_reduce(m: &SparseMatrix<i64>) -> Option<(usize, Vec<Vec<BigInt>>)> {
    // row-major working copy
    let mut rows: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); m.rows];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.ncols()];
    for (j, col) in m.cols.iter().enumerate() {
        for &(i, v) in col {
            if v != 0 {
                rows[i].insert(j, v);
                col_rows[j].insert(i);
            }
        }
    }
    let mut alive = vec![true; m.rows];
    let mut units = 0;
    loop {
        let mut order: Vec<usize> = (0..m.rows).filter(|&r| alive[r] && !rows[r].is_empty()).collect();
        order.sort_by_key(|&r| rows[r].len());
        let mut progress = false;
        for r in order {
            if !alive[r] || rows[r].is_empty() {
                continue;
            }
            // unit entry whose column is sparsest
            let Some(c) = rows[r]
                .iter()
                .filter(|(_, v)| v.abs() == 1)
                .map(|(c, _)| *c)
                .min_by_key(|c| col_rows[*c].len())
            else {
                continue;
            };
            let p = rows[r][&c];
            let pivot_row = std::mem::take(&mut rows[r]);
            let others: Vec<usize> = col_rows[c].iter().copied().filter(|&o| o != r).collect();
            for o in others {
                let a = rows[o][&c];
                let factor = a.checked_mul(p)?; // a / p with p = ±1
                for (&cc, &v) in &pivot_row {
                    let cur = rows[o].get(&cc).copied().unwrap_or(0);
                    let new = cur.checked_sub(factor.checked_mul(v)?)?;
                    if new == 0 {
                        rows[o].remove(&cc);
                        col_rows[cc].remove(&o);
                    } else {
                        if cur == 0 {
                            col_rows[cc].insert(o);
                        }
                        rows[o].insert(cc, new);
                    }
                }
            }
            for &cc in pivot_row.keys() {
                col_rows[cc].remove(&r);
            }
            // column c is now zero outside row r; clearing row r uses column ops only
            alive[r] = false;
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| alive[r] && !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.ncols()).filter(|&c| !col_rows[c].is_empty()).collect();
    let cidx: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (k, &r) in live_rows.iter().enumerate() {
        for (c, v) in &rows[r] {
            dense[k][cidx[c]] = BigInt::from(*v);
        }
    }
    Some((units, dense))
}

/// Dense Smith normal form by pivoting on the smallest nonzero entry.
pub fn dense_smith(mut a: Vec<Vec<BigInt>>) -> SmithForm {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut diag: Vec<BigInt> = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut done = true;
            // clear column t
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..ncols {
                    let v = &a[i][j] - &q * &a[t][j];
                    a[i][j] = v;
                }
                if !a[i][t].is_zero() {
                    done = false;
                }
            }
            // clear row t
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..nrows {
                    let v = &a[i][j] - &q * &a[i][t];
                    a[i][j] = v;
                }
                if !a[t][j].is_zero() {
                    done = false;
                }
            }
            if done {
                // divisibility of the trailing block
                let mut bad = None;
                'outer: for i in t + 1..nrows {
                    for j in t + 1..ncols {
                        if !(&a[i][j] % &a[t][t]).is_zero() {
                            bad = Some(i);
                            break 'outer;
                        }
                    }
                }
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..ncols {
                            let v = &a[t][j] + &a[i][j];
                            a[t][j] = v;
                        }
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..nrows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..ncols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    SmithForm { rank: diag.len(), invariant_factors: diag }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;

    fn from_dense(rows: &[&[i64]]) -> SparseMatrix<i64> {
        let nrows = rows.len();
        let ncols = rows[0].len();
        let mut m = SparseMatrix::zeros(nrows, ncols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if v != 0 {
                    m.cols[j].push((i, v));
                }
            }
        }
        m
    }

    #[test]
    fn smith_small() {
        let m = from_dense(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_form(&m);
        assert_eq!(s.invariant_factors, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let m = from_dense(&[&[1, 1], &[1, -1]]);
        assert_eq!(smith_form(&m).torsion(), vec![BigInt::from(2)]);
        let z = SparseMatrix::<i64>::zeros(3, 2);
        assert_eq!(smith_form(&z).rank, 0);
    }

    #[test]
    fn smith_matches_determinant() {
        // product of invariant factors equals |det| for a nonsingular matrix
        let m = from_dense(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let s = smith_form(&m);
        let prod: BigInt = s.invariant_factors.iter().product();
        assert_eq!(prod, BigInt::from(90));
        assert_eq!(s.rank, 3);
    }

    #[test]
    fn field_rank() {
        let m = from_dense(&[&[1, 1], &[1, -1]]);
        let m2: SparseMatrix<Fp<2>> = SparseMatrix {
            rows: 2,
            cols: m.cols.iter().map(|c| c.iter().map(|(i, v)| (*i, Fp::<2>::new(*v))).filter(|(_, v)| !v.is_zero()).collect()).collect(),
        };
        assert_eq!(rank_field(&m2), 1);
        let m3: SparseMatrix<Fp<3>> = SparseMatrix {
            rows: 2,
            cols: m.cols.iter().map(|c| c.iter().map(|(i, v)| (*i, Fp::<3>::new(*v))).collect()).collect(),
        };
        assert_eq!(rank_field(&m3), 2);
    }

    #[test]
    fn product_shape() {
        let a = from_dense(&[&[1, 2], &[0, 1]]);
        let b = from_dense(&[&[1], &[1]]);
        let c = a.mul(&b);
        assert_eq!(c.cols[0], vec![(0, 3), (1, 1)]);
    }
}
