//! Finite formal linear combinations with deterministic (ordered) storage.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Ring;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinComb<K: Ord, R> {
    terms: BTreeMap<K, R>,
}

impl<K: Ord + Clone, R: Ring> Default for LinComb<K, R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Ord + Clone, R: Ring> LinComb<K, R> {
    pub fn zero() -> Self {
        LinComb { terms: BTreeMap::new() }
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, R::one())
    }

    pub fn term(k: K, c: R) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c);
        out
    }

    pub fn add_term(&mut self, k: K, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&k);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &R) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone() * c.clone());
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-R::one()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &(-R::one()));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &K) -> R {
        self.terms.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &R)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Linear extension of `f` on basis elements.
    pub fn flat_map<K2: Ord + Clone, F>(&self, mut f: F) -> LinComb<K2, R>
    where
        F: FnMut(&K) -> LinComb<K2, R>,
    {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }

    /// Relabel basis elements; `None` sends a term to zero.
    pub fn map_keys<K2: Ord + Clone, F>(&self, mut f: F) -> LinComb<K2, R>
    where
        F: FnMut(&K) -> Option<K2>,
    {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            if let Some(k2) = f(k) {
                out.add_term(k2, c.clone());
            }
        }
        out
    }

    /// Change of coefficients along a ring map.
    pub fn map_coeffs<R2: Ring, F: Fn(&R) -> R2>(&self, f: F) -> LinComb<K, R2> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }

    pub fn filter<F: Fn(&K) -> bool>(&self, keep: F) -> Self {
        LinComb { terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (k.clone(), c.clone())).collect() }
    }
}

impl<K: Ord + Clone, R: Ring> FromIterator<(K, R)> for LinComb<K, R> {
    fn from_iter<I: IntoIterator<Item = (K, R)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<K: Ord + fmt::Debug, R: fmt::Display> fmt::Debug for LinComb<K, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}·{k:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation() {
        let mut a: LinComb<u32, i64> = LinComb::basis(1);
        a.add_term(2, 3);
        a.add_term(1, -1);
        assert_eq!(a.len(), 1);
        assert_eq!(a.coeff(&2), 3);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn flat_map_linear() {
        let a: LinComb<u32, i64> = [(1, 2), (2, 5)].into_iter().collect();
        let b = a.flat_map(|&k| LinComb::term(k % 2, 1));
        assert_eq!(b.coeff(&1), 2);
        assert_eq!(b.coeff(&0), 5);
    }
}
