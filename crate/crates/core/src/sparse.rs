//! Finitely supported complex functions on an ordered index set.

use std::collections::BTreeMap;

use num_complex::Complex64;

/// A function that is zero off a finite set. Explicit zeros are never stored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SparseVec<I: Ord> {
    entries: BTreeMap<I, Complex64>,
}

/// `c_f(ℕ⁺)`.
pub type FinSuppVector = SparseVec<u64>;

impl<I: Ord + Copy> SparseVec<I> {
    pub fn new() -> Self {
        SparseVec { entries: BTreeMap::new() }
    }

    /// Later duplicates overwrite earlier ones.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (I, Complex64)>) -> Self {
        let mut v = Self::new();
        for (i, z) in pairs {
            v.set(i, z);
        }
        v
    }

    pub fn delta(i: I) -> Self {
        Self::from_pairs([(i, Complex64::new(1.0, 0.0))])
    }

    pub fn set(&mut self, i: I, z: Complex64) {
        if z == Complex64::new(0.0, 0.0) {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, z);
        }
    }

    pub fn get(&self, i: I) -> Complex64 {
        self.entries.get(&i).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (I, Complex64)> + '_ {
        self.entries.iter().map(|(&i, &z)| (i, z))
    }

    pub fn support(&self) -> impl Iterator<Item = I> + '_ {
        self.entries.keys().copied()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entrywise product; the support is the intersection.
    pub fn pointwise_mul(&self, other: &Self) -> Self {
        let (small, large) = if self.nnz() <= other.nnz() { (self, other) } else { (other, self) };
        Self::from_pairs(small.iter().filter_map(|(i, a)| large.entries.get(&i).map(|&b| (i, a * b))))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, z) in other.iter() {
            out.set(i, out.get(i) + z);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, z) in other.iter() {
            out.set(i, out.get(i) - z);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_pairs(self.iter().map(|(i, z)| (i, c * z)))
    }

    /// `max |f|`.
    pub fn sup_abs(&self) -> f64 {
        self.entries.values().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `Σ |f|`.
    pub fn l1_abs(&self) -> f64 {
        self.entries.values().map(|z| z.norm()).sum()
    }
}

impl<I: Ord + Copy> FromIterator<(I, Complex64)> for SparseVec<I> {
    fn from_iter<T: IntoIterator<Item = (I, Complex64)>>(iter: T) -> Self {
        Self::from_pairs(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn v(xs: &[f64]) -> FinSuppVector {
        xs.iter().enumerate().map(|(i, &x)| (i as u64 + 1, c(x))).collect()
    }

    #[test]
    fn pointwise_product() {
        assert_eq!(v(&[1.0, 2.0, 0.0]).pointwise_mul(&v(&[3.0, 0.0, 1.0])), v(&[3.0]));
        let f = v(&[1.0, 2.0, 3.0]);
        assert_eq!(f.pointwise_mul(&FinSuppVector::delta(2)), FinSuppVector::from_pairs([(2, c(2.0))]));
        assert!(f.pointwise_mul(&FinSuppVector::new()).is_zero());
    }

    #[test]
    fn zeros_are_dropped() {
        let f = v(&[1.0, 0.0, 2.0]);
        assert_eq!(f.nnz(), 2);
        assert!(f.sub(&f).is_zero());
        assert_eq!(f.sup_abs(), 2.0);
        assert_eq!(f.l1_abs(), 3.0);
    }
}
