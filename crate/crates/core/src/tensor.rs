//! Dense component arrays over a chart.
//!
//! Every index ranges over `0..n`; the rank is the number of indices. The
//! last index varies fastest in storage.

use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<S> {
    dim: usize,
    rank: usize,
    data: Vec<S>,
}

impl<S> Tensor<S> {
    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> S) -> Self {
        let len = dim.pow(rank as u32);
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0usize; rank];
        for _ in 0..len {
            data.push(f(&idx));
            increment(&mut idx, dim);
        }
        Tensor { dim, rank, data }
    }

    pub fn try_from_fn<E>(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> Result<S, E>) -> Result<Self, E> {
        let len = dim.pow(rank as u32);
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0usize; rank];
        for _ in 0..len {
            data.push(f(&idx)?);
            increment(&mut idx, dim);
        }
        Ok(Tensor { dim, rank, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    /// Iterates `(multi_index, value)` in storage order.
    pub fn indexed(&self) -> impl Iterator<Item = (Vec<usize>, &S)> {
        let dim = self.dim;
        let rank = self.rank;
        self.data.iter().enumerate().map(move |(mut flat, v)| {
            let mut idx = vec![0; rank];
            for slot in idx.iter_mut().rev() {
                *slot = flat % dim;
                flat /= dim;
            }
            (idx, v)
        })
    }

    pub fn map<T>(&self, f: impl FnMut(&S) -> T) -> Tensor<T> {
        Tensor { dim: self.dim, rank: self.rank, data: self.data.iter().map(f).collect() }
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.rank, "index arity does not match tensor rank");
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }
}

fn increment(idx: &mut [usize], dim: usize) {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < dim {
            return;
        }
        *slot = 0;
    }
}

impl<S: Scalar> Tensor<S> {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Self::from_fn(dim, rank, |_| S::zero())
    }

    /// Plain values of every component.
    pub fn values(&self) -> Tensor<f64> {
        self.map(|s| s.value())
    }
}

impl Tensor<f64> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Position and value of the largest component in absolute value.
    pub fn argmax_abs(&self) -> (Vec<usize>, f64) {
        let mut best = (vec![0; self.rank], 0.0f64);
        for (idx, v) in self.indexed() {
            if v.abs() > best.1.abs() {
                best = (idx, *v);
            }
        }
        best
    }

    pub fn max_abs_diff(&self, other: &Tensor<f64>) -> f64 {
        assert_eq!((self.dim, self.rank), (other.dim, other.rank));
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn scaled(&self, c: f64) -> Tensor<f64> {
        self.map(|v| v * c)
    }
}

impl<S> Index<&[usize]> for Tensor<S> {
    type Output = S;
    fn index(&self, idx: &[usize]) -> &S {
        &self.data[self.offset(idx)]
    }
}

impl<S> IndexMut<&[usize]> for Tensor<S> {
    fn index_mut(&mut self, idx: &[usize]) -> &mut S {
        let o = self.offset(idx);
        &mut self.data[o]
    }
}

impl<S, const N: usize> Index<[usize; N]> for Tensor<S> {
    type Output = S;
    fn index(&self, idx: [usize; N]) -> &S {
        &self.data[self.offset(&idx)]
    }
}

impl<S, const N: usize> IndexMut<[usize; N]> for Tensor<S> {
    fn index_mut(&mut self, idx: [usize; N]) -> &mut S {
        let o = self.offset(&idx);
        &mut self.data[o]
    }
}

/// Sum of `f(k)` over `k in 0..n`.
pub(crate) fn sum<S: Scalar>(n: usize, mut f: impl FnMut(usize) -> S) -> S {
    let mut acc = S::zero();
    for k in 0..n {
        acc = acc + f(k);
    }
    acc
}

/// Splits a tensor of first-order duals into its values and a tensor with
/// one extra trailing derivative index.
pub(crate) fn split_dual<T: Scalar>(t: &Tensor<crate::scalar::Dual<T>>) -> (Tensor<T>, Tensor<T>) {
    let dim = t.dim();
    let values = t.map(|d| d.value_part().clone());
    let derivs = Tensor::from_fn(dim, t.rank() + 1, |idx| {
        let (head, k) = idx.split_at(idx.len() - 1);
        t[head].partial(k[0])
    });
    (values, derivs)
}
