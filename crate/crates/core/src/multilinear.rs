//! Dense multilinear maps over basis tuples.

use std::fmt;

use crate::algebra::AlgVec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Every index tuple of the given shape, in lexicographic order.
pub fn index_tuples(dims: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = dims.iter().product();
    (0..total).map(move |mut flat| {
        let mut idx = vec![0; dims.len()];
        for (slot, d) in dims.iter().enumerate().rev() {
            idx[slot] = flat % d;
            flat /= d;
        }
        idx
    })
}

/// Multilinear map `W_1 × … × W_k → 𝔊` stored as one output vector per basis tuple.
///
/// Slot `i` reads the first `slot_dims[i]` coordinates of its argument, so a
/// `V`-slot accepts full-length algebra vectors whose `𝔥` part vanishes.
#[derive(Clone, PartialEq)]
pub struct MultilinearMap<T> {
    slot_dims: Vec<usize>,
    out_dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> MultilinearMap<T> {
    pub fn zeros(slot_dims: Vec<usize>, out_dim: usize) -> Self {
        let len = slot_dims.iter().product::<usize>() * out_dim;
        Self { slot_dims, out_dim, data: vec![T::zero(); len] }
    }

    /// Map with `k` slots of the same dimension.
    pub fn uniform_zeros(arity: usize, slot_dim: usize, out_dim: usize) -> Self {
        Self::zeros(vec![slot_dim; arity], out_dim)
    }

    /// Tabulates `f` on every basis tuple.
    pub fn from_fn(slot_dims: Vec<usize>, out_dim: usize, mut f: impl FnMut(&[usize]) -> AlgVec<T>) -> Self {
        let mut map = Self::zeros(slot_dims, out_dim);
        let dims = map.slot_dims.clone();
        for idx in index_tuples(&dims) {
            let v = f(&idx);
            map.set(&idx, &v);
        }
        map
    }

    pub fn arity(&self) -> usize {
        self.slot_dims.len()
    }

    pub fn slot_dims(&self) -> &[usize] {
        &self.slot_dims
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// All coefficients, tuple-major in lexicographic order.
    pub fn coefficients(&self) -> &[T] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.slot_dims.len());
        let mut flat = 0;
        for (i, d) in idx.iter().zip(&self.slot_dims) {
            debug_assert!(i < d);
            flat = flat * d + i;
        }
        flat * self.out_dim
    }

    /// Output vector on the basis tuple `idx`.
    pub fn value(&self, idx: &[usize]) -> AlgVec<T> {
        AlgVec::from_coords(self.row(idx).to_vec())
    }

    pub fn row(&self, idx: &[usize]) -> &[T] {
        let o = self.offset(idx);
        &self.data[o..o + self.out_dim]
    }

    pub fn set(&mut self, idx: &[usize], value: &AlgVec<T>) {
        assert_eq!(value.dim(), self.out_dim, "output dimension");
        let o = self.offset(idx);
        self.data[o..o + self.out_dim].clone_from_slice(value.coords());
    }

    pub fn add_to(&mut self, idx: &[usize], value: &AlgVec<T>) {
        let o = self.offset(idx);
        for (a, b) in self.data[o..o + self.out_dim].iter_mut().zip(value.coords()) {
            *a = a.clone() + b.clone();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// Evaluates on arbitrary vectors by multilinear expansion.
    pub fn eval(&self, args: &[&AlgVec<T>]) -> AlgVec<T> {
        let mut out = AlgVec::zeros(self.out_dim);
        self.accumulate_eval(&T::one(), args, &mut out);
        out
    }

    pub fn try_eval(&self, args: &[&AlgVec<T>]) -> Result<AlgVec<T>> {
        if args.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: args.len() });
        }
        for (a, d) in args.iter().zip(&self.slot_dims) {
            if a.dim() < *d {
                return Err(Error::DimensionMismatch { expected: *d, found: a.dim() });
            }
        }
        Ok(self.eval(args))
    }

    /// `out += factor * self(args)`.
    pub fn accumulate_eval(&self, factor: &T, args: &[&AlgVec<T>], out: &mut AlgVec<T>) {
        assert_eq!(args.len(), self.arity(), "arity");
        let supports: Vec<Vec<(usize, T)>> = args
            .iter()
            .zip(&self.slot_dims)
            .map(|(a, d)| {
                debug_assert!(a.coords()[(*d).min(a.dim())..].iter().all(|c| c.is_zero()), "argument leaves its slot");
                a.coords()[..*d]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i, c.clone()))
                    .collect()
            })
            .collect();
        if supports.iter().any(Vec::is_empty) || factor.is_zero() {
            return;
        }
        let mut idx = vec![0usize; self.arity()];
        self.walk(&supports, 0, factor.clone(), &mut idx, out);
    }

    fn walk(&self, supports: &[Vec<(usize, T)>], slot: usize, weight: T, idx: &mut Vec<usize>, out: &mut AlgVec<T>) {
        if slot == supports.len() {
            let row = self.row(idx);
            let one = weight.is_one();
            for (k, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    let old = std::mem::replace(&mut out[k], T::zero());
                    out[k] = if one { old + c.clone() } else { old + weight.clone() * c.clone() };
                }
            }
            return;
        }
        for (i, c) in &supports[slot] {
            idx[slot] = *i;
            self.walk(supports, slot + 1, weight.clone() * c.clone(), idx, out);
        }
    }

    /// Averages over all permutations inside each group of slots.
    ///
    /// Slots in one group must share a dimension. Slots not mentioned are left alone.
    pub fn symmetrize(&self, groups: &[&[usize]]) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![(0..self.arity()).collect()];
        for group in groups {
            let group_perms = permutations(group.len());
            let mut next = Vec::with_capacity(perms.len() * group_perms.len());
            for base in &perms {
                for gp in &group_perms {
                    let mut p = base.clone();
                    for (pos, &src) in gp.iter().enumerate() {
                        p[group[pos]] = base[group[src]];
                    }
                    next.push(p);
                }
            }
            perms = next;
        }
        let weight = T::frac(1, perms.len() as i64);
        let dims = self.slot_dims.clone();
        Self::from_fn(dims, self.out_dim, |idx| {
            let mut acc = AlgVec::zeros(self.out_dim);
            for p in &perms {
                let permuted: Vec<usize> = p.iter().map(|&s| idx[s]).collect();
                acc.add_scaled(&T::one(), &self.value(&permuted));
            }
            acc.scale(&weight)
        })
    }

    /// The map `(x_0..x_{k-1}) ↦ self(x_{order[0]}, …, x_{order[k-1]})`.
    pub fn permute_slots(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.arity());
        let mut dims = vec![0; self.arity()];
        for (s, &p) in order.iter().enumerate() {
            dims[p] = self.slot_dims[s];
        }
        let mut out = Self::zeros(dims.clone(), self.out_dim);
        for idx in index_tuples(&dims) {
            let src: Vec<usize> = order.iter().map(|&p| idx[p]).collect();
            let v = self.value(&src);
            out.set(&idx, &v);
        }
        out
    }

    pub fn combine(&self, alpha: &T, other: &Self, beta: &T) -> Self {
        assert_eq!(self.slot_dims, other.slot_dims, "shape");
        assert_eq!(self.out_dim, other.out_dim, "shape");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| alpha.clone() * a.clone() + beta.clone() * b.clone())
            .collect();
        Self { slot_dims: self.slot_dims.clone(), out_dim: self.out_dim, data }
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self {
            slot_dims: self.slot_dims.clone(),
            out_dim: self.out_dim,
            data: self.data.iter().map(|c| c.clone() * factor.clone()).collect(),
        }
    }

    pub fn map_scalars<S: Scalar>(&self, f: impl Fn(&T) -> S) -> MultilinearMap<S> {
        MultilinearMap { slot_dims: self.slot_dims.clone(), out_dim: self.out_dim, data: self.data.iter().map(f).collect() }
    }

    /// First basis tuple where the two maps differ.
    pub fn first_difference(&self, other: &Self) -> Option<Vec<usize>> {
        assert_eq!(self.slot_dims, other.slot_dims, "shape");
        index_tuples(&self.slot_dims).find(|idx| self.row(idx) != other.row(idx))
    }

    /// Nonzero entries in lexicographic index order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, AlgVec<T>)> + '_ {
        index_tuples(&self.slot_dims)
            .map(|idx| {
                let v = self.value(&idx);
                (idx, v)
            })
            .filter(|(_, v)| !v.is_zero())
    }
}

impl<T: Scalar> fmt::Debug for MultilinearMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultilinearMap{:?}->{} {{", self.slot_dims, self.out_dim)?;
        for (idx, v) in self.entries() {
            write!(f, " {idx:?}: {v}")?;
        }
        write!(f, " }}")
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for smaller in permutations(k - 1) {
        for pos in 0..k {
            let mut p = smaller.clone();
            p.insert(pos, k - 1);
            out.push(p);
        }
    }
    out
}
