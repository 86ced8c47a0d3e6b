//! Finite-dimensional Lie algebras given by structure constants, and the
//! adapted splitting `𝔊 = V ∔ 𝔥` with its two projections.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Element of the algebra in the fixed basis `e_1..e_N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgVec<T> {
    coords: Vec<T>,
}

impl<T: Scalar> AlgVec<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { coords: vec![T::zero(); dim] }
    }

    /// The basis vector `e_{index+1}` (indices are 0-based in code).
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[index] = T::one();
        v
    }

    pub fn from_coords(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Nonzero coordinates as `(index, value)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (usize, &T)> {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self { coords: self.coords.iter().map(|c| c.clone() * factor.clone()).collect() }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, factor: &T, other: &Self) {
        debug_assert_eq!(self.dim(), other.dim());
        if factor.is_zero() {
            return;
        }
        let (one, minus_one) = (factor.is_one(), (-factor.clone()).is_one());
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            if b.is_zero() {
                continue;
            }
            let old = std::mem::replace(a, T::zero());
            *a = if one {
                old + b.clone()
            } else if minus_one {
                old - b.clone()
            } else {
                old + factor.clone() * b.clone()
            };
        }
    }

    /// Maps every coordinate into another scalar type.
    pub fn map<S: Scalar>(&self, f: impl Fn(&T) -> S) -> AlgVec<S> {
        AlgVec { coords: self.coords.iter().map(f).collect() }
    }
}

impl<T> Index<usize> for AlgVec<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.coords[i]
    }
}

impl<T> IndexMut<usize> for AlgVec<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.coords[i]
    }
}

impl<T: Scalar> Add for &AlgVec<T> {
    type Output = AlgVec<T>;
    fn add(self, rhs: Self) -> AlgVec<T> {
        let mut out = self.clone();
        out.add_scaled(&T::one(), rhs);
        out
    }
}

impl<T: Scalar> Sub for &AlgVec<T> {
    type Output = AlgVec<T>;
    fn sub(self, rhs: Self) -> AlgVec<T> {
        let mut out = self.clone();
        out.add_scaled(&-T::one(), rhs);
        out
    }
}

impl<T: Scalar> Neg for &AlgVec<T> {
    type Output = AlgVec<T>;
    fn neg(self) -> AlgVec<T> {
        self.scale(&-T::one())
    }
}

impl<T: Scalar> fmt::Display for AlgVec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Lie algebra given by dense structure constants `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
///
/// Construction does not validate; call [`LieAlgebra::antisymmetry_violation`]
/// and [`LieAlgebra::jacobi_violation`] (or [`Split::validate`]) before trusting it.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<T> {
    dim: usize,
    constants: Vec<T>,
    // nonzero constants per (i, j) pair, for sparse brackets
    table: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> LieAlgebra<T> {
    /// The abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Self {
        Self::from_dense(dim, vec![T::zero(); dim * dim * dim])
    }

    /// Builds from a dense array indexed `(i * dim + j) * dim + k`.
    pub fn from_dense(dim: usize, constants: Vec<T>) -> Self {
        assert_eq!(constants.len(), dim * dim * dim, "need dim³ structure constants");
        let mut table = vec![Vec::new(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let c = &constants[(i * dim + j) * dim + k];
                    if !c.is_zero() {
                        table[i * dim + j].push((k, c.clone()));
                    }
                }
            }
        }
        Self { dim, constants, table }
    }

    /// Sets exactly the listed `c[i][j][k]` (0-based); everything else is zero.
    pub fn from_raw_entries(dim: usize, entries: &[(usize, usize, usize, T)]) -> Self {
        let mut constants = vec![T::zero(); dim * dim * dim];
        for (i, j, k, c) in entries {
            constants[(i * dim + j) * dim + k] = c.clone();
        }
        Self::from_dense(dim, constants)
    }

    /// Sets `c[i][j][k] = c` and `c[j][i][k] = -c` for every listed entry (0-based).
    pub fn from_brackets(dim: usize, entries: &[(usize, usize, usize, T)]) -> Self {
        let mut constants = vec![T::zero(); dim * dim * dim];
        for (i, j, k, c) in entries {
            constants[(i * dim + j) * dim + k] = c.clone();
            constants[(j * dim + i) * dim + k] = -c.clone();
        }
        Self::from_dense(dim, constants)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &T {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn dense_constants(&self) -> &[T] {
        &self.constants
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    /// `[x, y]`; panics on dimension mismatch (see [`LieAlgebra::try_bracket`]).
    pub fn bracket(&self, x: &AlgVec<T>, y: &AlgVec<T>) -> AlgVec<T> {
        self.try_bracket(x, y).expect("bracket operands must live in the algebra")
    }

    pub fn try_bracket(&self, x: &AlgVec<T>, y: &AlgVec<T>) -> Result<AlgVec<T>> {
        for v in [x, y] {
            if v.dim() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: v.dim() });
            }
        }
        let mut out = AlgVec::zeros(self.dim);
        self.accumulate_bracket(&T::one(), x, y, &mut out);
        Ok(out)
    }

    /// `out += factor * [x, y]`.
    pub(crate) fn accumulate_bracket(&self, factor: &T, x: &AlgVec<T>, y: &AlgVec<T>, out: &mut AlgVec<T>) {
        for (i, xi) in x.support() {
            for (j, yj) in y.support() {
                let row = &self.table[i * self.dim + j];
                if row.is_empty() {
                    continue;
                }
                let w = factor.clone() * xi.clone() * yj.clone();
                for (k, c) in row {
                    out[*k] = out[*k].clone() + w.clone() * c.clone();
                }
            }
        }
    }

    /// First `(i, j, k)` (0-based) with `c[i][j][k] != -c[j][i][k]`.
    pub fn antisymmetry_violation(&self) -> Option<[usize; 3]> {
        for i in 0..self.dim {
            for j in i..self.dim {
                for k in 0..self.dim {
                    let a = self.constant(i, j, k);
                    let b = self.constant(j, i, k);
                    if *a != -b.clone() {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    /// First basis triple (0-based) whose cyclic Jacobi sum is nonzero.
    pub fn jacobi_violation(&self) -> Option<[usize; 3]> {
        let n = self.dim;
        let e = |i| AlgVec::<T>::basis(n, i);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut sum = AlgVec::zeros(n);
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let ab = self.bracket(&e(a), &e(b));
                        self.accumulate_bracket(&T::one(), &ab, &e(c), &mut sum);
                    }
                    if !sum.is_zero() {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    /// Re-expresses the constants in another scalar type.
    pub fn map_scalars<S: Scalar>(&self, f: impl Fn(&T) -> S) -> LieAlgebra<S> {
        LieAlgebra::from_dense(self.dim, self.constants.iter().map(f).collect())
    }
}

/// Adapted splitting: `V = span{e_1..e_n}`, `𝔥 = span{e_(n+1)..e_N}`.
///
/// `n = N` (trivial `𝔥`) is allowed and makes the loop the group itself.
#[derive(Clone, Debug, PartialEq)]
pub struct Split<T> {
    algebra: LieAlgebra<T>,
    v_dim: usize,
}

/// One pass/fail line of a model validation. Witnesses are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelCheck {
    pub name: &'static str,
    pub witness: Option<[usize; 3]>,
}

impl ModelCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<ModelCheck>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(ModelCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&ModelCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One-line summary of the failing checks.
    pub fn failure_summary(&self) -> String {
        self.checks
            .iter()
            .filter_map(|c| {
                c.witness.map(|[i, j, k]| format!("{} fails at ({}, {}, {})", c.name, i + 1, j + 1, k + 1))
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl<T: Scalar> Split<T> {
    pub fn new(algebra: LieAlgebra<T>, v_dim: usize) -> Result<Self> {
        if v_dim == 0 || v_dim > algebra.dim() {
            return Err(Error::SplitOutOfRange { v_dim, dim: algebra.dim() });
        }
        Ok(Self { algebra, v_dim })
    }

    pub fn algebra(&self) -> &LieAlgebra<T> {
        &self.algebra
    }

    /// `n = dim V`.
    pub fn v_dim(&self) -> usize {
        self.v_dim
    }

    /// `N = dim 𝔊`.
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn h_is_trivial(&self) -> bool {
        self.v_dim == self.dim()
    }

    /// `Π`: projection onto `V` along `𝔥`.
    pub fn proj_v(&self, x: &AlgVec<T>) -> AlgVec<T> {
        let mut out = x.clone();
        for c in out.coords.iter_mut().skip(self.v_dim) {
            *c = T::zero();
        }
        out
    }

    /// `Λ`: projection onto `𝔥` along `V`.
    pub fn proj_h(&self, x: &AlgVec<T>) -> AlgVec<T> {
        let mut out = x.clone();
        for c in out.coords.iter_mut().take(self.v_dim) {
            *c = T::zero();
        }
        out
    }

    pub fn bracket(&self, x: &AlgVec<T>, y: &AlgVec<T>) -> AlgVec<T> {
        self.algebra.bracket(x, y)
    }

    /// `Π[x, y]`.
    pub fn pi_bracket(&self, x: &AlgVec<T>, y: &AlgVec<T>) -> AlgVec<T> {
        self.proj_v(&self.bracket(x, y))
    }

    /// Basis vector `e_{i+1}` of `𝔊`.
    pub fn basis(&self, i: usize) -> AlgVec<T> {
        AlgVec::basis(self.dim(), i)
    }

    pub fn in_v(&self, x: &AlgVec<T>) -> bool {
        x.coords().iter().skip(self.v_dim).all(|c| c.is_zero())
    }

    pub fn in_h(&self, x: &AlgVec<T>) -> bool {
        x.coords().iter().take(self.v_dim).all(|c| c.is_zero())
    }

    /// First `(i, j, k)` with `i, j ∈ 𝔥`, `k ∈ V` and `c[i][j][k] != 0`.
    pub fn subalgebra_violation(&self) -> Option<[usize; 3]> {
        let (n, dim) = (self.v_dim, self.dim());
        for i in n..dim {
            for j in n..dim {
                for k in 0..n {
                    if !self.algebra.constant(i, j, k).is_zero() {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport {
            checks: vec![
                ModelCheck { name: "antisymmetry", witness: self.algebra.antisymmetry_violation() },
                ModelCheck { name: "jacobi", witness: self.algebra.jacobi_violation() },
                ModelCheck { name: "h-subalgebra", witness: self.subalgebra_violation() },
            ],
        }
    }

    /// Errors unless every standing assumption holds.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.all_pass() {
            Ok(())
        } else {
            Err(Error::InvalidModel(report.failure_summary()))
        }
    }

    pub fn map_scalars<S: Scalar>(&self, f: impl Fn(&T) -> S) -> Split<S> {
        Split { algebra: self.algebra.map_scalars(f), v_dim: self.v_dim }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn sl2() -> LieAlgebra<Rat> {
        // e1 = E, e2 = F, e3 = H
        LieAlgebra::from_brackets(
            3,
            &[(0, 1, 2, Rat::int(1)), (2, 0, 0, Rat::int(2)), (2, 1, 1, Rat::int(-2))],
        )
    }

    fn e(i: usize) -> AlgVec<Rat> {
        AlgVec::basis(3, i)
    }

    #[test]
    fn sl2_brackets() {
        let g = sl2();
        assert_eq!(g.bracket(&e(0), &e(1)), e(2));
        assert_eq!(g.bracket(&e(2), &e(0)), e(0).scale(&Rat::int(2)));
        let x = AlgVec::from_coords(vec![Rat::frac(1, 3), Rat::int(-2), Rat::frac(5, 7)]);
        assert!(g.bracket(&x, &x).is_zero());
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let g = sl2();
        let err = g.try_bracket(&e(0), &AlgVec::basis(2, 0)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, found: 2 });
    }

    #[test]
    fn sl2_validates() {
        let split = Split::new(sl2(), 2).unwrap();
        assert!(split.validate().all_pass());
    }

    #[test]
    fn antisymmetry_failure_is_reported() {
        let g = LieAlgebra::from_raw_entries(3, &[(0, 1, 2, Rat::int(1)), (1, 0, 2, Rat::int(1))]);
        assert_eq!(g.antisymmetry_violation(), Some([0, 1, 2]));
    }

    #[test]
    fn subalgebra_check() {
        // reorder so that 𝔥 = span{E, H} sits last: basis (F, E, H)
        let g = LieAlgebra::from_brackets(
            3,
            &[(1, 0, 2, Rat::int(1)), (2, 1, 1, Rat::int(2)), (2, 0, 0, Rat::int(-2))],
        );
        assert!(Split::new(g, 1).unwrap().subalgebra_violation().is_none());
        // 𝔥 = span{E, F}: [E, F] = H ∉ 𝔥, basis (H, E, F)
        let g = LieAlgebra::from_brackets(
            3,
            &[(1, 2, 0, Rat::int(1)), (0, 1, 1, Rat::int(2)), (0, 2, 2, Rat::int(-2))],
        );
        assert_eq!(Split::new(g, 1).unwrap().subalgebra_violation(), Some([1, 2, 0]));
    }

    #[test]
    fn jacobi_failure_is_reported() {
        // [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e3 breaks Jacobi
        let g = LieAlgebra::from_brackets(
            3,
            &[(0, 1, 2, Rat::int(1)), (1, 2, 0, Rat::int(1)), (2, 0, 2, Rat::int(1))],
        );
        assert!(g.jacobi_violation().is_some());
    }

    #[test]
    fn projections() {
        let split = Split::new(sl2(), 2).unwrap();
        assert!(split.proj_v(&e(2)).is_zero());
        assert_eq!(split.proj_h(&e(2)), e(2));
        let x = AlgVec::from_coords(vec![Rat::int(1), Rat::frac(-1, 2), Rat::int(4)]);
        assert_eq!(&split.proj_v(&x) + &split.proj_h(&x), x);
    }

    #[test]
    fn split_range() {
        assert!(Split::new(sl2(), 0).is_err());
        assert!(Split::new(sl2(), 4).is_err());
        assert!(Split::new(sl2(), 3).unwrap().h_is_trivial());
    }
}
