//! Truncated formal series: algebra-valued polynomials of total degree ≤ 4
//! in the coordinates of one or two vector variables, optionally carrying a
//! nilpotent formal parameter `t` (`t² = 0`, counted as degree one).
//!
//! A series is stored as a map from monomials to coefficient vectors. The
//! polarized (symmetrized) coefficient tensor of any homogeneous component is
//! recovered with [`Series::tensor`], and the two views are in bijection, so
//! coefficientwise equality of monomials is the canonical series equality.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{AlgVec, LieAlgebra, Split};
use crate::error::{Error, Result};
use crate::multilinear::{index_tuples, MultilinearMap};
use crate::scalar::Scalar;

/// Highest total degree kept by every series operation.
pub const TRUNCATION: u32 = 4;

const NIBBLE: u32 = 4;
const MAX_VARS: usize = 128 / NIBBLE as usize;

/// Largest `dim V` the solver accepts: two argument blocks plus a parameter.
pub const MAX_V_DIM: usize = (MAX_VARS - 1) / 2;

/// Variable layout: `x^1..x^a`, then `y^1..y^b`, then optionally `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarSpace {
    pub x: usize,
    pub y: usize,
    pub param: bool,
}

impl VarSpace {
    pub fn new(x: usize, y: usize, param: bool) -> Self {
        let space = Self { x, y, param };
        assert!(space.var_count() <= MAX_VARS, "at most {MAX_VARS} scalar variables");
        space
    }

    /// Two vector variables ranging over `V = span{e_1..e_n}`.
    pub fn pair(n: usize) -> Self {
        Self::new(n, n, false)
    }

    pub fn with_param(self) -> Self {
        Self::new(self.x, self.y, true)
    }

    pub fn without_param(self) -> Self {
        Self::new(self.x, self.y, false)
    }

    pub fn var_count(&self) -> usize {
        self.x + self.y + usize::from(self.param)
    }

    pub fn x_var(&self, i: usize) -> usize {
        assert!(i < self.x);
        i
    }

    pub fn y_var(&self, i: usize) -> usize {
        assert!(i < self.y);
        self.x + i
    }

    pub fn param_var(&self) -> usize {
        assert!(self.param, "space has no formal parameter");
        self.x + self.y
    }
}

/// Packed exponent vector, four bits per variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(v: usize) -> Self {
        debug_assert!(v < MAX_VARS);
        Monomial(1u128 << (NIBBLE as usize * v))
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut m = Monomial::ONE;
        for (v, &e) in exps.iter().enumerate() {
            assert!(e <= TRUNCATION);
            m.0 |= (e as u128) << (NIBBLE as usize * v);
        }
        m
    }

    pub fn exponent(&self, v: usize) -> u32 {
        ((self.0 >> (NIBBLE as usize * v)) & 0xF) as u32
    }

    pub fn degree(&self) -> u32 {
        let mut m = self.0;
        let mut d = 0;
        while m != 0 {
            d += (m & 0xF) as u32;
            m >>= NIBBLE;
        }
        d
    }

    /// Degree in the variables `start..end`.
    pub fn degree_in(&self, start: usize, end: usize) -> u32 {
        (start..end).map(|v| self.exponent(v)).sum()
    }

    /// Unchecked product (exponents add); callers truncate.
    fn mul_raw(self, other: Monomial) -> Monomial {
        Monomial(self.0 + other.0)
    }

    fn exponents(&self, count: usize) -> Vec<u32> {
        (0..count).map(|v| self.exponent(v)).collect()
    }
}

/// Algebra-valued truncated polynomial map.
#[derive(Clone, PartialEq)]
pub struct Series<T> {
    space: VarSpace,
    dim: usize,
    terms: BTreeMap<Monomial, AlgVec<T>>,
}

impl<T: Scalar> Series<T> {
    pub fn zero(space: VarSpace, dim: usize) -> Self {
        Self { space, dim, terms: BTreeMap::new() }
    }

    pub fn constant(space: VarSpace, value: AlgVec<T>) -> Self {
        Self::term(space, Monomial::ONE, value)
    }

    /// A single term `monomial · value` (dropped if it exceeds the truncation).
    pub fn term(space: VarSpace, monomial: Monomial, value: AlgVec<T>) -> Self {
        let mut s = Self::zero(space, value.dim());
        if s.admissible(monomial) && !value.is_zero() {
            s.terms.insert(monomial, value);
        }
        s
    }

    /// `x̄ = Σ_i x^i e_i` in an algebra of dimension `dim`.
    pub fn x_bar(space: VarSpace, dim: usize) -> Self {
        assert!(space.x <= dim);
        let mut s = Self::zero(space, dim);
        for i in 0..space.x {
            s.terms.insert(Monomial::var(space.x_var(i)), AlgVec::basis(dim, i));
        }
        s
    }

    /// `ȳ = Σ_i y^i e_i`.
    pub fn y_bar(space: VarSpace, dim: usize) -> Self {
        assert!(space.y <= dim);
        let mut s = Self::zero(space, dim);
        for i in 0..space.y {
            s.terms.insert(Monomial::var(space.y_var(i)), AlgVec::basis(dim, i));
        }
        s
    }

    /// `t · value`.
    pub fn param_times(space: VarSpace, value: AlgVec<T>) -> Self {
        Self::term(space, Monomial::var(space.param_var()), value)
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &AlgVec<T>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, monomial: Monomial) -> AlgVec<T> {
        self.terms.get(&monomial).cloned().unwrap_or_else(|| AlgVec::zeros(self.dim))
    }

    fn param_exponent(&self, m: Monomial) -> u32 {
        if self.space.param {
            m.exponent(self.space.param_var())
        } else {
            0
        }
    }

    fn admissible(&self, m: Monomial) -> bool {
        m.degree() <= TRUNCATION && self.param_exponent(m) <= 1
    }

    fn check_signature(&self, other: &Self) -> Result<()> {
        if self.space != other.space || self.dim != other.dim {
            return Err(Error::SignatureMismatch);
        }
        Ok(())
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, v| !v.is_zero());
        self
    }

    /// `αA + βB`.
    pub fn combine(alpha: &T, a: &Self, beta: &T, b: &Self) -> Result<Self> {
        a.check_signature(b)?;
        let mut out = if alpha.is_one() { a.clone() } else { a.scale(alpha) };
        out.add_scaled_assign(beta, b);
        Ok(out.prune())
    }

    /// `self += factor · other`, touching only the terms of `other`.
    fn add_scaled_assign(&mut self, factor: &T, other: &Self) {
        use std::collections::btree_map::Entry;
        if factor.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            match self.terms.entry(*m) {
                Entry::Occupied(mut e) => {
                    e.get_mut().add_scaled(factor, v);
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
                Entry::Vacant(e) => {
                    e.insert(if factor.is_one() { v.clone() } else { v.scale(factor) });
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::combine(&T::one(), self, &T::one(), other).expect("series signatures differ")
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::combine(&T::one(), self, &-T::one(), other).expect("series signatures differ")
    }

    pub fn scale(&self, factor: &T) -> Self {
        let mut out = Self::zero(self.space, self.dim);
        if factor.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(*m, v.scale(factor));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    /// Applies a linear map to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&AlgVec<T>) -> AlgVec<T>) -> Self {
        let mut out = Self::zero(self.space, self.dim);
        for (m, v) in &self.terms {
            out.terms.insert(*m, f(v));
        }
        out.prune()
    }

    /// Terms of total degree exactly `d` (the parameter counts one).
    pub fn homogeneous(&self, d: u32) -> Self {
        self.filter(|m| m.degree() == d)
    }

    /// Terms of total degree at most `d`.
    pub fn up_to_degree(&self, d: u32) -> Self {
        self.filter(|m| m.degree() <= d)
    }

    /// Terms with `x`-degree `p`, `y`-degree `q` and parameter degree `tdeg`.
    pub fn bidegree(&self, p: u32, q: u32, tdeg: u32) -> Self {
        self.filter(|m| self.multidegree(*m) == (p, q, tdeg))
    }

    pub fn multidegree(&self, m: Monomial) -> (u32, u32, u32) {
        let s = self.space;
        (m.degree_in(0, s.x), m.degree_in(s.x, s.x + s.y), self.param_exponent(m))
    }

    fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        let mut out = Self::zero(self.space, self.dim);
        out.terms = self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, v)| (*m, v.clone())).collect();
        out
    }

    /// Parameter-free part (`t = 0`).
    pub fn at_param_zero(&self) -> Self {
        let mut out = Self::zero(self.space.without_param(), self.dim);
        for (m, v) in &self.terms {
            if self.param_exponent(*m) == 0 {
                out.terms.insert(*m, v.clone());
            }
        }
        out
    }

    /// Coefficient series of `t`, i.e. the exact first derivative at `t = 0`.
    pub fn parameter_derivative(&self) -> Result<Self> {
        if !self.space.param {
            return Err(Error::MissingParameter);
        }
        let t = Monomial::var(self.space.param_var());
        let mut out = Self::zero(self.space.without_param(), self.dim);
        for (m, v) in &self.terms {
            if self.param_exponent(*m) == 1 {
                out.terms.insert(Monomial(m.0 - t.0), v.clone());
            }
        }
        Ok(out)
    }

    /// Re-embeds a series into a space that additionally carries the parameter.
    pub fn lift_to_param(&self) -> Self {
        let mut out = Self::zero(self.space.with_param(), self.dim);
        out.terms = self.terms.clone();
        out
    }

    /// Multiplies by the formal parameter.
    pub fn times_param(&self) -> Self {
        let t = Monomial::var(self.space.param_var());
        let mut out = Self::zero(self.space, self.dim);
        for (m, v) in &self.terms {
            let p = m.mul_raw(t);
            if out.admissible(p) {
                out.terms.insert(p, v.clone());
            }
        }
        out
    }

    /// Polarized coefficient tensor of the `(p, q, tdeg)` component.
    ///
    /// The result has `p` slots over the `x` coordinates followed by `q` slots
    /// over the `y` coordinates, symmetric inside each group, and satisfies
    /// `tensor(x̄,…,x̄,ȳ,…,ȳ) = component(x̄, ȳ)`.
    pub fn tensor(&self, p: u32, q: u32, tdeg: u32) -> MultilinearMap<T> {
        let s = self.space;
        let mut dims = vec![s.x; p as usize];
        dims.extend(std::iter::repeat(s.y).take(q as usize));
        let fact = |k: u32| -> i64 { (1..=k as i64).product() };
        let t_mono = if tdeg == 1 { Monomial::var(s.param_var()) } else { Monomial::ONE };
        MultilinearMap::from_fn(dims, self.dim, |idx| {
            let mut exps = vec![0u32; s.var_count()];
            for &i in &idx[..p as usize] {
                exps[s.x_var(i)] += 1;
            }
            for &j in &idx[p as usize..] {
                exps[s.y_var(j)] += 1;
            }
            let m = Monomial::from_exponents(&exps).mul_raw(t_mono);
            match self.terms.get(&m) {
                None => AlgVec::zeros(self.dim),
                Some(v) => {
                    // coefficient of x^α y^β equals (p! q! / α! β!) times the tensor entry
                    let num: i64 = exps.iter().map(|&e| fact(e)).product();
                    let den = fact(p) * fact(q);
                    v.scale(&T::frac(num, den))
                }
            }
        })
    }

    /// Exact value of the polynomial at concrete arguments.
    ///
    /// `x` and `y` supply the coordinates of the two variable groups and `t`
    /// the parameter (ignored when the space has none).
    pub fn eval(&self, x: &[T], y: &[T], t: Option<&T>) -> AlgVec<T> {
        let s = self.space;
        let mut out = AlgVec::zeros(self.dim);
        for (m, v) in &self.terms {
            let mut w = T::one();
            for i in 0..s.x {
                for _ in 0..m.exponent(s.x_var(i)) {
                    w = w * x[i].clone();
                }
            }
            for j in 0..s.y {
                for _ in 0..m.exponent(s.y_var(j)) {
                    w = w * y[j].clone();
                }
            }
            if self.param_exponent(*m) == 1 {
                w = w * t.cloned().unwrap_or_else(T::zero);
            }
            out.add_scaled(&w, v);
        }
        out
    }

    /// Polynomial substitution: replaces the `x`-coordinates of `self` by the
    /// coordinates of `x_arg` and the `y`-coordinates by those of `y_arg`.
    ///
    /// `self` must be parameter-free; the arguments share the target space.
    pub fn compose(&self, x_arg: &Self, y_arg: &Self) -> Result<Self> {
        compose_components(&self.components()?, x_arg, y_arg)
    }

    /// Homogeneous components as `(p, q, polarized tensor)`.
    pub fn components(&self) -> Result<Vec<(u32, u32, MultilinearMap<T>)>> {
        if self.space.param {
            return Err(Error::SignatureMismatch);
        }
        let mut degrees: Vec<(u32, u32)> = self.terms.keys().map(|m| {
            let (p, q, _) = self.multidegree(*m);
            (p, q)
        }).collect();
        degrees.sort_unstable();
        degrees.dedup();
        Ok(degrees.into_iter().map(|(p, q)| (p, q, self.tensor(p, q, 0))).collect())
    }

    /// Same series over another scalar type.
    pub fn map_scalars<S: Scalar>(&self, f: impl Fn(&T) -> S) -> Series<S> {
        let mut out = Series::zero(self.space, self.dim);
        for (m, v) in &self.terms {
            let w = v.map(&f);
            if !w.is_zero() {
                out.terms.insert(*m, w);
            }
        }
        out
    }
}

/// `Σ_{p,q} C_{p,q}(X,…,X,Y,…,Y)` for precomputed polarized components.
pub fn compose_components<T: Scalar>(
    components: &[(u32, u32, MultilinearMap<T>)],
    x_arg: &Series<T>,
    y_arg: &Series<T>,
) -> Result<Series<T>> {
    x_arg.check_signature(y_arg)?;
    let mut out = Series::zero(x_arg.space, components.first().map_or(x_arg.dim, |c| c.2.out_dim()));
    for (p, q, map) in components {
        let mut args: Vec<&Series<T>> = vec![x_arg; *p as usize];
        args.extend(std::iter::repeat(y_arg).take(*q as usize));
        if args.is_empty() {
            // constant component
            let v = map.value(&[]);
            out.add_scaled_assign(&T::one(), &Series::constant(x_arg.space, v));
            continue;
        }
        out.add_scaled_assign(&T::one(), &substitute(map, &args)?);
    }
    Ok(out.prune())
}

/// Pointwise formal composition `outer(A_1, …, A_k)`, truncated.
pub fn substitute<T: Scalar>(outer: &MultilinearMap<T>, args: &[&Series<T>]) -> Result<Series<T>> {
    if args.len() != outer.arity() {
        return Err(Error::ArityMismatch { expected: outer.arity(), found: args.len() });
    }
    let Some(first) = args.first() else {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    };
    for (a, d) in args.iter().zip(outer.slot_dims()) {
        first.check_signature(a)?;
        if a.dim < *d {
            return Err(Error::DimensionMismatch { expected: *d, found: a.dim });
        }
    }
    let mut out = Series::zero(first.space, outer.out_dim());
    let terms: Vec<Vec<(Monomial, u32, &AlgVec<T>)>> = args
        .iter()
        .map(|a| {
            let mut t: Vec<_> = a.terms.iter().map(|(m, v)| (*m, m.degree(), v)).collect();
            t.sort_by_key(|(_, d, _)| *d);
            t
        })
        .collect();
    let min_rest: Vec<u32> = (0..=terms.len())
        .map(|k| terms[k..].iter().map(|ts| ts.first().map_or(0, |t| t.1)).sum())
        .collect();
    if terms.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    let mut chosen: Vec<&AlgVec<T>> = Vec::with_capacity(args.len());
    substitute_walk(outer, &terms, &min_rest, 0, Monomial::ONE, 0, &mut chosen, &mut out);
    Ok(out.prune())
}

#[allow(clippy::too_many_arguments)]
fn substitute_walk<'a, T: Scalar>(
    outer: &MultilinearMap<T>,
    terms: &'a [Vec<(Monomial, u32, &'a AlgVec<T>)>],
    min_rest: &[u32],
    slot: usize,
    mono: Monomial,
    degree: u32,
    chosen: &mut Vec<&'a AlgVec<T>>,
    out: &mut Series<T>,
) {
    if slot == terms.len() {
        if out.admissible(mono) {
            let dim = out.dim;
            let entry = out.terms.entry(mono).or_insert_with(|| AlgVec::zeros(dim));
            outer.accumulate_eval(&T::one(), chosen, entry);
        }
        return;
    }
    for (m, d, v) in &terms[slot] {
        if degree + d + min_rest[slot + 1] > TRUNCATION {
            break;
        }
        chosen.push(v);
        substitute_walk(outer, terms, min_rest, slot + 1, mono.mul_raw(*m), degree + d, chosen, out);
        chosen.pop();
    }
}

impl<T: Scalar> LieAlgebra<T> {
    /// Pointwise bracket of two formal maps, truncated.
    pub fn bracket_series(&self, a: &Series<T>, b: &Series<T>) -> Result<Series<T>> {
        a.check_signature(b)?;
        if a.dim != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: a.dim });
        }
        let mut out = Series::zero(a.space, a.dim);
        let one = T::one();
        for (ma, va) in &a.terms {
            let da = ma.degree();
            for (mb, vb) in &b.terms {
                if da + mb.degree() > TRUNCATION {
                    continue;
                }
                let m = ma.mul_raw(*mb);
                if !out.admissible(m) {
                    continue;
                }
                let dim = out.dim;
                let entry = out.terms.entry(m).or_insert_with(|| AlgVec::zeros(dim));
                self.accumulate_bracket(&one, va, vb, entry);
            }
        }
        Ok(out.prune())
    }

    fn br(&self, a: &Series<T>, b: &Series<T>) -> Series<T> {
        self.bracket_series(a, b).expect("series signatures differ")
    }

    /// Group product in normal coordinates through degree four:
    /// `a + b + ½[a,b] + 1/12[a,[a,b]] + 1/12[b,[b,a]] − 1/48[b,[a,[a,b]]] − 1/48[a,[b,[a,b]]]`.
    pub fn bch4(&self, a: &Series<T>, b: &Series<T>) -> Result<Series<T>> {
        a.check_signature(b)?;
        let ab = self.br(a, b);
        let a_ab = self.br(a, &ab);
        let b_ab = self.br(b, &ab);
        let b_a_ab = self.br(b, &a_ab);
        let a_b_ab = self.br(a, &b_ab);
        let mut out = a.add(b);
        for (c, s) in [
            (T::frac(1, 2), &ab),
            (T::frac(1, 12), &a_ab),
            (T::frac(-1, 12), &b_ab),
            (T::frac(-1, 48), &b_a_ab),
            (T::frac(-1, 48), &a_b_ab),
        ] {
            out.add_scaled_assign(&c, s);
        }
        Ok(out.prune())
    }

    /// Group inverse in normal coordinates.
    pub fn bch4_inverse(&self, a: &Series<T>) -> Series<T> {
        a.neg()
    }

    /// The bracket as a bilinear map `𝔊 × 𝔊 → 𝔊`.
    pub fn bracket_map(&self) -> MultilinearMap<T> {
        let n = self.dim();
        MultilinearMap::from_fn(vec![n, n], n, |idx| self.bracket(&AlgVec::basis(n, idx[0]), &AlgVec::basis(n, idx[1])))
    }
}

impl<T: Scalar> Split<T> {
    pub fn proj_v_series(&self, s: &Series<T>) -> Series<T> {
        s.map_coefficients(|v| self.proj_v(v))
    }

    pub fn proj_h_series(&self, s: &Series<T>) -> Series<T> {
        s.map_coefficients(|v| self.proj_h(v))
    }

    /// `Π∘[·,·]` as a bilinear map.
    pub fn pi_bracket_map(&self) -> MultilinearMap<T> {
        let n = self.dim();
        MultilinearMap::from_fn(vec![n, n], n, |idx| self.pi_bracket(&self.basis(idx[0]), &self.basis(idx[1])))
    }
}

impl<T: Scalar> fmt::Debug for Series<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let s = self.space;
        let names: Vec<String> = (0..s.x)
            .map(|i| format!("x{}", i + 1))
            .chain((0..s.y).map(|i| format!("y{}", i + 1)))
            .chain(s.param.then(|| "t".to_string()))
            .collect();
        for (k, (m, v)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let exps = m.exponents(s.var_count());
            let mono: Vec<String> = exps
                .iter()
                .zip(&names)
                .filter(|(e, _)| **e > 0)
                .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect();
            let mono = if mono.is_empty() { "1".to_string() } else { mono.join(" ") };
            write!(f, "{mono}·{v}")?;
        }
        Ok(())
    }
}

/// Every basis tuple of `k` slots over an `n`-dimensional space.
pub fn basis_tuples(k: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let dims = vec![n; k];
    index_tuples(&dims).collect::<Vec<_>>().into_iter()
}
