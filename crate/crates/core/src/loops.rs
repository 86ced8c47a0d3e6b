//! The loop `x × y = Π_Q(x·y)` of a coset section, expanded through degree four.
//!
//! The section `Q` is the graph of `φ(ξ) = R(ξ,ξ) + S(ξ,ξ,ξ)` over `V`. The
//! loop product is defined by solving
//!
//! ```text
//! z + φ(z) = (x + φ(x)) · (y + φ(y)) · h,     z ∈ V, h ∈ 𝔥
//! ```
//!
//! in normal coordinates, one total degree at a time.

use std::fmt;

use crate::algebra::{AlgVec, Split, ValidationReport};
use crate::error::{Error, Result};
use crate::multilinear::{index_tuples, MultilinearMap};
use crate::scalar::Scalar;
use crate::series::{compose_components, substitute, Monomial, Series, VarSpace, TRUNCATION};

/// Second and third order jet `(R, S)` of the section.
#[derive(Clone, PartialEq)]
pub struct SectionJet<T> {
    r: MultilinearMap<T>,
    s: MultilinearMap<T>,
}

impl<T: Scalar> SectionJet<T> {
    pub fn zero(split: &Split<T>) -> Self {
        let (n, dim) = (split.v_dim(), split.dim());
        Self { r: MultilinearMap::uniform_zeros(2, n, dim), s: MultilinearMap::uniform_zeros(3, n, dim) }
    }

    /// Symmetrizes `r` and `s` and checks that they are `𝔥`-valued maps on `V`.
    pub fn new(split: &Split<T>, r: MultilinearMap<T>, s: MultilinearMap<T>) -> Result<Self> {
        let (n, dim) = (split.v_dim(), split.dim());
        for (map, k) in [(&r, 2), (&s, 3)] {
            if map.arity() != k {
                return Err(Error::ArityMismatch { expected: k, found: map.arity() });
            }
            if let Some(d) = map.slot_dims().iter().find(|&&d| d != n) {
                return Err(Error::DimensionMismatch { expected: n, found: *d });
            }
            if map.out_dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: map.out_dim() });
            }
            if let Some((idx, _)) = map.entries().find(|(_, v)| !split.in_h(v)) {
                return Err(Error::InvalidModel(format!(
                    "section jet value at {:?} has a component in V",
                    idx.iter().map(|i| i + 1).collect::<Vec<_>>()
                )));
            }
        }
        Ok(Self { r: r.symmetrize(&[&[0, 1]]), s: s.symmetrize(&[&[0, 1, 2]]) })
    }

    /// Builds the jet from one representative per unordered index set;
    /// every permutation of an entry receives its value.
    ///
    /// Entries are `(slots, alpha, value)` with 0-based indices.
    pub fn from_entries(split: &Split<T>, r: &[(Vec<usize>, usize, T)], s: &[(Vec<usize>, usize, T)]) -> Result<Self> {
        let (n, dim) = (split.v_dim(), split.dim());
        let mut maps = [MultilinearMap::uniform_zeros(2, n, dim), MultilinearMap::uniform_zeros(3, n, dim)];
        for (map, entries) in maps.iter_mut().zip([r, s]) {
            let k = map.arity();
            let mut seen: Vec<(Vec<usize>, usize, T)> = Vec::new();
            for (slots, alpha, value) in entries {
                if slots.len() != k {
                    return Err(Error::ArityMismatch { expected: k, found: slots.len() });
                }
                if slots.iter().any(|&j| j >= n) || *alpha < n || *alpha >= dim {
                    return Err(Error::InvalidModel(format!("section jet index out of range: {slots:?} -> {alpha}")));
                }
                let mut key = slots.clone();
                key.sort_unstable();
                if let Some((_, _, old)) = seen.iter().find(|(s, a, _)| *s == key && a == alpha) {
                    if old != value {
                        return Err(Error::InvalidModel(format!("conflicting section jet entries for {key:?} -> {alpha}")));
                    }
                    continue;
                }
                seen.push((key.clone(), *alpha, value.clone()));
                for perm in index_tuples(&vec![k; k]) {
                    let mut sorted = perm.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != k {
                        continue;
                    }
                    let idx: Vec<usize> = perm.iter().map(|&p| key[p]).collect();
                    let mut v = map.value(&idx);
                    v[*alpha] = value.clone();
                    map.set(&idx, &v);
                }
            }
        }
        let [r, s] = maps;
        Ok(Self { r, s })
    }

    pub fn r(&self) -> &MultilinearMap<T> {
        &self.r
    }

    pub fn s(&self) -> &MultilinearMap<T> {
        &self.s
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    pub fn map_scalars<S: Scalar>(&self, f: impl Fn(&T) -> S) -> SectionJet<S> {
        SectionJet { r: self.r.map_scalars(&f), s: self.s.map_scalars(&f) }
    }
}

/// An adapted split together with a section jet.
#[derive(Clone)]
pub struct Model<T> {
    pub name: String,
    pub split: Split<T>,
    pub jet: SectionJet<T>,
}

impl<T: Scalar> Model<T> {
    pub fn new(name: impl Into<String>, split: Split<T>, jet: SectionJet<T>) -> Self {
        Self { name: name.into(), split, jet }
    }

    /// Model with the flat section `Q = exp V`.
    pub fn flat(name: impl Into<String>, split: Split<T>) -> Self {
        let jet = SectionJet::zero(&split);
        Self::new(name, split, jet)
    }

    pub fn v_dim(&self) -> usize {
        self.split.v_dim()
    }

    pub fn dim(&self) -> usize {
        self.split.dim()
    }

    pub fn validate(&self) -> ValidationReport {
        self.split.validate()
    }

    /// `φ(ξ) = R(ξ,ξ) + S(ξ,ξ,ξ)` for a `V`-valued series.
    pub fn phi(&self, xi: &Series<T>) -> Result<Series<T>> {
        let r = substitute(self.jet.r(), &[xi, xi])?;
        let s = substitute(self.jet.s(), &[xi, xi, xi])?;
        Ok(r.add(&s))
    }

    /// Normal coordinate `ξ + φ(ξ)` of the section point over `ξ`.
    pub fn embed(&self, xi: &Series<T>) -> Result<Series<T>> {
        Ok(xi.add(&self.phi(xi)?))
    }

    /// Decomposes a group element `g` (without constant term) as
    /// `g · η = z + φ(z)` with `z ∈ V`, `η ∈ 𝔥`; returns `(z, η)`.
    pub fn project_to_section(&self, g: &Series<T>) -> Result<(Series<T>, Series<T>)> {
        if !g.coefficient(Monomial::ONE).is_zero() {
            return Err(Error::ConstantTerm);
        }
        let alg = self.split.algebra();
        let mut z = Series::zero(g.space(), g.dim());
        let mut eta = Series::zero(g.space(), g.dim());
        for d in 1..=TRUNCATION {
            let defect = alg.bch4(g, &eta)?.sub(&self.embed(&z)?).homogeneous(d);
            z = z.add(&self.split.proj_v_series(&defect));
            eta = eta.sub(&self.split.proj_h_series(&defect));
        }
        Ok((z, eta))
    }

    /// The normative loop expansion: solves the projection equation directly.
    pub fn solve_loop_oracle(&self) -> Result<LoopExpansion<T>> {
        self.split.ensure_valid()?;
        let space = VarSpace::pair(self.v_dim());
        let x = self.embed(&Series::x_bar(space, self.dim()))?;
        let y = self.embed(&Series::y_bar(space, self.dim()))?;
        let g = self.split.algebra().bch4(&x, &y)?;
        let (z, h) = self.project_to_section(&g)?;
        LoopExpansion::new(z, h)
    }

    /// `Ψ_u(x) = (u × x)·u⁻¹`, valued in normal coordinates of the group.
    pub fn psi(&self, base: &LoopExpansion<T>, u: &Series<T>, x: &Series<T>) -> Result<Series<T>> {
        let ux = base.compose_series(u, x)?;
        self.split.algebra().bch4(&self.embed(&ux)?, &self.embed(u)?.neg())
    }

    /// Product of the translated section `Q·u⁻¹` along `u H u⁻¹`:
    /// `a ∗ b = Π_Q(a·b·u)·u⁻¹`.
    pub fn translated_product(&self, u: &Series<T>, a: &Series<T>, b: &Series<T>) -> Result<Series<T>> {
        let alg = self.split.algebra();
        let eu = self.embed(u)?;
        let g = alg.bch4(&alg.bch4(a, b)?, &eu)?;
        let (z, _) = self.project_to_section(&g)?;
        alg.bch4(&self.embed(&z)?, &eu.neg())
    }
}

/// Names of the coefficient maps of the expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coefficient {
    K,
    L,
    M,
    P,
    Q,
    U,
    /// Second order part of `h`.
    H2,
    E,
    F,
}

impl Coefficient {
    pub const ALL: [Coefficient; 9] = [
        Coefficient::K,
        Coefficient::L,
        Coefficient::M,
        Coefficient::P,
        Coefficient::Q,
        Coefficient::U,
        Coefficient::H2,
        Coefficient::E,
        Coefficient::F,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Coefficient::K => "K",
            Coefficient::L => "L",
            Coefficient::M => "M",
            Coefficient::P => "P",
            Coefficient::Q => "Q",
            Coefficient::U => "U",
            Coefficient::H2 => "h2",
            Coefficient::E => "E",
            Coefficient::F => "F",
        }
    }

    /// `(x-degree, y-degree)`.
    pub fn bidegree(self) -> (u32, u32) {
        match self {
            Coefficient::K | Coefficient::H2 => (1, 1),
            Coefficient::L | Coefficient::E => (2, 1),
            Coefficient::M | Coefficient::F => (1, 2),
            Coefficient::P => (3, 1),
            Coefficient::Q => (2, 2),
            Coefficient::U => (1, 3),
        }
    }

    /// Whether the map is a part of `h` rather than of `z`.
    pub fn in_h(self) -> bool {
        matches!(self, Coefficient::H2 | Coefficient::E | Coefficient::F)
    }

    pub fn degree(self) -> u32 {
        let (p, q) = self.bidegree();
        p + q
    }
}

/// `z = x ⋆ y` as a `V`-valued series and the companion `𝔥`-valued `h`.
#[derive(Clone)]
pub struct LoopExpansion<T> {
    z: Series<T>,
    h: Series<T>,
    components: Vec<(u32, u32, MultilinearMap<T>)>,
}

impl<T: Scalar> LoopExpansion<T> {
    pub fn new(z: Series<T>, h: Series<T>) -> Result<Self> {
        let components = z.components()?;
        Ok(Self { z, h, components })
    }

    pub fn z(&self) -> &Series<T> {
        &self.z
    }

    pub fn h(&self) -> &Series<T> {
        &self.h
    }

    pub fn space(&self) -> VarSpace {
        self.z.space()
    }

    /// Polarized coefficient map, symmetric in repeated slots.
    pub fn coefficient(&self, c: Coefficient) -> MultilinearMap<T> {
        let (p, q) = c.bidegree();
        let source = if c.in_h() { &self.h } else { &self.z };
        source.tensor(p, q, 0)
    }

    /// `z(A, B)` for series arguments sharing a space.
    pub fn compose_series(&self, a: &Series<T>, b: &Series<T>) -> Result<Series<T>> {
        compose_components(&self.components, a, b)
    }

    /// Truncated product of two points of `V`.
    pub fn compose(&self, x: &AlgVec<T>, y: &AlgVec<T>) -> Result<AlgVec<T>> {
        let n = self.space().x;
        for v in [x, y] {
            if v.dim() != self.z.dim() {
                return Err(Error::DimensionMismatch { expected: self.z.dim(), found: v.dim() });
            }
            if let Some((i, _)) = v.support().find(|(i, _)| *i >= n) {
                return Err(Error::NotInV(i));
            }
        }
        Ok(self.z.eval(&x.coords()[..n], &y.coords()[..n], None))
    }

    /// `s = u∖w`, the solution of `u ⋆ s = w`, by degreewise fixed point.
    pub fn left_divide_series(&self, u: &Series<T>, w: &Series<T>) -> Result<Series<T>> {
        let base = w.sub(u);
        self.fixed_point(&base, |s| {
            let nonlinear = self.compose_series(u, s)?.sub(u).sub(s);
            Ok(base.sub(&nonlinear))
        })
    }

    /// `r = w/v`, the solution of `r ⋆ v = w`.
    pub fn right_divide_series(&self, w: &Series<T>, v: &Series<T>) -> Result<Series<T>> {
        let base = w.sub(v);
        self.fixed_point(&base, |r| {
            let nonlinear = self.compose_series(r, v)?.sub(r).sub(v);
            Ok(base.sub(&nonlinear))
        })
    }

    fn fixed_point(&self, start: &Series<T>, step: impl Fn(&Series<T>) -> Result<Series<T>>) -> Result<Series<T>> {
        let mut s = start.clone();
        // each pass fixes one more degree; the linear part is already exact
        for _ in 0..TRUNCATION {
            let next = step(&s)?;
            if next == s {
                break;
            }
            s = next;
        }
        Ok(s)
    }

    /// Left division polynomial evaluated at concrete points.
    pub fn left_divide(&self, u: &AlgVec<T>, w: &AlgVec<T>) -> Result<AlgVec<T>> {
        let space = self.space();
        let d = self.left_divide_series(&Series::x_bar(space, self.z.dim()), &Series::y_bar(space, self.z.dim()))?;
        let n = space.x;
        Ok(d.eval(&u.coords()[..n], &w.coords()[..n], None))
    }

    /// Right division polynomial evaluated at concrete points.
    pub fn right_divide(&self, w: &AlgVec<T>, v: &AlgVec<T>) -> Result<AlgVec<T>> {
        let space = self.space();
        let d = self.right_divide_series(&Series::x_bar(space, self.z.dim()), &Series::y_bar(space, self.z.dim()))?;
        let n = space.x;
        Ok(d.eval(&w.coords()[..n], &v.coords()[..n], None))
    }

    /// `x ·_u y = u∖((u ⋆ x) ⋆ y)` with `u = tζ`, as a series in `(x, y, t)`.
    pub fn derived_loop_u(&self, zeta: &AlgVec<T>) -> Result<Series<T>> {
        let space = self.space().with_param();
        let dim = self.z.dim();
        let u = Series::param_times(space, zeta.clone());
        let (x, y) = (Series::x_bar(space, dim), Series::y_bar(space, dim));
        let uxy = self.compose_series(&self.compose_series(&u, &x)?, &y)?;
        self.left_divide_series(&u, &uxy)
    }

    /// `x (1/v) y = (x ⋆ (y ⋆ v))/v` with `v = tτ`, as a series in `(x, y, t)`.
    pub fn derived_loop_v(&self, tau: &AlgVec<T>) -> Result<Series<T>> {
        let space = self.space().with_param();
        let dim = self.z.dim();
        let v = Series::param_times(space, tau.clone());
        let (x, y) = (Series::x_bar(space, dim), Series::y_bar(space, dim));
        let xyv = self.compose_series(&x, &self.compose_series(&y, &v)?)?;
        self.right_divide_series(&xyv, &v)
    }
}

impl<T: Scalar> fmt::Debug for SectionJet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SectionJet").field("r", &self.r).field("s", &self.s).finish()
    }
}

impl<T: Scalar> fmt::Debug for Model<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Model").field("name", &self.name).field("split", &self.split).field("jet", &self.jet).finish()
    }
}

impl<T: Scalar> fmt::Debug for LoopExpansion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LoopExpansion").field("z", &self.z).field("h", &self.h).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebra;
    use crate::scalar::Rat;

    fn sl2_split(n: usize) -> Split<Rat> {
        let g = LieAlgebra::from_brackets(
            3,
            &[(0, 1, 2, Rat::int(1)), (2, 0, 0, Rat::int(2)), (2, 1, 1, Rat::int(-2))],
        );
        Split::new(g, n).unwrap()
    }

    fn sl2r() -> Model<Rat> {
        let split = sl2_split(2);
        let jet = SectionJet::from_entries(&split, &[(vec![0, 0], 2, Rat::int(1))], &[]).unwrap();
        Model::new("sl2r", split, jet)
    }

    #[test]
    fn phi_reads_the_jet() {
        let m = sl2r();
        let space = VarSpace::new(2, 0, false);
        let x = Series::x_bar(space, 3);
        let phi = m.phi(&x).unwrap();
        let one = Rat::int(1);
        assert_eq!(phi.eval(&[one, Rat::int(0)], &[], None), AlgVec::basis(3, 2));
        assert!(m.phi(&Series::zero(space, 3)).unwrap().is_zero());
        assert!(Model::flat("a", sl2_split(2)).phi(&x).unwrap().is_zero());
    }

    #[test]
    fn jet_rejects_v_values_and_conflicts() {
        let split = sl2_split(2);
        assert!(SectionJet::from_entries(&split, &[(vec![0, 0], 1, Rat::int(1))], &[]).is_err());
        let conflict = [(vec![0, 1], 2, Rat::int(1)), (vec![1, 0], 2, Rat::int(2))];
        assert!(SectionJet::from_entries(&split, &conflict, &[]).is_err());
        let same = [(vec![0, 1], 2, Rat::int(1)), (vec![1, 0], 2, Rat::int(1))];
        let jet = SectionJet::from_entries(&split, &same, &[]).unwrap();
        assert_eq!(jet.r().value(&[1, 0]), AlgVec::basis(3, 2));
    }

    #[test]
    fn abelian_loop_is_sum() {
        let split = Split::new(LieAlgebra::<Rat>::abelian(3), 2).unwrap();
        let e = Model::flat("abelian", split).solve_loop_oracle().unwrap();
        let space = e.space();
        assert_eq!(*e.z(), Series::x_bar(space, 3).add(&Series::y_bar(space, 3)));
        assert!(e.h().is_zero());
    }

    #[test]
    fn trivial_h_loop_is_group_law() {
        let split = sl2_split(3);
        let e = Model::flat("group", split.clone()).solve_loop_oracle().unwrap();
        let space = e.space();
        let g = split.algebra().bch4(&Series::x_bar(space, 3), &Series::y_bar(space, 3)).unwrap();
        assert_eq!(*e.z(), g);
        assert!(e.h().is_zero());
    }

    #[test]
    fn sl2_second_and_third_order_values() {
        let e = Model::flat("A", sl2_split(2)).solve_loop_oracle().unwrap();
        assert!(e.coefficient(Coefficient::K).value(&[0, 1]).is_zero());
        assert_eq!(e.coefficient(Coefficient::L).value(&[0, 0, 1]), AlgVec::basis(3, 0).scale(&Rat::frac(1, 3)));
        assert_eq!(e.coefficient(Coefficient::M).value(&[0, 1, 1]), AlgVec::basis(3, 1).scale(&Rat::frac(-2, 3)));
    }

    #[test]
    fn compose_units_and_division() {
        let m = sl2r();
        let e = m.solve_loop_oracle().unwrap();
        let x = AlgVec::from_coords(vec![Rat::frac(1, 2), Rat::int(-3), Rat::int(0)]);
        let zero = AlgVec::zeros(3);
        assert_eq!(e.compose(&x, &zero).unwrap(), x);
        assert_eq!(e.compose(&zero, &x).unwrap(), x);
        assert_eq!(e.left_divide(&zero, &x).unwrap(), x);
        assert_eq!(e.compose(&AlgVec::basis(3, 2), &x).unwrap_err(), Error::NotInV(2));
    }

    #[test]
    fn abelian_division_is_difference() {
        let split = Split::new(LieAlgebra::<Rat>::abelian(2), 2).unwrap();
        let e = Model::flat("abelian", split).solve_loop_oracle().unwrap();
        let u = AlgVec::from_coords(vec![Rat::int(1), Rat::int(2)]);
        let w = AlgVec::from_coords(vec![Rat::int(5), Rat::frac(1, 3)]);
        assert_eq!(e.left_divide(&u, &w).unwrap(), &w - &u);
        assert_eq!(e.right_divide(&w, &u).unwrap(), &w - &u);
    }

    #[test]
    fn derived_loops_reduce_to_base() {
        let e = sl2r().solve_loop_oracle().unwrap();
        let zero = AlgVec::zeros(3);
        assert_eq!(e.derived_loop_u(&zero).unwrap(), e.z().lift_to_param());
        assert_eq!(e.derived_loop_v(&zero).unwrap(), e.z().lift_to_param());
        let du = e.derived_loop_u(&AlgVec::basis(3, 0)).unwrap();
        assert_eq!(du.at_param_zero(), *e.z());
    }

    #[test]
    fn project_rejects_constant_term() {
        let m = sl2r();
        let g = Series::constant(VarSpace::pair(2), AlgVec::basis(3, 0));
        assert_eq!(m.project_to_section(&g).unwrap_err(), Error::ConstantTerm);
    }
}
