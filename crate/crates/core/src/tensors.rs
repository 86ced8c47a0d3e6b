//! Web structure tensors of the loop at the identity.
//!
//! Every tensor is a multilinear map on `V` (slots of dimension `n`) with
//! `V`-valued outputs stored as full `N`-vectors. Derivative tensors put the
//! differentiation direction in the last slot: `∇a(ξ,η;ζ)`, `c(ξ,η,ζ,τ) = ∇¹_τ b(ξ,η,ζ)`.

use crate::algebra::{AlgVec, Split};
use crate::error::Result;
use crate::loops::{Coefficient, LoopExpansion, Model, SectionJet};
use crate::multilinear::MultilinearMap;
use crate::scalar::{Dual, Scalar};
use crate::series::Series;

/// Builds a tensor on `V` from its values on basis tuples.
pub fn tensor_from<T: Scalar>(split: &Split<T>, arity: usize, f: impl Fn(&[AlgVec<T>]) -> AlgVec<T>) -> MultilinearMap<T> {
    let (n, dim) = (split.v_dim(), split.dim());
    MultilinearMap::from_fn(vec![n; arity], dim, |idx| {
        let args: Vec<AlgVec<T>> = idx.iter().map(|&i| split.basis(i)).collect();
        f(&args)
    })
}

fn ev<T: Scalar>(map: &MultilinearMap<T>, args: &[&AlgVec<T>]) -> AlgVec<T> {
    map.eval(args)
}

fn lin<T: Scalar>(dim: usize, terms: &[(T, AlgVec<T>)]) -> AlgVec<T> {
    let mut out = AlgVec::zeros(dim);
    for (c, v) in terms {
        out.add_scaled(c, v);
    }
    out
}

/// `a(x,y) = −½(K(x,y) − K(y,x))`.
///
/// In normal coordinates `K` is already alternating and this is `−K`; the
/// derived loops are not in normal coordinates, so the alternation matters there.
pub fn generic_a<T: Scalar>(k: &MultilinearMap<T>) -> MultilinearMap<T> {
    k.combine(&T::frac(-1, 2), &k.permute_slots(&[1, 0]), &T::frac(1, 2))
}

/// `B(x,y,z) = 2L(x,y,z) − 2M(x,y,z) − K(x,K(y,z)) + K(K(x,y),z)`.
pub fn generic_big_b<T: Scalar>(
    split: &Split<T>,
    k: &MultilinearMap<T>,
    l: &MultilinearMap<T>,
    m: &MultilinearMap<T>,
) -> MultilinearMap<T> {
    let dim = split.dim();
    tensor_from(split, 3, |a| {
        let (x, y, z) = (&a[0], &a[1], &a[2]);
        lin(dim, &[
            (T::int(2), ev(l, &[x, y, z])),
            (T::int(-2), ev(m, &[x, y, z])),
            (T::int(-1), ev(k, &[x, &ev(k, &[y, z])])),
            (T::int(1), ev(k, &[&ev(k, &[x, y]), z])),
        ])
    })
}

/// `b(x,y,z) = −B(y,x,z)`.
pub fn generic_b<T: Scalar>(big_b: &MultilinearMap<T>) -> MultilinearMap<T> {
    big_b.permute_slots(&[1, 0, 2]).scale(&-T::one())
}

/// `a, B, b` from the second and third order coefficients of a loop.
pub fn torsion_curvature<T: Scalar>(
    split: &Split<T>,
    k: &MultilinearMap<T>,
    l: &MultilinearMap<T>,
    m: &MultilinearMap<T>,
) -> (MultilinearMap<T>, MultilinearMap<T>, MultilinearMap<T>) {
    let big_b = generic_big_b(split, k, l, m);
    let b = generic_b(&big_b);
    (generic_a(k), big_b, b)
}

/// `a(x,y) = −½Π[x,y]`.
pub fn closed_a<T: Scalar>(split: &Split<T>) -> MultilinearMap<T> {
    tensor_from(split, 2, |a| split.pi_bracket(&a[0], &a[1]).scale(&T::frac(-1, 2)))
}

/// Readings of the closed curvature formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurvatureVariant {
    /// `−½Π[[x,y],z] + ½Π[Π[x,y],z] − 2Π[R(x,y),z]`.
    Statement,
    /// `−½Π[[x,y],z] − ½Π[Π[x,y],z] − 2Π[R(x,y),z]`, the line deriving it from `B`.
    Derivation,
}

impl CurvatureVariant {
    pub fn name(self) -> &'static str {
        match self {
            CurvatureVariant::Statement => "statement",
            CurvatureVariant::Derivation => "derivation",
        }
    }
}

/// Closed form of `b` from the split and `R`.
pub fn closed_b<T: Scalar>(split: &Split<T>, jet: &SectionJet<T>, variant: CurvatureVariant) -> MultilinearMap<T> {
    let dim = split.dim();
    let middle = match variant {
        CurvatureVariant::Statement => T::frac(1, 2),
        CurvatureVariant::Derivation => T::frac(-1, 2),
    };
    tensor_from(split, 3, |a| {
        let (x, y, z) = (&a[0], &a[1], &a[2]);
        let xy = split.bracket(x, y);
        lin(dim, &[
            (T::frac(-1, 2), split.pi_bracket(&xy, z)),
            (middle.clone(), split.pi_bracket(&split.proj_v(&xy), z)),
            (T::int(-2), split.pi_bracket(&ev(jet.r(), &[x, y]), z)),
        ])
    })
}

/// `∇²a(ξ,η;ζ) = −½Π[[ξ,η],ζ] + ½Π[Π[ξ,η],ζ]`.
pub fn closed_nabla2_a<T: Scalar>(split: &Split<T>) -> MultilinearMap<T> {
    let dim = split.dim();
    tensor_from(split, 3, |a| {
        let (xi, eta, zeta) = (&a[0], &a[1], &a[2]);
        let b = split.bracket(xi, eta);
        lin(dim, &[
            (T::frac(-1, 2), split.pi_bracket(&b, zeta)),
            (T::frac(1, 2), split.pi_bracket(&split.proj_v(&b), zeta)),
        ])
    })
}

/// `∇¹a(ξ,η;ζ)` in its six-term closed form.
pub fn closed_nabla1_a<T: Scalar>(split: &Split<T>, jet: &SectionJet<T>) -> MultilinearMap<T> {
    let dim = split.dim();
    tensor_from(split, 3, |a| {
        let (xi, eta, zeta) = (&a[0], &a[1], &a[2]);
        let xz = split.bracket(xi, zeta);
        let ez = split.bracket(eta, zeta);
        lin(dim, &[
            (T::frac(-1, 4), split.pi_bracket(&xz, eta)),
            (T::frac(1, 4), split.pi_bracket(&split.proj_v(&xz), eta)),
            (T::int(-1), split.pi_bracket(&ev(jet.r(), &[xi, zeta]), eta)),
            (T::frac(1, 4), split.pi_bracket(&ez, xi)),
            (T::frac(-1, 4), split.pi_bracket(&split.proj_v(&ez), xi)),
            (T::int(1), split.pi_bracket(&ev(jet.r(), &[eta, zeta]), xi)),
        ])
    })
}

/// `d(ξ,η,ζ,τ) = ∇²_τ b(ξ,η,ζ)` in its nine-term closed form.
pub fn closed_d<T: Scalar>(split: &Split<T>, jet: &SectionJet<T>) -> MultilinearMap<T> {
    let dim = split.dim();
    tensor_from(split, 4, |a| {
        let (xi, eta, zeta, tau) = (&a[0], &a[1], &a[2], &a[3]);
        let pb = |x: &AlgVec<T>, y: &AlgVec<T>| split.pi_bracket(x, y);
        let br = |x: &AlgVec<T>, y: &AlgVec<T>| split.bracket(x, y);
        let pi = |x: &AlgVec<T>| split.proj_v(x);
        let xe = br(xi, eta);
        let pxe = pi(&xe);
        let r = ev(jet.r(), &[xi, eta]);
        lin(dim, &[
            (T::frac(1, 2), pb(tau, &br(&xe, zeta))),
            (T::frac(-1, 2), pb(tau, &pb(&xe, zeta))),
            (T::frac(-1, 2), pb(tau, &br(&pxe, zeta))),
            (T::frac(1, 2), pb(tau, &pb(&pxe, zeta))),
            (T::frac(-1, 2), pb(&pb(tau, &xe), zeta)),
            (T::frac(1, 2), pb(&pb(tau, &pxe), zeta)),
            (T::int(2), pb(tau, &br(&r, zeta))),
            (T::int(-2), pb(tau, &pb(&r, zeta))),
            (T::int(-2), pb(&pb(tau, &r), zeta)),
        ])
    })
}

/// Expansion coefficients consumed by the coefficient formulas for `c` and `d`.
pub struct ExpansionMaps<T> {
    pub k: MultilinearMap<T>,
    pub l: MultilinearMap<T>,
    pub m: MultilinearMap<T>,
    pub p: MultilinearMap<T>,
    pub q: MultilinearMap<T>,
    pub u: MultilinearMap<T>,
}

impl<T: Scalar> ExpansionMaps<T> {
    pub fn of(exp: &LoopExpansion<T>) -> Self {
        Self {
            k: exp.coefficient(Coefficient::K),
            l: exp.coefficient(Coefficient::L),
            m: exp.coefficient(Coefficient::M),
            p: exp.coefficient(Coefficient::P),
            q: exp.coefficient(Coefficient::Q),
            u: exp.coefficient(Coefficient::U),
        }
    }
}

/// Readings of the coefficient formula for `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DReading {
    /// `(4Q − 6P)(y,x,z,t) − a(b(x,y,z),t) − …` as printed.
    Printed,
    /// The printed formula with `U` in place of `P`, the slot pattern mirroring `c`.
    MirrorU,
    /// The negative of [`DReading::MirrorU`]; agrees with the derivative path.
    Corrected,
}

impl DReading {
    pub const ALL: [DReading; 3] = [DReading::Printed, DReading::MirrorU, DReading::Corrected];

    pub fn name(self) -> &'static str {
        match self {
            DReading::Printed => "printed",
            DReading::MirrorU => "mirror-u",
            DReading::Corrected => "corrected",
        }
    }
}

/// `c` from the expansion coefficients:
/// `(4Q−6P)(y,t,x,z) + a(t,b(x,y,z)) + a(y,b(x,t,z)) − b(x,a(t,y),z) + a(2L(y,t,x),z)
///  − 2L(a(x,y),t,z) − 2L(y,a(x,t),z) − 2L(y,t,a(x,z))`.
pub fn coefficient_c<T: Scalar>(split: &Split<T>, e: &ExpansionMaps<T>) -> MultilinearMap<T> {
    let dim = split.dim();
    let (a, _, b) = torsion_curvature(split, &e.k, &e.l, &e.m);
    tensor_from(split, 4, |args| {
        let (x, y, z, t) = (&args[0], &args[1], &args[2], &args[3]);
        lin(dim, &[
            (T::int(4), ev(&e.q, &[y, t, x, z])),
            (T::int(-6), ev(&e.p, &[y, t, x, z])),
            (T::int(1), ev(&a, &[t, &ev(&b, &[x, y, z])])),
            (T::int(1), ev(&a, &[y, &ev(&b, &[x, t, z])])),
            (T::int(-1), ev(&b, &[x, &ev(&a, &[t, y]), z])),
            (T::int(2), ev(&a, &[&ev(&e.l, &[y, t, x]), z])),
            (T::int(-2), ev(&e.l, &[&ev(&a, &[x, y]), t, z])),
            (T::int(-2), ev(&e.l, &[y, &ev(&a, &[x, t]), z])),
            (T::int(-2), ev(&e.l, &[y, t, &ev(&a, &[x, z])])),
        ])
    })
}

/// `d` from the expansion coefficients:
/// `(4Q−6X)(y,x,z,t) − a(b(x,y,z),t) − a(b(x,y,t),z) + b(x,y,a(z,t)) + a(y,2M(x,z,t))
///  − 2M(a(y,x),z,t) − 2M(y,a(z,x),t) − 2M(y,z,a(t,x))`, with `X` and the overall sign per `reading`.
pub fn coefficient_d<T: Scalar>(split: &Split<T>, e: &ExpansionMaps<T>, reading: DReading) -> MultilinearMap<T> {
    let dim = split.dim();
    let (a, _, b) = torsion_curvature(split, &e.k, &e.l, &e.m);
    let (x_map, sign) = match reading {
        DReading::Printed => (&e.p, T::one()),
        DReading::MirrorU => (&e.u, T::one()),
        DReading::Corrected => (&e.u, -T::one()),
    };
    let d = tensor_from(split, 4, |args| {
        let (x, y, z, t) = (&args[0], &args[1], &args[2], &args[3]);
        lin(dim, &[
            (T::int(4), ev(&e.q, &[y, x, z, t])),
            (T::int(-6), ev(x_map, &[y, x, z, t])),
            (T::int(-1), ev(&a, &[&ev(&b, &[x, y, z]), t])),
            (T::int(-1), ev(&a, &[&ev(&b, &[x, y, t]), z])),
            (T::int(1), ev(&b, &[x, y, &ev(&a, &[z, t])])),
            (T::int(2), ev(&a, &[y, &ev(&e.m, &[x, z, t])])),
            (T::int(-2), ev(&e.m, &[&ev(&a, &[y, x]), z, t])),
            (T::int(-2), ev(&e.m, &[y, &ev(&a, &[z, x]), t])),
            (T::int(-2), ev(&e.m, &[y, z, &ev(&a, &[t, x])])),
        ])
    });
    d.scale(&sign)
}

/// Tensor of a parametrized series as a dual-number map: value at `t = 0`
/// plus `ε` times the `t`-derivative.
pub fn dual_tensor<T: Scalar>(series: &Series<T>, p: u32, q: u32) -> MultilinearMap<Dual<T>> {
    let re = series.tensor(p, q, 0);
    let eps = series.tensor(p, q, 1);
    MultilinearMap::from_fn(re.slot_dims().to_vec(), re.out_dim(), |idx| {
        let (r, e) = (re.value(idx), eps.value(idx));
        AlgVec::from_coords(r.coords().iter().zip(e.coords()).map(|(a, b)| Dual::new(a.clone(), b.clone())).collect())
    })
}

fn eps_part<T: Scalar>(map: &MultilinearMap<Dual<T>>) -> MultilinearMap<T> {
    map.map_scalars(|d| d.eps.clone())
}

/// Derivatives of `a` and `b` along a derived loop's formal parameter.
///
/// Returns `(d/dt a, d/dt b)` for the parametrized loop series `z_t`.
pub fn parameter_derivatives<T: Scalar>(split: &Split<T>, derived: &Series<T>) -> (MultilinearMap<T>, MultilinearMap<T>) {
    let dual_split = split.map_scalars(|v| Dual::real(v.clone()));
    let k = dual_tensor(derived, 1, 1);
    let l = dual_tensor(derived, 2, 1);
    let m = dual_tensor(derived, 1, 2);
    let (a, _, b) = torsion_curvature(&dual_split, &k, &l, &m);
    (eps_part(&a), eps_part(&b))
}

/// Assembles `(∇a, ∇b)` by differentiating along every basis direction of `V`,
/// with the direction in the last slot.
fn derivative_path<T: Scalar>(
    split: &Split<T>,
    derived: impl Fn(&AlgVec<T>) -> Result<Series<T>>,
) -> Result<(MultilinearMap<T>, MultilinearMap<T>)> {
    let (n, dim) = (split.v_dim(), split.dim());
    let mut na = MultilinearMap::uniform_zeros(3, n, dim);
    let mut nb = MultilinearMap::uniform_zeros(4, n, dim);
    for dir in 0..n {
        let series = derived(&split.basis(dir))?;
        let (da, db) = parameter_derivatives(split, &series);
        for (idx, v) in da.entries() {
            na.set(&[idx[0], idx[1], dir], &v);
        }
        for (idx, v) in db.entries() {
            nb.set(&[idx[0], idx[1], idx[2], dir], &v);
        }
    }
    Ok((na, nb))
}

/// `(∇¹a, c)` from the loops `x ·_u y` with `u = tζ`.
pub fn first_derivative_path<T: Scalar>(split: &Split<T>, exp: &LoopExpansion<T>) -> Result<(MultilinearMap<T>, MultilinearMap<T>)> {
    derivative_path(split, |zeta| exp.derived_loop_u(zeta))
}

/// `(∇²a, d)` from the loops `x (1/v) y` with `v = tτ`.
pub fn second_derivative_path<T: Scalar>(split: &Split<T>, exp: &LoopExpansion<T>) -> Result<(MultilinearMap<T>, MultilinearMap<T>)> {
    derivative_path(split, |tau| exp.derived_loop_v(tau))
}

/// `T_[jk]l = ½(T_jkl − T_kjl)`.
pub fn alternate_first_pair<T: Scalar>(t: &MultilinearMap<T>) -> MultilinearMap<T> {
    t.combine(&T::frac(1, 2), &t.permute_slots(&[1, 0, 2]), &T::frac(-1, 2))
}

/// `T_[j|l|k] = ½(T_jlk − T_klj)`, indexed as `(j, k, l)`.
pub fn alternate_outer_pair<T: Scalar>(t: &MultilinearMap<T>) -> MultilinearMap<T> {
    // (j,k,l) ↦ T(j,l,k) and T(k,l,j)
    let jlk = t.permute_slots(&[0, 2, 1]);
    let klj = t.permute_slots(&[1, 2, 0]);
    jlk.combine(&T::frac(1, 2), &klj, &T::frac(-1, 2))
}

/// `½(d(ξ,η,ζ,τ) − d(ξ,η,τ,ζ)) + b(ξ,η,a(ζ,τ))`, which must vanish.
pub fn d_alternation_defect<T: Scalar>(
    split: &Split<T>,
    d: &MultilinearMap<T>,
    a: &MultilinearMap<T>,
    b: &MultilinearMap<T>,
) -> MultilinearMap<T> {
    let dim = split.dim();
    tensor_from(split, 4, |args| {
        let (xi, eta, zeta, tau) = (&args[0], &args[1], &args[2], &args[3]);
        lin(dim, &[
            (T::frac(1, 2), ev(d, &[xi, eta, zeta, tau])),
            (T::frac(-1, 2), ev(d, &[xi, eta, tau, zeta])),
            (T::int(1), ev(b, &[xi, eta, &ev(a, &[zeta, tau])])),
        ])
    })
}

/// `σ Π[R(ξ,η),ζ]` over the cyclic permutations of `(ξ,η,ζ)`.
pub fn hexagonal_condition<T: Scalar>(split: &Split<T>, jet: &SectionJet<T>) -> MultilinearMap<T> {
    let dim = split.dim();
    tensor_from(split, 3, |args| {
        let mut out = AlgVec::zeros(dim);
        for (x, y, z) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let r = ev(jet.r(), &[&args[x], &args[y]]);
            out.add_scaled(&T::one(), &split.pi_bracket(&r, &args[z]));
        }
        out
    })
}

/// `(1/3) Σ_cyc T`.
pub fn cyclic_symmetrization<T: Scalar>(t: &MultilinearMap<T>) -> MultilinearMap<T> {
    let third = T::frac(1, 3);
    let mut out = t.scale(&third);
    for order in [[1, 2, 0], [2, 0, 1]] {
        out = out.combine(&T::one(), &t.permute_slots(&order), &third);
    }
    out
}

/// Average of `T` over all orderings of its three slots.
pub fn full_symmetrization<T: Scalar>(t: &MultilinearMap<T>) -> MultilinearMap<T> {
    t.symmetrize(&[&[0, 1, 2]])
}

/// `(1/3) Σ_cyc` over the first three slots of a four-slot tensor.
pub fn cyclic_symmetrization_first3<T: Scalar>(t: &MultilinearMap<T>) -> MultilinearMap<T> {
    let third = T::frac(1, 3);
    let mut out = t.scale(&third);
    for order in [[1, 2, 0, 3], [2, 0, 1, 3]] {
        out = out.combine(&T::one(), &t.permute_slots(&order), &third);
    }
    out
}

/// `σ Π{[τ,[R(ξ,η),ζ]] − [Π[τ,R(ξ,η)],ζ]}` over cyclic permutations of `(ξ,η,ζ)`,
/// indexed `(ξ,η,ζ,τ)`.
pub fn hexagonal_d_condition<T: Scalar>(split: &Split<T>, jet: &SectionJet<T>) -> MultilinearMap<T> {
    let dim = split.dim();
    tensor_from(split, 4, |args| {
        let tau = &args[3];
        let mut out = AlgVec::zeros(dim);
        for (x, y, z) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let r = ev(jet.r(), &[&args[x], &args[y]]);
            let inner = split.bracket(tau, &split.bracket(&r, &args[z]));
            let outer = split.bracket(&split.pi_bracket(tau, &r), &args[z]);
            out.add_scaled(&T::one(), &split.proj_v(&(&inner - &outer)));
        }
        out
    })
}

/// The full set of structure tensors from the normative paths: `a`, `B`, `b`
/// from the solved coefficients and the covariant derivatives from formal
/// differentiation of the derived loops.
#[derive(Clone)]
pub struct WebTensorSet<T> {
    pub a: MultilinearMap<T>,
    pub big_b: MultilinearMap<T>,
    pub b: MultilinearMap<T>,
    pub c: MultilinearMap<T>,
    pub d: MultilinearMap<T>,
    pub nabla1_a: MultilinearMap<T>,
    pub nabla2_a: MultilinearMap<T>,
}

impl<T: Scalar> WebTensorSet<T> {
    pub fn compute(model: &Model<T>, exp: &LoopExpansion<T>) -> Result<Self> {
        let split = &model.split;
        let e = ExpansionMaps::of(exp);
        let (a, big_b, b) = torsion_curvature(split, &e.k, &e.l, &e.m);
        let (nabla1_a, c) = first_derivative_path(split, exp)?;
        let (nabla2_a, d) = second_derivative_path(split, exp)?;
        Ok(Self { a, big_b, b, c, d, nabla1_a, nabla2_a })
    }

    /// `(name, tensor)` pairs in a fixed order.
    pub fn named(&self) -> [(&'static str, &MultilinearMap<T>); 7] {
        [
            ("a", &self.a),
            ("B", &self.big_b),
            ("b", &self.b),
            ("c", &self.c),
            ("d", &self.d),
            ("nabla1_a", &self.nabla1_a),
            ("nabla2_a", &self.nabla2_a),
        ]
    }
}
