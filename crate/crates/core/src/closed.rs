//! Closed bracket-polynomial formulas for the coefficients of the loop
//! expansion, evaluated literally as series in `(x̄, ȳ)`.

use crate::error::Result;
use crate::loops::{Coefficient, LoopExpansion, Model};
use crate::multilinear::MultilinearMap;
use crate::scalar::Scalar;
use crate::series::{substitute, Series, VarSpace};

/// Readings of the fourth order formulas for `P` and `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QuarticVariant {
    /// Inner coefficient `−1/12 Λ[x̄,ȳ]` as printed in the closed formulas for `P` and `U`.
    Printed,
    /// Inner coefficient `−1/2 Λ[x̄,ȳ]`, the value of `h` at second order.
    HalfLambda,
    /// `−1/2 Λ[x̄,ȳ]` plus the terms `[R(x̄,x̄),ȳ]` of the group law that the printed
    /// formulas drop: `1/12 Π[x̄,[R(x̄,x̄),ȳ]] + 1/12 Π[R(x̄,x̄),[x̄,ȳ]]` in `P` and the
    /// mirror pair in `U`.
    Completed,
}

impl QuarticVariant {
    pub const ALL: [QuarticVariant; 3] = [QuarticVariant::Printed, QuarticVariant::HalfLambda, QuarticVariant::Completed];

    pub fn name(self) -> &'static str {
        match self {
            QuarticVariant::Printed => "printed",
            QuarticVariant::HalfLambda => "half-lambda",
            QuarticVariant::Completed => "completed",
        }
    }
}

/// Series-level helpers bound to a model and the variables `x̄`, `ȳ`.
struct Terms<'a, T> {
    model: &'a Model<T>,
    x: Series<T>,
    y: Series<T>,
}

impl<T: Scalar> Terms<'_, T> {
    fn br(&self, a: &Series<T>, b: &Series<T>) -> Series<T> {
        self.model.split.algebra().bracket_series(a, b).expect("shared space")
    }

    fn pi(&self, a: &Series<T>) -> Series<T> {
        self.model.split.proj_v_series(a)
    }

    fn lambda(&self, a: &Series<T>) -> Series<T> {
        self.model.split.proj_h_series(a)
    }

    /// `Π[a, b]`.
    fn pb(&self, a: &Series<T>, b: &Series<T>) -> Series<T> {
        self.pi(&self.br(a, b))
    }

    /// `Λ[a, b]`.
    fn lb(&self, a: &Series<T>, b: &Series<T>) -> Series<T> {
        self.lambda(&self.br(a, b))
    }

    fn r(&self, a: &Series<T>, b: &Series<T>) -> Series<T> {
        substitute(self.model.jet.r(), &[a, b]).expect("V-valued arguments")
    }

    fn s(&self, a: &Series<T>, b: &Series<T>, c: &Series<T>) -> Series<T> {
        substitute(self.model.jet.s(), &[a, b, c]).expect("V-valued arguments")
    }
}

/// `Σ c_i · s_i`.
fn sum<T: Scalar>(space: VarSpace, dim: usize, terms: &[(T, Series<T>)]) -> Series<T> {
    terms.iter().fold(Series::zero(space, dim), |acc, (c, s)| acc.add(&s.scale(c)))
}

/// All closed coefficient formulas as separate series.
pub struct ClosedForms<T> {
    pub k: Series<T>,
    pub l: Series<T>,
    pub m: Series<T>,
    pub h2: Series<T>,
    pub e: Series<T>,
    pub f: Series<T>,
    pub p: Series<T>,
    pub q: Series<T>,
    pub u: Series<T>,
}

impl<T: Scalar> ClosedForms<T> {
    pub fn new(model: &Model<T>, variant: QuarticVariant) -> Self {
        let space = VarSpace::pair(model.v_dim());
        let dim = model.dim();
        let t = Terms { model, x: Series::x_bar(space, dim), y: Series::y_bar(space, dim) };
        let (x, y) = (&t.x, &t.y);
        let q = |p: i64, d: i64| T::frac(p, d);
        let s = |terms: &[(T, Series<T>)]| sum(space, dim, terms);

        let xy = t.br(x, y);
        let pxy = t.pi(&xy);
        let rxx = t.r(x, x);
        let ryy = t.r(y, y);
        let rxy = t.r(x, y);

        let k = pxy.scale(&q(1, 2));
        let l = s(&[
            (q(-1, 6), t.pb(x, &xy)),
            (q(1, 2), t.pb(&rxx, y)),
            (q(1, 4), t.pb(x, &pxy)),
            (q(1, 1), t.pb(x, &rxy)),
        ]);
        let yx = t.br(y, x);
        let pyx = t.pi(&yx);
        let m = s(&[
            (q(1, 3), t.pb(y, &yx)),
            (q(1, 2), t.pb(x, &ryy)),
            (q(-1, 4), t.pb(y, &pyx)),
            (q(1, 1), t.pb(y, &rxy)),
        ]);
        let h2 = s(&[(q(-1, 2), xy.clone()), (q(1, 2), pxy.clone()), (q(2, 1), rxy.clone())]);
        let e = s(&[
            (q(1, 1), t.r(x, &pxy)),
            (q(3, 1), t.s(x, x, y)),
            (q(1, 6), t.lb(x, &xy)),
            (q(-1, 4), t.lb(x, &pxy)),
            (q(-1, 2), t.lb(&rxx, y)),
            (q(-1, 1), t.lb(x, &rxy)),
        ]);
        let f = s(&[
            (q(1, 1), t.r(y, &pxy)),
            (q(3, 1), t.s(x, y, y)),
            (q(-1, 3), t.lb(y, &yx)),
            (q(1, 4), t.lb(y, &pyx)),
            (q(-1, 2), t.lb(x, &ryy)),
            (q(-1, 1), t.lb(y, &rxy)),
        ]);

        let lam = t.lambda(&xy);
        let inner_pu = match variant {
            QuarticVariant::Printed => s(&[(q(-1, 12), lam.clone()), (q(2, 1), rxy.clone())]),
            QuarticVariant::HalfLambda | QuarticVariant::Completed => {
                s(&[(q(-1, 2), lam.clone()), (q(2, 1), rxy.clone())])
            }
        };
        let inner_q = s(&[(q(-1, 2), lam), (q(2, 1), rxy.clone())]);

        let mut p = s(&[
            (q(-1, 2), t.pb(y, &t.s(x, x, x))),
            (q(1, 12), t.pb(x, &t.br(x, &inner_pu))),
            (q(1, 2), t.pb(x, &e)),
        ]);
        let mut u = s(&[
            (q(1, 2), t.pb(x, &t.s(y, y, y))),
            (q(1, 12), t.pb(y, &t.br(y, &inner_pu))),
            (q(1, 2), t.pb(y, &f)),
        ]);
        if variant == QuarticVariant::Completed {
            p = p.add(&s(&[
                (q(1, 12), t.pb(x, &t.br(&rxx, y))),
                (q(1, 12), t.pb(&rxx, &xy)),
            ]));
            u = u.add(&s(&[
                (q(1, 12), t.pb(y, &t.br(&ryy, x))),
                (q(1, 12), t.pb(&ryy, &yx)),
            ]));
        }
        let qq = s(&[
            (q(1, 2), t.pb(y, &e)),
            (q(1, 2), t.pb(x, &f)),
            (q(-1, 8), t.pb(&pxy, &xy)),
            (q(1, 2), t.pb(&pxy, &rxy)),
            (q(1, 12), t.pb(x, &t.br(y, &inner_q))),
            (q(1, 12), t.pb(y, &t.br(x, &inner_q))),
            (q(1, 12), t.pb(x, &t.br(x, &ryy))),
            (q(1, 12), t.pb(y, &t.br(y, &rxx))),
            (q(-1, 48), t.pb(y, &t.br(x, &xy))),
            (q(-1, 48), t.pb(x, &t.br(y, &xy))),
        ]);

        // each formula is homogeneous by construction; keep only its own bidegree
        let part = |series: Series<T>, c: Coefficient| {
            let (a, b) = c.bidegree();
            series.bidegree(a, b, 0)
        };
        ClosedForms {
            k: part(k, Coefficient::K),
            l: part(l, Coefficient::L),
            m: part(m, Coefficient::M),
            h2: part(h2, Coefficient::H2),
            e: part(e, Coefficient::E),
            f: part(f, Coefficient::F),
            p: part(p, Coefficient::P),
            q: part(qq, Coefficient::Q),
            u: part(u, Coefficient::U),
        }
    }

    pub fn series(&self, c: Coefficient) -> &Series<T> {
        match c {
            Coefficient::K => &self.k,
            Coefficient::L => &self.l,
            Coefficient::M => &self.m,
            Coefficient::P => &self.p,
            Coefficient::Q => &self.q,
            Coefficient::U => &self.u,
            Coefficient::H2 => &self.h2,
            Coefficient::E => &self.e,
            Coefficient::F => &self.f,
        }
    }

    pub fn coefficient(&self, c: Coefficient) -> MultilinearMap<T> {
        let (p, q) = c.bidegree();
        self.series(c).tensor(p, q, 0)
    }

    /// Assembles `z = x̄ + ȳ + K + L + M + P + Q + U` and `h = h₂ + E + F`.
    pub fn expansion(&self) -> Result<LoopExpansion<T>> {
        let space = self.k.space();
        let dim = self.k.dim();
        let mut z = Series::x_bar(space, dim).add(&Series::y_bar(space, dim));
        for c in [&self.k, &self.l, &self.m, &self.p, &self.q, &self.u] {
            z = z.add(c);
        }
        let h = self.h2.add(&self.e).add(&self.f);
        LoopExpansion::new(z, h)
    }
}

/// The closed-form expansion for a model under one quartic reading.
pub fn closed_form_expansion<T: Scalar>(model: &Model<T>, variant: QuarticVariant) -> Result<LoopExpansion<T>> {
    ClosedForms::new(model, variant).expansion()
}
