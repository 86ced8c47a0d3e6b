//! The same code paths over floating point and dual numbers.

use webtensor_core::closed::{ClosedForms, QuarticVariant};
use num_traits::Zero;
use webtensor_core::fixtures::{fixture_b_curved, random_model, sl2};
use webtensor_core::scalar::Scalar;
use webtensor_core::{AlgVec, Coefficient, Dual, Model, Monomial, Rat, Series, VarSpace, WebTensorSet};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn to_f64(model: &Model<Rat>) -> Model<f64> {
    let f = |r: &Rat| r.to_f64().unwrap();
    Model::new(model.name.clone(), model.split.map_scalars(f), model.jet.map_scalars(f))
}

fn close(a: &[f64], b: &[Rat]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y.to_f64().unwrap()).abs() < 1e-9)
}

#[test]
fn floating_point_tensors_track_exact_ones() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for exact in [fixture_b_curved(), random_model(&mut rng, 5)] {
        let float = to_f64(&exact);
        let ex = WebTensorSet::compute(&exact, &exact.solve_loop_oracle().unwrap()).unwrap();
        let fl = WebTensorSet::compute(&float, &float.solve_loop_oracle().unwrap()).unwrap();
        for ((name, e), (_, f)) in ex.named().into_iter().zip(fl.named()) {
            assert!(close(f.coefficients(), e.coefficients()), "{name}");
        }
    }
}

#[test]
fn single_precision_closed_forms_run() {
    let exact = fixture_b_curved();
    let float: Model<f32> = Model::new("f32", exact.split.map_scalars(|r| r.to_f32().unwrap()), exact.jet.map_scalars(|r| r.to_f32().unwrap()));
    let forms = ClosedForms::new(&float, QuarticVariant::Completed);
    let oracle = float.solve_loop_oracle().unwrap();
    for c in Coefficient::ALL {
        let (a, b) = (oracle.coefficient(c), forms.coefficient(c));
        assert!(a.coefficients().iter().zip(b.coefficients()).all(|(x, y)| (x - y).abs() < 1e-5), "{}", c.name());
    }
}

#[test]
fn dual_numbers_differentiate_the_group_law() {
    // bch4(sE, F) is cubic in s, so a Richardson step on central differences
    // gives the exact derivative at s = 1
    let alg = sl2();
    let at = |s: i64| {
        let x = Series::constant(VarSpace::pair(1), AlgVec::basis(3, 0).scale(&Rat::int(s)));
        let y = Series::constant(VarSpace::pair(1), AlgVec::basis(3, 1));
        alg.bch4(&x, &y).unwrap().coefficient(Monomial::ONE)
    };
    let central = |h: i64| (&at(1 + h) - &at(1 - h)).scale(&Rat::frac(1, 2 * h));
    let exact = (&central(1).scale(&Rat::int(4)) - &central(2)).scale(&Rat::frac(1, 3));

    let dual = alg.map_scalars(|r| Dual::real(r.clone()));
    let x = Series::constant(VarSpace::pair(1), AlgVec::from_coords(vec![Dual::new(Rat::int(1), Rat::int(1)), Dual::zero(), Dual::zero()]));
    let y = Series::constant(VarSpace::pair(1), AlgVec::basis(3, 1));
    let g = dual.bch4(&x, &y).unwrap().coefficient(Monomial::ONE);
    assert_eq!(g.map(|d| d.re.clone()), at(1));
    assert_eq!(g.map(|d| d.eps.clone()), exact);
}
