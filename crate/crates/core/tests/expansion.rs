//! Closed coefficient formulas against the projection solver, and the loop laws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use webtensor_core::closed::{ClosedForms, QuarticVariant};
use webtensor_core::fixtures::*;
use webtensor_core::scalar::Scalar;
use webtensor_core::series::substitute;
use webtensor_core::{AlgVec, Coefficient, Model, Monomial, Rat, Series, VarSpace};

fn random_models(seed: u64, count: usize) -> Vec<Model<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_model(&mut rng, 6)).collect()
}

fn mismatches(model: &Model<Rat>, variant: QuarticVariant) -> Vec<&'static str> {
    let oracle = model.solve_loop_oracle().unwrap();
    let forms = ClosedForms::new(model, variant);
    Coefficient::ALL.into_iter().filter(|&c| oracle.coefficient(c) != forms.coefficient(c)).map(Coefficient::name).collect()
}

#[test]
fn low_order_closed_forms_match_solver() {
    let mut models = all_fixtures();
    models.extend(random_models(21, 20));
    for m in &models {
        let bad = mismatches(m, QuarticVariant::Printed);
        for c in &bad {
            assert!(matches!(*c, "P" | "U"), "{}: {c} differs from the solver", m.name);
        }
    }
}

#[test]
fn completed_quartic_forms_match_solver_everywhere() {
    let mut models = all_fixtures();
    models.extend(random_models(22, 10));
    for m in &models {
        assert!(mismatches(m, QuarticVariant::Completed).is_empty(), "{}", m.name);
    }
}

#[test]
fn printed_quartic_forms_fail_only_with_curvature_terms() {
    // R(E,E) = F in the (E,H,F) split feeds [R(x,x),y] terms the printed formulas omit
    assert_eq!(mismatches(&fixture_b_curved(), QuarticVariant::Printed), vec!["P", "U"]);
    assert_eq!(mismatches(&fixture_b_curved(), QuarticVariant::HalfLambda), vec!["P", "U"]);
    for m in [fixture_a(), fixture_b(), heisenberg(), abelian(), h_trivial()] {
        assert!(mismatches(&m, QuarticVariant::Printed).is_empty(), "{}", m.name);
    }
}

#[test]
fn second_order_by_hand_on_fixture_a() {
    // K(x,y) = ½Π[x,y]; [E,F] = H lies in 𝔥, so K vanishes; h₂(E,F) = −½[E,F] + ½Π[E,F] = −½H
    let oracle = fixture_a().solve_loop_oracle().unwrap();
    assert!(oracle.coefficient(Coefficient::K).is_zero());
    let h2 = oracle.coefficient(Coefficient::H2);
    assert_eq!(h2.value(&[0, 1]), AlgVec::from_coords(vec![Rat::int(0), Rat::int(0), Rat::frac(-1, 2)]));
}

#[test]
fn group_split_solves_to_the_group_law() {
    let m = h_trivial();
    let oracle = m.solve_loop_oracle().unwrap();
    let space = oracle.space();
    let bch = m.split.algebra().bch4(&Series::x_bar(space, 3), &Series::y_bar(space, 3)).unwrap();
    assert_eq!(oracle.z(), &bch);
    assert!(oracle.h().is_zero());
}

#[test]
fn solved_product_lies_on_the_section() {
    // exp(x+φ(x))·exp(y+φ(y))·exp(h) = exp(z+φ(z)) with z in V and h in 𝔥
    for m in random_models(23, 5).iter().chain(all_fixtures().iter()) {
        let oracle = m.solve_loop_oracle().unwrap();
        let space = oracle.space();
        let alg = m.split.algebra();
        let x = m.embed(&Series::x_bar(space, m.dim())).unwrap();
        let y = m.embed(&Series::y_bar(space, m.dim())).unwrap();
        let lhs = alg.bch4(&alg.bch4(&x, &y).unwrap(), oracle.h()).unwrap();
        assert_eq!(lhs, m.embed(oracle.z()).unwrap(), "{}", m.name);
        assert_eq!(m.split.proj_v_series(oracle.z()), *oracle.z());
        assert_eq!(m.split.proj_h_series(oracle.h()), *oracle.h());
    }
}

/// `s·v` for a scalar formal variable `s`.
fn scaled(space: VarSpace, var: usize, v: &AlgVec<Rat>) -> Series<Rat> {
    Series::term(space, Monomial::var(var), v.clone())
}

#[test]
fn units_and_divisions_hold_on_fixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let space = VarSpace::new(1, 1, false);
    for m in all_fixtures() {
        let oracle = m.solve_loop_oracle().unwrap();
        let (n, dim) = (m.v_dim(), m.dim());
        let zero = AlgVec::zeros(dim);
        for _ in 0..10 {
            let (u, w) = (random_vector(&mut rng, dim, n), random_vector(&mut rng, dim, n));
            assert_eq!(oracle.compose(&u, &zero).unwrap(), u);
            assert_eq!(oracle.compose(&zero, &w).unwrap(), w);
            let (us, ws) = (scaled(space, 0, &u), scaled(space, 1, &w));
            let left = oracle.left_divide_series(&us, &ws).unwrap();
            assert_eq!(oracle.compose_series(&us, &left).unwrap(), ws, "{}", m.name);
            let right = oracle.right_divide_series(&ws, &us).unwrap();
            assert_eq!(oracle.compose_series(&right, &us).unwrap(), ws, "{}", m.name);
        }
    }
}

#[test]
fn pointwise_divisions_are_exact_where_the_truncation_is() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for m in [fixture_a(), fixture_b_curved(), heisenberg()] {
        let oracle = m.solve_loop_oracle().unwrap();
        let (n, dim) = (m.v_dim(), m.dim());
        let zero = AlgVec::zeros(dim);
        for _ in 0..10 {
            let u = random_vector(&mut rng, dim, n);
            assert_eq!(oracle.left_divide(&u, &u).unwrap(), zero);
            assert_eq!(oracle.right_divide(&u, &u).unwrap(), zero);
            assert_eq!(oracle.left_divide(&zero, &u).unwrap(), u);
            assert_eq!(oracle.right_divide(&u, &zero).unwrap(), u);
        }
    }
}

#[test]
fn h_has_the_stated_second_order_value() {
    // h(x,y) = −½[x,y] + ½Π[x,y] + 2R(x,y) at second order
    for m in random_models(25, 5) {
        let oracle = m.solve_loop_oracle().unwrap();
        let space = oracle.space();
        let alg = m.split.algebra();
        let (x, y) = (Series::x_bar(space, m.dim()), Series::y_bar(space, m.dim()));
        let xy = alg.bracket_series(&x, &y).unwrap();
        let expected = xy
            .scale(&Rat::frac(-1, 2))
            .add(&m.split.proj_v_series(&xy).scale(&Rat::frac(1, 2)))
            .add(&substitute(m.jet.r(), &[&x, &y]).unwrap().scale(&Rat::int(2)));
        assert_eq!(oracle.h().homogeneous(2), expected);
    }
}
