//! Order-four group law: algebraic laws on formal inputs and exact agreement
//! with matrix exponentials in nilpotent matrix algebras.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use webtensor_core::fixtures::{heisenberg, random_matrix_split, random_vector, sl2};
use webtensor_core::linalg::Matrix;
use webtensor_core::scalar::Scalar;
use webtensor_core::{AlgVec, LieAlgebra, Monomial, Rat, Series, VarSpace};

/// Three scalar formal variables `s₁, s₂` (x-group) and `s₃` (y-group).
fn formal(dim: usize, var: usize, v: &AlgVec<Rat>) -> Series<Rat> {
    let space = VarSpace::new(2, 1, false);
    assert_eq!(v.dim(), dim);
    Series::term(space, Monomial::var(var), v.clone())
}

fn check_laws(alg: &LieAlgebra<Rat>, rng: &mut ChaCha8Rng) {
    let dim = alg.dim();
    for _ in 0..10 {
        let (a0, b0, c0) = (random_vector(rng, dim, dim), random_vector(rng, dim, dim), random_vector(rng, dim, dim));
        let (a, b, c) = (formal(dim, 0, &a0), formal(dim, 1, &b0), formal(dim, 2, &c0));
        let left = alg.bch4(&alg.bch4(&a, &b).unwrap(), &c).unwrap();
        let right = alg.bch4(&a, &alg.bch4(&b, &c).unwrap()).unwrap();
        assert_eq!(left, right, "associativity");
        let zero = Series::zero(a.space(), dim);
        assert_eq!(alg.bch4(&a, &zero).unwrap(), a, "right unit");
        assert_eq!(alg.bch4(&zero, &a).unwrap(), a, "left unit");
        assert!(alg.bch4(&a, &alg.bch4_inverse(&a)).unwrap().is_zero(), "right inverse");
        assert!(alg.bch4(&alg.bch4_inverse(&a), &a).unwrap().is_zero(), "left inverse");
    }
}

#[test]
fn group_laws_on_sl2_and_heisenberg() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    check_laws(&sl2(), &mut rng);
    check_laws(heisenberg().split.algebra(), &mut rng);
}

#[test]
fn group_laws_on_random_nilpotent_algebras() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let m = random_matrix_split(&mut rng, 8);
        check_laws(m.split.algebra(), &mut rng);
    }
}

/// `exp` and `log` of nilpotent matrices are finite sums.
fn exp(a: &Matrix) -> Matrix {
    let k = a.rows();
    let (mut term, mut sum) = (Matrix::identity(k), Matrix::identity(k));
    for j in 1..k {
        term = term.mul(a).scale(&Rat::frac(1, j as i64));
        sum = sum.add(&term);
    }
    sum
}

fn log(g: &Matrix) -> Matrix {
    let k = g.rows();
    let n = g.sub(&Matrix::identity(k));
    let (mut power, mut sum) = (Matrix::identity(k), Matrix::zeros(k, k));
    for j in 1..k {
        power = power.mul(&n);
        let sign = if j % 2 == 1 { 1 } else { -1 };
        sum = sum.add(&power.scale(&Rat::frac(sign, j as i64)));
    }
    sum
}

#[test]
fn group_law_matches_matrix_exponentials() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let m = random_matrix_split(&mut rng, 8);
        // brackets of length five vanish for matrices of size at most four
        assert!(m.matrices[0].rows() <= 4);
        let alg = m.split.algebra();
        let dim = alg.dim();
        let space = VarSpace::pair(1);
        for _ in 0..10 {
            let (a, b) = (random_vector(&mut rng, dim, dim), random_vector(&mut rng, dim, dim));
            let product = alg.bch4(&Series::constant(space, a.clone()), &Series::constant(space, b.clone())).unwrap();
            let expected = m.coords_of(&log(&exp(&m.matrix_of(&a)).mul(&exp(&m.matrix_of(&b))))).expect("log stays in the algebra");
            assert_eq!(product.coefficient(Monomial::ONE), expected);
        }
    }
}

#[test]
fn sl2_group_law_point_value() {
    let alg = sl2();
    let space = VarSpace::pair(1);
    let e = Series::constant(space, AlgVec::basis(3, 0));
    let f = Series::constant(space, AlgVec::basis(3, 1));
    let g = alg.bch4(&e, &f).unwrap();
    let expected = AlgVec::from_coords(vec![Rat::frac(5, 6), Rat::frac(5, 6), Rat::frac(5, 12)]);
    assert_eq!(g.coefficient(Monomial::ONE), expected);
}
