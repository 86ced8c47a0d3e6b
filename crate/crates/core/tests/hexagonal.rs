//! Hexagonality: the cyclic condition on `R`, symmetrized curvature, and the
//! condition on `d`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use webtensor_core::fixtures::*;
use webtensor_core::scalar::Scalar;
use webtensor_core::tensors::*;
use webtensor_core::{AlgVec, Model, MultilinearMap, Rat, SectionJet, Split};

fn curvature(split: &Split<Rat>, jet: &SectionJet<Rat>) -> MultilinearMap<Rat> {
    closed_b(split, jet, CurvatureVariant::Statement)
}

#[test]
fn flat_sl2_is_hexagonal() {
    let m = fixture_a();
    assert!(hexagonal_condition(&m.split, &m.jet).is_zero());
    let b = curvature(&m.split, &m.jet);
    assert!(cyclic_symmetrization(&b).is_zero());
    assert!(full_symmetrization(&b).is_zero());
}

#[test]
fn curved_sl2_fails_at_the_expected_triple() {
    // Π[R(E,E),F] + Π[R(E,F),E] + Π[R(F,E),E] = Π[H,F] = −2F
    let m = sl2r();
    let condition = hexagonal_condition(&m.split, &m.jet);
    let minus_two_f = AlgVec::from_coords(vec![Rat::int(0), Rat::int(-2), Rat::int(0)]);
    assert_eq!(condition.value(&[0, 0, 1]), minus_two_f);
    // 3Π[H,E] = 6E at (E,E,E)
    assert_eq!(condition.value(&[0, 0, 0]), AlgVec::from_coords(vec![Rat::int(6), Rat::int(0), Rat::int(0)]));
    assert!(!cyclic_symmetrization(&curvature(&m.split, &m.jet)).is_zero());
}

#[test]
fn group_split_is_hexagonal() {
    let m = h_trivial();
    assert!(hexagonal_condition(&m.split, &m.jet).is_zero());
    assert!(curvature(&m.split, &m.jet).is_zero());
}

/// `σΠ[Π[x,y],z]` over cyclic permutations.
fn projected_jacobi(split: &Split<Rat>) -> MultilinearMap<Rat> {
    tensor_from(split, 3, |a| {
        let mut out = AlgVec::zeros(split.dim());
        for (x, y, z) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            out.add_scaled(&Rat::int(1), &split.pi_bracket(&split.proj_v(&split.bracket(&a[x], &a[y])), &a[z]));
        }
        out
    })
}

#[test]
fn cyclic_curvature_splits_into_r_part_and_projected_jacobi() {
    // 3·b_(jkl) = ½σΠ[Π[x,y],z] − 2σΠ[R(x,y),z]; the bracket term cancels by Jacobi
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..20 {
        let split = random_nilpotent_split(&mut rng, 7);
        let jet = random_jet(&mut rng, &split, false);
        let lhs = cyclic_symmetrization(&curvature(&split, &jet)).scale(&Rat::int(3));
        let rhs = projected_jacobi(&split).combine(&Rat::frac(1, 2), &hexagonal_condition(&split, &jet), &Rat::int(-2));
        assert_eq!(lhs, rhs);
        // the full symmetrization sees only the R part
        let full = full_symmetrization(&curvature(&split, &jet)).scale(&Rat::int(3));
        assert_eq!(full, full_symmetrization(&hexagonal_condition(&split, &jet)).scale(&Rat::int(-2)));
    }
}

#[test]
fn verdicts_agree_on_random_r() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let m = random_model(&mut rng, 6);
        let hex = hexagonal_condition(&m.split, &m.jet).is_zero();
        let b = curvature(&m.split, &m.jet);
        assert_eq!(full_symmetrization(&b).is_zero(), hex);
        if m.v_dim() <= 2 {
            assert_eq!(cyclic_symmetrization(&b).is_zero(), hex);
        }
    }
}

#[test]
fn cyclic_symmetrization_can_disagree_once_v_has_three_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let found = (0..200).find_map(|_| {
        let split = random_nilpotent_split(&mut rng, 7);
        let b = curvature(&split, &SectionJet::zero(&split));
        (split.v_dim() >= 3 && !cyclic_symmetrization(&b).is_zero()).then_some(split)
    });
    let split = found.expect("a flat split whose cyclic curvature is nonzero");
    let m = Model::flat("witness", split);
    assert!(hexagonal_condition(&m.split, &m.jet).is_zero());
    assert!(full_symmetrization(&curvature(&m.split, &m.jet)).is_zero());
}

fn random_hexagonal_models(seed: u64, count: usize) -> Vec<Model<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let split = random_nilpotent_split(&mut rng, 7);
        if split.v_dim() < 2 {
            continue;
        }
        if let Some(jet) = random_hexagonal_jet(&mut rng, &split) {
            out.push(Model::new("hexagonal", split, jet));
        }
    }
    out
}

#[test]
fn d_condition_holds_on_random_hexagonal_r() {
    for m in random_hexagonal_models(44, 10) {
        assert!(!m.jet.r().is_zero());
        assert!(hexagonal_condition(&m.split, &m.jet).is_zero());
        let oracle = m.solve_loop_oracle().unwrap();
        let (_, d) = second_derivative_path(&m.split, &oracle).unwrap();
        assert!(cyclic_symmetrization_first3(&d).is_zero());
        assert!(hexagonal_d_condition(&m.split, &m.jet).is_zero());
    }
}

#[test]
fn d_condition_tracks_cyclic_d_under_the_r_condition() {
    // R satisfying only the cyclic condition need not extend to a hexagonal web
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let mut tested = 0;
    while tested < 20 {
        let split = random_nilpotent_split(&mut rng, 6);
        let basis = hexagonal_r_basis(&split);
        if basis.is_empty() {
            continue;
        }
        let r = basis.iter().fold(MultilinearMap::uniform_zeros(2, split.v_dim(), split.dim()), |acc, b| {
            acc.combine(&Rat::int(1), b, &random_rat(&mut rng))
        });
        let jet = SectionJet::new(&split, r, MultilinearMap::uniform_zeros(3, split.v_dim(), split.dim())).unwrap();
        let d = closed_d(&split, &jet);
        assert_eq!(hexagonal_d_condition(&split, &jet).is_zero(), cyclic_symmetrization_first3(&d).is_zero());
        tested += 1;
    }
}
