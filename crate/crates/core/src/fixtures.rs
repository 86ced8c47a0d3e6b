//! Named test models and seeded random instances.
//!
//! Fixture bases are 0-based in code. In the `sl₂` models `E, F, H` satisfy
//! `[E,F] = H`, `[H,E] = 2E`, `[H,F] = −2F`.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{AlgVec, LieAlgebra, Split};
use crate::linalg::{extend_basis, Matrix};
use crate::loops::{Model, SectionJet};
use crate::multilinear::{index_tuples, MultilinearMap};
use crate::scalar::{Rat, Scalar};
use crate::tensors::{closed_d, cyclic_symmetrization_first3, hexagonal_condition};

fn q(p: i64) -> Rat {
    Rat::int(p)
}

/// `sl₂` in the basis `(E, F, H)`.
pub fn sl2() -> LieAlgebra<Rat> {
    LieAlgebra::from_brackets(3, &[(0, 1, 2, q(1)), (2, 0, 0, q(2)), (2, 1, 1, q(-2))])
}

/// `sl₂` with `V = span{E, F}`, `𝔥 = span{H}`, flat section.
pub fn fixture_a() -> Model<Rat> {
    Model::flat("sl2-a", Split::new(sl2(), 2).unwrap())
}

/// `sl₂` in the adapted basis `(E, H, F)`: `V = span{E, H}`, `𝔥 = span{F}`.
pub fn fixture_b_split() -> Split<Rat> {
    let g = LieAlgebra::from_brackets(3, &[(0, 2, 1, q(1)), (1, 0, 0, q(2)), (1, 2, 2, q(-2))]);
    Split::new(g, 2).unwrap()
}

pub fn fixture_b() -> Model<Rat> {
    Model::flat("sl2-b", fixture_b_split())
}

/// Fixture B with `R(E, E) = F`.
pub fn fixture_b_curved() -> Model<Rat> {
    let split = fixture_b_split();
    let jet = SectionJet::from_entries(&split, &[(vec![0, 0], 2, q(1))], &[]).unwrap();
    Model::new("sl2-b-r", split, jet)
}

/// Fixture A with `R(E, E) = H`.
pub fn sl2r() -> Model<Rat> {
    let split = Split::new(sl2(), 2).unwrap();
    let jet = SectionJet::from_entries(&split, &[(vec![0, 0], 2, q(1))], &[]).unwrap();
    Model::new("sl2r", split, jet)
}

/// Heisenberg algebra `[e1, e2] = e3` with `𝔥` the center.
pub fn heisenberg() -> Model<Rat> {
    let g = LieAlgebra::from_brackets(3, &[(0, 1, 2, q(1))]);
    Model::flat("heisenberg", Split::new(g, 2).unwrap())
}

pub fn abelian() -> Model<Rat> {
    Model::flat("abelian", Split::new(LieAlgebra::abelian(3), 2).unwrap())
}

/// `sl₂` with `𝔥 = 0`: the loop is the group itself.
pub fn h_trivial() -> Model<Rat> {
    Model::flat("sl2-group", Split::new(sl2(), 3).unwrap())
}

/// Every named fixture.
pub fn all_fixtures() -> Vec<Model<Rat>> {
    vec![fixture_a(), fixture_b(), fixture_b_curved(), sl2r(), heisenberg(), abelian(), h_trivial()]
}

/// Small nonzero-biased rational.
pub fn random_rat<R: Rng + ?Sized>(rng: &mut R) -> Rat {
    let den = *[1i64, 1, 2, 3].choose(rng).unwrap();
    Rat::frac(rng.gen_range(-3..=3), den)
}

pub fn random_vector(rng: &mut impl Rng, dim: usize, support: usize) -> AlgVec<Rat> {
    let mut coords = vec![Rat::zero(); dim];
    for c in coords.iter_mut().take(support) {
        *c = random_rat(rng);
    }
    AlgVec::from_coords(coords)
}

/// Random Lie algebra of nilpotent matrices with a random adapted split.
///
/// The algebra is the Lie closure of a few random strictly upper triangular
/// matrices (so Jacobi holds exactly and the algebra is nilpotent). `𝔥` is the
/// Lie closure of one random element and `V` a random complement. Structure
/// constants are read off in the adapted basis.
pub fn random_nilpotent_split(rng: &mut impl Rng, max_dim: usize) -> Split<Rat> {
    random_matrix_split(rng, max_dim).split
}

/// A split realized by strictly upper triangular matrices; `matrices[i]` is
/// the adapted basis vector `e_i`.
#[derive(Clone, Debug)]
pub struct MatrixSplit {
    pub split: Split<Rat>,
    pub matrices: Vec<Matrix>,
}

impl MatrixSplit {
    /// `Σ v_i matrices[i]`.
    pub fn matrix_of(&self, v: &AlgVec<Rat>) -> Matrix {
        let k = self.matrices[0].rows();
        let mut acc = Matrix::zeros(k, k);
        for (c, m) in v.coords().iter().zip(&self.matrices) {
            for i in 0..k {
                for j in 0..k {
                    acc[(i, j)] += c * &m[(i, j)];
                }
            }
        }
        acc
    }

    /// Coordinates of a matrix in the span of the basis.
    pub fn coords_of(&self, m: &Matrix) -> Option<AlgVec<Rat>> {
        let columns = Matrix::from_columns(&self.matrices.iter().map(Matrix::flatten).collect::<Vec<_>>());
        columns.solve(&m.flatten()).map(AlgVec::from_coords)
    }
}

/// Random split of a nilpotent matrix algebra of dimension `3..=max_dim`.
pub fn random_matrix_split(rng: &mut impl Rng, max_dim: usize) -> MatrixSplit {
    loop {
        if let Some(split) = try_random_split(rng, max_dim) {
            return split;
        }
    }
}

fn random_strict_upper(rng: &mut impl Rng, k: usize) -> Matrix {
    let mut m = Matrix::zeros(k, k);
    for i in 0..k {
        for j in i + 1..k {
            if rng.gen_bool(0.6) {
                m[(i, j)] = Rat::int(rng.gen_range(-2..=2));
            }
        }
    }
    m
}

/// Basis of the Lie closure of `gens` (flattened matrices).
fn lie_closure(gens: &[Matrix]) -> Vec<Matrix> {
    let mut basis: Vec<Matrix> = Vec::new();
    let mut flat: Vec<Vec<Rat>> = Vec::new();
    let mut queue: Vec<Matrix> = gens.to_vec();
    while let Some(m) = queue.pop() {
        let before = flat.len();
        extend_basis(&mut flat, [m.flatten()]);
        if flat.len() == before {
            continue;
        }
        for b in &basis {
            queue.push(b.commutator(&m));
        }
        basis.push(m);
    }
    basis
}

fn try_random_split(rng: &mut impl Rng, max_dim: usize) -> Option<MatrixSplit> {
    let k = rng.gen_range(3..=4);
    let gens: Vec<Matrix> = (0..rng.gen_range(2..=3)).map(|_| random_strict_upper(rng, k)).collect();
    let algebra = lie_closure(&gens);
    let dim = algebra.len();
    if !(3..=max_dim).contains(&dim) {
        return None;
    }
    let combo = |rng: &mut dyn rand::RngCore| -> Matrix {
        let mut acc = Matrix::zeros(k, k);
        for b in &algebra {
            let c = Rat::int(rng.gen_range(-2..=2));
            for i in 0..k {
                for j in 0..k {
                    acc[(i, j)] += &c * &b[(i, j)];
                }
            }
        }
        acc
    };
    let mut h_gens = vec![combo(rng)];
    if rng.gen_bool(0.3) {
        h_gens.push(combo(rng));
    }
    let h = lie_closure(&h_gens);
    if h.is_empty() || h.len() >= dim {
        return None;
    }
    // V: random complement of 𝔥
    let mut flat: Vec<Vec<Rat>> = h.iter().map(Matrix::flatten).collect();
    let mut v: Vec<Matrix> = Vec::new();
    while flat.len() < dim {
        let cand = combo(rng);
        let before = flat.len();
        extend_basis(&mut flat, [cand.flatten()]);
        if flat.len() > before {
            v.push(cand);
        }
    }
    let adapted: Vec<Matrix> = v.iter().chain(h.iter()).cloned().collect();
    let columns = Matrix::from_columns(&adapted.iter().map(Matrix::flatten).collect::<Vec<_>>());
    let mut constants = vec![Rat::zero(); dim * dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let c = adapted[i].commutator(&adapted[j]);
            let coords = columns.solve(&c.flatten())?;
            for (kk, val) in coords.into_iter().enumerate() {
                constants[(i * dim + j) * dim + kk] = val;
            }
        }
    }
    let split = Split::new(LieAlgebra::from_dense(dim, constants), v.len()).ok()?;
    split.ensure_valid().ok()?;
    Some(MatrixSplit { split, matrices: adapted })
}

/// Random symmetric `𝔥`-valued `R` and `S` for a split.
pub fn random_jet(rng: &mut impl Rng, split: &Split<Rat>, with_s: bool) -> SectionJet<Rat> {
    let (n, dim) = (split.v_dim(), split.dim());
    let fill = |k: usize, rng: &mut dyn rand::RngCore| {
        let mut map = MultilinearMap::uniform_zeros(k, n, dim);
        for idx in index_tuples(&vec![n; k]) {
            if idx.windows(2).all(|w| w[0] <= w[1]) {
                let mut v = AlgVec::zeros(dim);
                for a in n..dim {
                    if rng.gen_bool(0.7) {
                        v[a] = random_rat(rng);
                    }
                }
                map.set(&idx, &v);
            }
        }
        map
    };
    let r = fill(2, rng);
    let s = if with_s { fill(3, rng) } else { MultilinearMap::uniform_zeros(3, n, dim) };
    // a representative per sorted index set, spread over all orderings
    let spread = |m: MultilinearMap<Rat>, k: usize| {
        MultilinearMap::from_fn(vec![n; k], dim, |idx| {
            let mut sorted = idx.to_vec();
            sorted.sort_unstable();
            m.value(&sorted)
        })
    };
    SectionJet::new(split, spread(r, 2), spread(s, 3)).expect("h-valued symmetric jet")
}

/// Random model: nilpotent split plus random `R`, `S`.
pub fn random_model(rng: &mut impl Rng, max_dim: usize) -> Model<Rat> {
    let split = random_nilpotent_split(rng, max_dim);
    let jet = random_jet(rng, &split, true);
    Model::new("random", split, jet)
}

/// Symmetric `𝔥`-valued `R` with a single nonzero representative entry.
fn unit_r(split: &Split<Rat>, j: usize, k: usize, alpha: usize) -> MultilinearMap<Rat> {
    let (n, dim) = (split.v_dim(), split.dim());
    let mut r = MultilinearMap::uniform_zeros(2, n, dim);
    let v = AlgVec::basis(dim, alpha);
    r.set(&[j, k], &v);
    r.set(&[k, j], &v);
    r
}

fn flatten(maps: &[MultilinearMap<Rat>]) -> Vec<Rat> {
    maps.iter().flat_map(|m| m.coefficients().iter().cloned()).collect()
}

/// Solution set `R₀ + span(directions)` of the affine conditions `constraint(R) = 0`
/// over symmetric `𝔥`-valued `R`, or `None` if there is no solution.
/// `constraint` must be affine in `R`.
pub fn r_solutions(
    split: &Split<Rat>,
    constraint: impl Fn(&SectionJet<Rat>) -> Vec<MultilinearMap<Rat>>,
) -> Option<(MultilinearMap<Rat>, Vec<MultilinearMap<Rat>>)> {
    let (n, dim) = (split.v_dim(), split.dim());
    let units: Vec<MultilinearMap<Rat>> = (0..n)
        .flat_map(|j| (j..n).flat_map(move |k| (n..dim).map(move |al| (j, k, al))))
        .map(|(j, k, al)| unit_r(split, j, k, al))
        .collect();
    restricted_r_solutions(split, &MultilinearMap::uniform_zeros(2, n, dim), &units, constraint)
}

/// Like [`r_solutions`] but over `R = base + Σ cᵢ candidates[i]`.
pub fn restricted_r_solutions(
    split: &Split<Rat>,
    base: &MultilinearMap<Rat>,
    candidates: &[MultilinearMap<Rat>],
    constraint: impl Fn(&SectionJet<Rat>) -> Vec<MultilinearMap<Rat>>,
) -> Option<(MultilinearMap<Rat>, Vec<MultilinearMap<Rat>>)> {
    let (n, dim) = (split.v_dim(), split.dim());
    let zero_s = MultilinearMap::uniform_zeros(3, n, dim);
    let jet_of = |r: &MultilinearMap<Rat>| SectionJet::new(split, r.clone(), zero_s.clone()).expect("h-valued");
    let origin = flatten(&constraint(&jet_of(base)));
    let columns: Vec<Vec<Rat>> = candidates
        .iter()
        .map(|c| {
            let shifted = base.combine(&Rat::int(1), c, &Rat::int(1));
            flatten(&constraint(&jet_of(&shifted))).iter().zip(&origin).map(|(x, o)| x - o).collect()
        })
        .collect();
    let combine = |coefs: &[Rat]| {
        candidates.iter().zip(coefs).fold(base.clone(), |acc, (c, k)| acc.combine(&Rat::int(1), c, k))
    };
    if columns.is_empty() {
        return origin.iter().all(Zero::is_zero).then(|| (base.clone(), Vec::new()));
    }
    // rows that vanish for every unknown carry no condition beyond the origin
    let live: Vec<usize> = (0..origin.len()).filter(|&i| columns.iter().any(|c| !c[i].is_zero())).collect();
    if (0..origin.len()).any(|i| !origin[i].is_zero() && !live.contains(&i)) {
        return None;
    }
    let rows: Vec<Vec<Rat>> = live.iter().map(|&i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    if rows.is_empty() {
        let all = (0..candidates.len()).map(|i| candidates[i].clone()).collect();
        return Some((base.clone(), all));
    }
    let matrix = Matrix::from_rows(&rows);
    let rhs: Vec<Rat> = live.iter().map(|&i| -origin[i].clone()).collect();
    let particular = matrix.solve(&rhs)?;
    let directions = matrix
        .nullspace()
        .iter()
        .map(|c| candidates.iter().zip(c).fold(MultilinearMap::uniform_zeros(2, n, dim), |acc, (m, k)| acc.combine(&Rat::int(1), m, k)))
        .collect();
    Some((combine(&particular), directions))
}

/// The conditions on `R` for the web to be hexagonal to the order the jet
/// sees: the cyclic condition on `R` and the cyclic part of `d` over its first
/// three slots.
pub fn hexagonal_constraints(split: &Split<Rat>, jet: &SectionJet<Rat>) -> Vec<MultilinearMap<Rat>> {
    vec![hexagonal_condition(split, jet), cyclic_symmetrization_first3(&closed_d(split, jet))]
}

/// Basis of the symmetric `R` satisfying `Π[R(ξ,η),ζ] + Π[R(η,ζ),ξ] + Π[R(ζ,ξ),η] = 0`.
pub fn hexagonal_r_basis(split: &Split<Rat>) -> Vec<MultilinearMap<Rat>> {
    r_solutions(split, |jet| vec![hexagonal_condition(split, jet)]).map(|(_, dirs)| dirs).unwrap_or_default()
}

/// Random nonzero `R` (with `S = 0`) of a hexagonal web, if the split admits one.
pub fn random_hexagonal_jet(rng: &mut impl Rng, split: &Split<Rat>) -> Option<SectionJet<Rat>> {
    let (base, dirs) = r_solutions(split, |jet| vec![hexagonal_condition(split, jet)])?;
    if dirs.is_empty() {
        return None;
    }
    let (base, dirs) = restricted_r_solutions(split, &base, &dirs, |jet| hexagonal_constraints(split, jet))?;
    if dirs.is_empty() && base.is_zero() {
        return None;
    }
    let (n, dim) = (split.v_dim(), split.dim());
    let mut r = base.clone();
    while r.is_zero() {
        for d in &dirs {
            r = r.combine(&Rat::int(1), d, &random_rat(rng));
        }
    }
    Some(SectionJet::new(split, r, MultilinearMap::uniform_zeros(3, n, dim)).expect("h-valued"))
}
