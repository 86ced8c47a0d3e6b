//! Exact computation of the structure tensors of loops defined by a section
//! of a Lie group through a subgroup.
//!
//! A model is a Lie algebra `𝔊 = V ⊕ 𝔥` in an adapted basis (the first `n`
//! vectors span `V`) together with the jet `φ(ξ) = R(ξ,ξ) + S(ξ,ξ,ξ)` of the
//! section. The loop product is solved to order four from the truncated group
//! law, and the torsion `a`, curvature `b` and their covariant derivatives are
//! read off the expansion.
//!
//! Everything is generic over [`Scalar`]; [`Rat`] gives exact results and the
//! `Rat*` aliases below fix it.

pub mod algebra;
pub mod closed;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod loops;
pub mod multilinear;
pub mod report;
pub mod scalar;
pub mod series;
pub mod suites;
pub mod tensors;

pub use algebra::{AlgVec, LieAlgebra, Split};
pub use error::{Error, Result};
pub use loops::{Coefficient, LoopExpansion, Model, SectionJet};
pub use multilinear::MultilinearMap;
pub use report::{CheckRecord, Report, Status};
pub use scalar::{Dual, Rat, Scalar};
pub use series::{Monomial, Series, VarSpace};
pub use tensors::WebTensorSet;

pub type RatAlgebra = LieAlgebra<Rat>;
pub type RatSplit = Split<Rat>;
pub type RatJet = SectionJet<Rat>;
pub type RatModel = Model<Rat>;
pub type RatSeries = Series<Rat>;
pub type RatExpansion = LoopExpansion<Rat>;
pub type RatMap = MultilinearMap<Rat>;
pub type RatTensors = WebTensorSet<Rat>;
