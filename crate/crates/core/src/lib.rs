//! Exact computations around extending operators on finite-dimensional
//! polyhedral normed spaces: rational linear algebra, an exact simplex solver,
//! unit-ball vertex enumeration, minimal-norm extensions with verifiable
//! lower-bound certificates, an explicit construction for three-dimensional
//! ℓ₁, and search tools for extension constants.

pub mod error;
pub mod extend;
pub mod instances;
pub mod json;
pub mod lp;
pub mod matrix;
pub mod r3;
pub mod rational;
pub mod se;
pub mod spaces;

pub use error::{Error, Result};
pub use extend::{
    min_norm_extension, verify_certificate, CertificateItem, ExtensionProblem, ExtensionResult,
    LowerBoundCertificate,
};
pub use matrix::{Mat, QVec};
pub use rational::Rational;
pub use spaces::{Caps, NormRep, PolyhedralSpace, Subspace, VertexSet};
