//! Norm-controlled power-series functors on finite-dimensional complex spaces.
//!
//! The crate models a functor as a truncated coefficient series
//! `F(A) = ⊕ₙ cₙ·A^{⊗n}` and provides:
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, direct sums,
//!   operator norms, Gelfand spectral radii and tensor-factor symmetrizers.
//! * [`symseq`]: symmetric sequences reduced to per-degree dimension and weight
//!   data, set-partition enumeration and partition-sum plethysm, with an
//!   exponential-generating-function composition oracle.
//! * [`functor`]: canonical power-series functors, block evaluation and
//!   Faà di Bruno coefficient composition.
//! * [`crosseff`]: cross-effects by inclusion-exclusion and by explicit
//!   surjection blocks, negligibility and excision checks.
//! * [`taylor`]: Taylor truncations, remainder norms, Cauchy–Hadamard radius
//!   estimates, remainder-vs-bound tables and Vandermonde reconstruction.
//! * [`analysis`]: growth profiles, the composition growth constant, the
//!   binomial collapse identity and admissibility checks.

pub mod analysis;
pub mod crosseff;
pub mod error;
pub mod functor;
pub mod limits;
pub mod linalg;
pub mod scalar;
pub mod symseq;
pub mod taylor;

pub use error::{Result, SocError};
pub use functor::{CanonicalKind, PowerSeriesFunctor};
pub use limits::Limits;
pub use linalg::DenseMatrix;
