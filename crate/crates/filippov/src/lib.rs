//! Exact-arithmetic toolkit for metric Lie n-algebras.
//!
//! A Lie n-algebra is a vector space with an alternating n-ary bracket whose
//! left multiplications are derivations of the bracket (the n-Jacobi
//! identity); for n = 2 this is an ordinary Lie algebra. A *metric* Lie
//! n-algebra additionally carries a nondegenerate invariant symmetric
//! bilinear form. This crate builds, verifies and decomposes such algebras
//! over exact rationals, so every structural statement it reports is decided
//! exactly rather than numerically.
//!
//! What's here:
//!
//! - [`linalg`]: exact rational scalars, matrices, canonical subspaces and
//!   symmetric bilinear forms (signatures, orthogonal complements).
//! - [`algebra`]: structure-constant tables on strictly increasing basis
//!   tuples, brackets, the Jacobi and invariance checks with full violation
//!   witnesses, ideals, centralisers, quotients, arity reduction and
//!   transport along isomorphisms.
//! - [`construct`]: the simple n-algebras with signs, double extensions of
//!   euclidean algebras, the lorentzian families in arity 2 and arity >= 3,
//!   the dual pair on `s (+) s*`, and the twist isometry.
//! - [`analyze`]: subspace classification, commutants, indecomposability
//!   certificates and full orthogonal decomposition, summarized in a
//!   structure report.
//! - [`io`]: a stable JSON file format for algebras with exact rational
//!   entries.
//! - [`cli`]: the `filippov` command-line tool built from the pieces above.
//!
//! Start with the runnable examples in `examples/` for end-to-end usage of
//! each capability.

pub mod algebra;
pub mod analyze;
pub mod cli;
pub mod construct;
mod error;
pub mod io;
pub mod linalg;

pub use algebra::{
    check_isometry, check_morphism, IndexTuple, MetricNAlgebra, NAlgebra, Violation,
    ViolationKind, ViolationReport,
};
pub use error::{Error, Result};
pub use linalg::{BilinearForm, Matrix, Rational, Subspace};
