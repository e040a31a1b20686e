//! Newton polyhedra at infinity, Khovanskii non-degeneracy checks, the
//! monomial reduction of supports lying on a proper affine subspace, and
//! numerical estimation of global Lojasiewicz-type exponents
//! `|g|^alpha + |g|^beta >= c |h|`.
//!
//! Everything combinatorial (hulls, faces, covectors, lattice bases, face
//! polynomials) is exact: integer or arbitrary-precision rational
//! arithmetic. Floating point only enters in the numerical probes
//! (`lojasiewicz`, witness search) and is never stored in a [`Polynomial`].

pub mod error;
pub mod exec;
pub mod harness;
pub mod lattice;
pub mod linalg;
pub mod lojasiewicz;
pub mod nondegeneracy;
pub mod polyhedra;
pub mod polynomial;
pub mod solve;
pub mod univariate;

pub use error::{Error, Result};
pub use exec::Exec;
pub use polyhedra::{Face, FaceTuple, NewtonPolyhedron};
pub use polynomial::{ExponentVector, Polynomial, PolynomialMapping};

/// Arbitrary-precision rational used for every exact coefficient.
pub type Rational = num_rational::BigRational;
