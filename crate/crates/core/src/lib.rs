//! Exact symbolic engine for a Block-type Lie conformal algebra.
//!
//! The crate verifies, at finite truncation windows and with exact rational
//! arithmetic, the structural identities of the Lie conformal algebra with
//! ℂ[∂]-basis `{J_i}` and bracket `[J_i λ J_j] = ((i+1)∂ + (i+j+2)λ) J_{i+j}`:
//! the λ-bracket axioms, innerness of conformal derivations, the rank-1
//! module constraints, low-degree cohomology, the central extension, and the
//! associated vertex Lie / vertex Poisson and Novikov structures.
//!
//! All core math is generic over an exact scalar field (see [`Scalar`]); the
//! aliases below pin the arbitrary-precision rational instantiation used by
//! the CLI and the test suites.

pub mod cohomology;
pub mod conformal;
pub mod derivations;
pub mod laurent;
pub mod linalg;
pub mod modules;
pub mod parse;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod vars;
pub mod vertex;

pub use crate::scalar::Scalar;
pub use crate::vars::Var;

/// Arbitrary-precision rational scalars: the canonical coefficient field.
pub type Rat = num_rational::BigRational;

/// Polynomials over the variable registry with rational coefficients.
pub type RatPoly = poly::Poly<Var, Rat>;

/// Conformal elements with rational coefficients.
pub type Elem = conformal::ConformalElement<Rat>;

/// λ-bracket values with rational coefficients.
pub type LambdaElem = conformal::LambdaElement<Rat>;

/// The rational instantiation of an algebra presentation.
pub type Algebra = conformal::AlgebraSpec<Rat>;

/// The rational instantiation of a coefficient module.
pub type Module = modules::ModuleSpec<Rat>;
