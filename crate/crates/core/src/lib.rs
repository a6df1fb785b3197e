//! Exact computation of invariant geometry on homogeneous pseudo-Riemannian
//! four-spaces, and decision procedures for the existence of invariant
//! parallel null line fields and parallel totally null plane fields.
//!
//! A space is presented by Lie-algebra structure constants for a reductive
//! split `g = h + m` together with an invariant metric on `m`.  All
//! computations are carried out over the rationals, extended where necessary
//! by a single square root, so every printed value is exact.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`], [`poly`], [`linalg`]: exact arithmetic in `Q` and `Q(sqrt d)`,
//!   polynomial factorisation up to degree six over that tower, and exact
//!   linear algebra (kernels, characteristic polynomials, Jordan data,
//!   induced operators on bivectors).
//! * [`expr`], [`model`]: a small expression language for structure constants
//!   with named parameters, the catalog file format, and validation of
//!   instantiated models (Jacobi identity, nondegeneracy, reductivity,
//!   isotropy invariance).
//! * [`geometry`]: the invariant connection, curvature, Ricci data, Weyl
//!   tensor, and the parallelism flags derived from them.
//! * [`segre`]: Segre classification of the Ricci operator, including sign
//!   characteristics, with a canonical rendering.
//! * [`walker`]: existence decisions for invariant parallel null line and
//!   plane fields, with witnesses, completeness certificates, and a floating
//!   point cross-check.
//! * [`oracle`]: the floating point counterpart used for cross-checking.
//! * [`verify`]: batch verification of the built-in catalog's expected
//!   results under randomly sampled parameters.

pub mod expr;
pub mod geometry;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod segre;
pub mod verify;
pub mod walker;
