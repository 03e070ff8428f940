//! Pseudo-differential calculus on finite groups and, numerically, on
//! simply connected nilpotent Lie groups.
//!
//! The library is organised around a chain of unitary identifications.
//! On a finite group every ingredient of noncommutative harmonic
//! analysis is an exact finite-dimensional object: the unitary dual is
//! a list of irreducible matrix representations, the Plancherel measure
//! is a weight per irrep, and the Fourier transform is a change of
//! orthonormal basis. Quantization maps operator-valued symbols
//! `a(x, xi)` to integral operators on `l2(G)`; every theorem about
//! these maps (unitarity, composition laws, adjoints, crossed-product
//! factorizations, covariance of operator families) becomes a matrix
//! identity that can be checked to near machine precision.
//!
//! Module layout:
//! - [`groups`]: group tables, catalog constructors, irreps, Plancherel
//!   weights, tau-maps, validation.
//! - [`harmonic`]: Fourier transform, partial transforms on two-variable
//!   functions, the L2/B2/Schatten norm family.
//! - [`quantize`]: Weyl systems, Fourier-Wigner and Wigner transforms,
//!   the right and left quantizations and their kernel factorizations.
//! - [`symbolalg`]: the symbol star-algebra (composition, involution,
//!   parameter conversion), adjoint law, symmetry functions.
//! - [`crossed`]: twisted convolution, Schroedinger representations,
//!   multiplication/convolution factorizations, covariant families over
//!   finite dynamical systems.
//! - [`nilpotent`]: graded nilpotent Lie algebras, the BCH group law in
//!   exponential coordinates, grid Fourier analysis and the scalar
//!   quantization with its Weyl phase cocycle.

pub mod crossed;
pub mod error;
pub mod groups;
pub mod harmonic;
pub mod la;
pub mod nilpotent;
pub mod quantize;
pub mod symbolalg;

pub use error::CoreError;
