//! Exact-arithmetic realization of the spherical rational Cherednik algebra action
//! on the `C^×`-equivariant homology of Hilbert schemes of points on the plane
//! curve singularity `x^n = t^k`, written in the basis of torus fixed points.
//!
//! The crate is organized bottom-up:
//!
//! - [`model`]: parameters `(n, k)`, admissible cocharacters (fixed points),
//!   graded bases and equivariant weights.
//! - [`operators`]: abelianized and minuscule monopole operators as exact sparse
//!   graded matrices, plus operator arithmetic on truncations.
//! - [`combinatorics`]: q-series, Gaussian binomials and Betti polynomials.
//! - [`oracle`]: an independent count of monomial ideals of `C[[t^n, t^k]]`.
//! - [`verify`]: machine checks of the algebra relations and module structure.

pub mod combinatorics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod operators;
pub mod oracle;
pub mod rational;
pub mod verify;

pub use error::{Error, Result};
pub use model::{Cocharacter, GradedBasis, Params};
pub use rational::Q;
