//! Numerical laboratory for weighted Bergman spaces.
//!
//! The crate computes the classical objects of weighted Bergman-space theory
//! on the unit disc 𝔻, the upper half-plane ℋ, the polydisc 𝔻ⁿ and the tube
//! ℋⁿ over the first octant — reproducing kernels, Békollé–Bonami
//! characteristics, dyadic model operators, truncated Toeplitz products,
//! Berezin transforms — and verifies, at desk scale, the inequalities and
//! identities that connect them.
//!
//! Everything here is finite and explicit: suprema are maxima over explicit
//! sampling families (and therefore lower bounds of the true suprema),
//! integrals are graded tensor quadratures, operators are finite sections
//! over the orthonormal monomial basis. All randomness is seeded, all
//! reductions use a fixed summation order, so identical inputs reproduce
//! bit-identical outputs.

pub mod domains;
pub mod dyadic;
pub mod kernels;
pub mod linalg;
pub mod operators;
pub mod point;
pub mod quad;
pub mod sarason;
pub mod series;
pub mod symbols;
pub mod weights;

pub use num_complex::Complex64;

pub use domains::{DomainSpec, QuadratureRule, SampleGrid, SampleStrategy};
pub use point::{DomainKind, DomainPoint};
pub use symbols::Symbol;
