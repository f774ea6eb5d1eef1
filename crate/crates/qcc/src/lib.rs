//! Exact arithmetic for quantum cluster variables attached to valued quivers.
//!
//! The library provides two independent engines that compute the same
//! quantum cluster variables and are designed to be cross-checked:
//!
//! * **Seed mutation** in a based quantum torus ([`torus`], [`seed`]):
//!   iterated exchange of quantum cluster variables, each step producing a
//!   new variable expressed over the initial torus by exact division.
//! * **Subrepresentation counting** ([`rep`], [`count`], [`cc`]): quantum
//!   cluster variables expanded as weighted generating functions of
//!   Grassmannian-of-subrepresentations point counts over finite fields.
//!
//! A third, geometric engine ([`tpath`]) expands cluster variables of a
//! triangulated polygon as sums over admissible edge paths and is compared
//! against seed mutation for linear (type A) quivers.
//!
//! All computation is exact: coefficients are Laurent polynomials in a
//! fractional power of q with arbitrary-precision integer coefficients
//! ([`scalar::QScalar`]); nothing is floating point.

pub mod catalog;
pub mod goldens;
pub mod cc;
pub mod count;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod qbinom;
pub mod quiver;
pub mod rep;
pub mod scalar;
pub mod seed;
pub mod torus;
pub mod tpath;

pub use error::{Error, Result};
