//! Generic Newton polygons and Hasse polynomials for L-functions of exponential
//! sums `sum_x psi(f(x))` attached to one-variable polynomials over finite fields.
//!
//! The [`strata`], [`multipoly`], [`hasse`] and [`polygon`] modules compute the
//! predicted generic polygon and the Hasse polynomial from `(d, p)` alone. The
//! [`field`] and [`cyclotomic`] modules compute actual L-functions exactly, and
//! [`census`] compares the two sides polynomial by polynomial.

pub mod arith;
pub mod census;
pub mod cyclotomic;
pub mod dwork;
pub mod error;
pub mod field;
pub mod fqpoly;
pub mod hasse;
pub mod multipoly;
pub mod polygon;
pub mod strata;

pub use error::{Error, Result};
