//! Numerical computation of real points on every connected component of a
//! real algebraic set.
//!
//! Given a polynomial system `f` and a pure-dimensional component `V` of its
//! complex zero set, the pipeline tracks the critical points of the squared
//! distance to a generic point `y` along the deformation `f = t*gamma*z` and
//! collects the real limits as `t -> 0`. The result contains at least one
//! point on each connected component of `V` intersected with real space.
//!
//! Modules, bottom up:
//!
//! - [`poly`]: sparse polynomials, the text format and evaluation.
//! - [`start`]: multihomogeneous Bezout counts and linear-product start systems.
//! - [`tracker`]: predictor-corrector continuation with a Cauchy endgame.
//! - [`witness`]: witness sets and the homotopy membership test.
//! - [`critical`]: the critical-point homotopy and the end-to-end driver.

pub mod critical;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod poly;
pub mod rng;
pub mod start;
pub mod tracker;
pub mod witness;

pub use error::{Error, Result};
pub use poly::{parse_system, Polynomial, PolynomialSystem, C64};
