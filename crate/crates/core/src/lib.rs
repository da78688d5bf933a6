//! Exact plane-curve toolkit: homogeneous polynomials, intersection multiplicities,
//! linear systems with base points, point-configuration invariants, and certificates
//! for plurisubharmonic potentials `u = (1/2r) log(|P|^2 + |Q|^2)` with prescribed poles.

pub mod config;
pub mod construct;
pub mod currents;
pub mod curves;
pub mod elim;
pub mod error;
pub mod linalg;
pub mod linsys;
pub mod par;
pub mod point;
pub mod poly;
pub mod rational;

pub use error::{Error, Result};
pub use point::ProjPoint;
pub use poly::{BiPoly, HomPoly, Monomial, UPoly};
pub use rational::Rational;
