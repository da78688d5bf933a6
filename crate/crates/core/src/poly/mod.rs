//! Polynomial arithmetic over the rationals.

pub mod bipoly;
pub mod hompoly;
pub mod roots;
pub mod upoly;

pub use bipoly::BiPoly;
pub use hompoly::{HomPoly, Monomial};
pub use upoly::UPoly;
