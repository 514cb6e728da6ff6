//! Intersection numbers of closed geodesics on the modular surface, computed
//! from the river sequences of Conway topographs and checked against an exact
//! divisor-sum counting formula.

pub mod arith;
pub mod error;
pub mod experiments;
pub mod forms;
pub mod geometry;
pub mod grosszagier;
pub mod intersect;
pub mod river;

pub use error::{Error, Result};
