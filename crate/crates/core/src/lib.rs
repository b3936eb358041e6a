//! Dirac fields on Kerr-Newman-de Sitter black holes.
//!
//! Builds backgrounds from physical data or horizon radii, computes the
//! separated angular spectrum, integrates the radial system in the tortoise
//! coordinate, and issues per-mode certificates that no square-integrable
//! time-periodic solution exists.

pub mod angular;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod ode;
pub mod positivity;
pub mod quadrature;
pub mod radial;
pub mod separation;

pub use error::{Error, Result};
