//! Spectral simulation of fractional wave and Klein-Gordon equations on
//! compact Lie groups.
//!
//! The solution is carried as Peter-Weyl coefficients. Linear flows are
//! applied exactly per mode; nonlinear and mass terms are evaluated on a
//! quadrature grid and projected back onto the band-limited space.

pub mod blowup;
pub mod calculus;
pub mod data;
pub mod duhamel;
pub mod error;
pub mod group;
pub mod io;
pub mod klein_gordon;
pub mod linear;

pub use error::{Error, Result};
