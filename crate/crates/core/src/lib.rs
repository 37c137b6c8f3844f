//! Numerical evaluation of elliptic Poincaré series and polar harmonic Maass
//! Poincaré series on the upper half-plane, their elliptic expansions, the
//! differential operators linking them, and machine checks of the identities
//! they satisfy.

pub mod error;
pub mod expansions;
pub mod geometry;
pub mod num;
pub mod operators;
pub mod quadrature;
pub mod series;
pub mod special_functions;
pub mod verify;

pub use error::{Error, Result};
pub use num::{BigFloat, Cx, PrecisionGuard, Real};
