//! Numerics for the Riemann zeta function, generalized fractal strings and
//! their complex dimensions, the spectral operator `ζ(∂_c)` with its
//! truncations, and shift-search harnesses for (quantized) universality.

pub mod cli;
pub mod contour;
pub mod error;
pub mod explicit_formulas;
pub mod fractal_strings;
pub mod operator_model;
pub mod universality;
pub mod zeta_core;

pub use error::{Error, Result};
pub use num_complex::Complex64;
