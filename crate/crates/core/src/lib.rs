//! Exact and numerical machinery for Heun-type special functions and the
//! Rényi/Tsallis entropies of positive linear operators.
//!
//! - [`exactalg`]: rationals, polynomials, piecewise polynomials.
//! - [`bspline`]: B-spline densities and the kernel operator `L_n`.
//! - [`specfun`]: `₂F₁`, Legendre, Heun and confluent Heun series, squared
//!   basis sums, quadrature.
//! - [`entropy`]: Bernstein/Kantorovich operators, `S_n^[k]`, entropy profiles.
//! - [`identities`]: registry and verification of the identities connecting
//!   all of the above.

pub mod bspline;
pub mod entropy;
pub mod error;
pub mod exactalg;
pub mod identities;
pub mod specfun;

pub use error::{Error, Result};
pub use exactalg::{PiecewisePoly, Poly, Rational};
