//! Special functions: Gauss hypergeometric series, Legendre polynomials,
//! local and confluent Heun functions, the squared-basis sums `F_n`, `G_n`,
//! `U_n`, `J_n`, `K_n`, and the quadrature rules used for their integral
//! representations.
//!
//! Floating-point series share one truncation rule: summation stops once
//! `|term| <= tol * |partial sum|` for three consecutive terms, with a hard
//! cap of [`MAX_TERMS`] terms. Series whose coefficients vanish identically
//! from some index on are detected exactly (rational recurrence) and flagged
//! as terminated.

pub mod confluent;
pub mod heun;
pub mod hypergeometric;
pub mod kernel_sums;
pub mod legendre;
pub mod quadrature;
pub mod szasz;

pub use confluent::{
    confluent_heun, confluent_heun_derivative, confluent_heun_ode_residual, confluent_polynomial,
    confluent_series_exact, ConfluentHeunParams,
};
pub use heun::{
    heun_local, heun_local_derivative, heun_ode_residual, heun_ode_residual_rational,
    heun_polynomial, heun_series_exact, HeunParams,
};
pub use hypergeometric::{hyp2f1, hyp2f1_poly, hyp2f1_real};
pub use kernel_sums::{f_poly, kernel_sum, u_exact, KernelSumKind};
pub use legendre::{legendre_p, legendre_poly};
pub use quadrature::{quadrature, QuadratureKind, QuadratureResult, QuadratureRule};
pub use szasz::{kn_deriv_zero, szasz_k};

use crate::error::{Error, Result};

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 100_000;

/// Default relative truncation tolerance.
pub const DEFAULT_TOL: f64 = 1e-16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    /// The series is a finite sum (polynomial case).
    pub terminated: bool,
    /// Rough size of the neglected tail; zero when `terminated`.
    pub tail_estimate: f64,
}

impl SeriesResult {
    pub(crate) fn exact(value: f64, terms_used: usize) -> Self {
        SeriesResult {
            value,
            terms_used,
            terminated: true,
            tail_estimate: 0.0,
        }
    }
}

/// Running sum implementing the three-consecutive-small-terms rule.
#[derive(Debug, Default)]
pub(crate) struct SeriesSum {
    pub sum: f64,
    pub terms: usize,
    small_run: usize,
    last_term: f64,
}

impl SeriesSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a term; returns `true` once the series may stop.
    pub fn push(&mut self, term: f64, tol: f64) -> bool {
        self.sum += term;
        self.terms += 1;
        self.last_term = term;
        if term.abs() <= tol * self.sum.abs() {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= 3
    }

    /// Adds a term that may not end the series (e.g. before a peak).
    pub fn push_unchecked(&mut self, term: f64) {
        self.sum += term;
        self.terms += 1;
        self.last_term = term;
        self.small_run = 0;
    }

    pub fn check_cap(&self, what: &str) -> Result<()> {
        if self.terms >= MAX_TERMS {
            Err(Error::DivergentSeries(format!(
                "{what}: no convergence within {MAX_TERMS} terms"
            )))
        } else if !self.sum.is_finite() {
            Err(Error::DivergentSeries(format!(
                "{what}: partial sum overflowed"
            )))
        } else {
            Ok(())
        }
    }

    /// Geometric tail estimate for a term ratio `ratio`.
    pub fn finish(&self, ratio: f64) -> SeriesResult {
        let r = ratio.abs();
        let tail = if r < 1.0 {
            self.last_term.abs() * r / (1.0 - r)
        } else {
            self.last_term.abs()
        };
        SeriesResult {
            value: self.sum,
            terms_used: self.terms,
            terminated: false,
            tail_estimate: tail,
        }
    }
}

/// `|computed - reference| / |reference|`, falling back to the absolute error
/// when the reference is zero.
pub fn rel_err(computed: f64, reference: f64) -> f64 {
    let d = (computed - reference).abs();
    if reference == 0.0 {
        d
    } else {
        d / reference.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_small_terms_stop_the_sum() {
        let mut s = SeriesSum::new();
        assert!(!s.push(1.0, 1e-3));
        assert!(!s.push(0.0, 1e-3));
        assert!(!s.push(0.5, 1e-3));
        assert!(!s.push(1e-6, 1e-3));
        assert!(!s.push(1e-6, 1e-3));
        assert!(s.push(1e-6, 1e-3));
        assert_eq!(s.terms, 6);
    }

    #[test]
    fn relative_error_handles_zero_reference() {
        assert_eq!(rel_err(1e-20, 0.0), 1e-20);
        assert!((rel_err(1.1, 1.0) - 0.1).abs() < 1e-15);
    }
}
