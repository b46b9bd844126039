//! Gauss–Legendre and trapezoidal quadrature on a finite interval.
//!
//! The trapezoidal rule is meant for integrands that extend to smooth
//! periodic functions (full period, or a half period of an even function),
//! where it converges geometrically.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureKind {
    /// Gauss–Legendre with the given number of nodes.
    GaussLegendre(usize),
    /// Composite trapezoid with the given number of subintervals.
    PeriodicTrapezoid(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// `|I(npoints) - I(2 npoints)|`.
    pub error_estimate: f64,
}

impl QuadratureRule {
    pub fn new(kind: QuadratureKind, a: f64, b: f64) -> Result<Self> {
        let n = match kind {
            QuadratureKind::GaussLegendre(n) | QuadratureKind::PeriodicTrapezoid(n) => n,
        };
        if n < 2 {
            return Err(Error::InvalidParams(format!(
                "quadrature needs npoints >= 2, got {n}"
            )));
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParams(
                "quadrature interval must be finite".into(),
            ));
        }
        Ok(QuadratureRule { kind, a, b })
    }

    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(QuadratureKind::GaussLegendre(n), a, b)
    }

    pub fn periodic_trapezoid(n: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(QuadratureKind::PeriodicTrapezoid(n), a, b)
    }

    pub(crate) fn midpoint_halfwidth(&self) -> (f64, f64) {
        (0.5 * (self.a + self.b), 0.5 * (self.b - self.a))
    }

    fn doubled(&self) -> Self {
        let kind = match self.kind {
            QuadratureKind::GaussLegendre(n) => QuadratureKind::GaussLegendre(2 * n),
            QuadratureKind::PeriodicTrapezoid(n) => QuadratureKind::PeriodicTrapezoid(2 * n),
        };
        QuadratureRule { kind, ..*self }
    }

    /// Applies the rule once, without an error estimate.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let checked = |t: f64| {
            let v = f(t);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinite(t))
            }
        };
        match self.kind {
            QuadratureKind::GaussLegendre(n) => {
                let (nodes, weights) = gauss_legendre_nodes(n);
                let (mid, half) = self.midpoint_halfwidth();
                let mut sum = 0.0;
                for (x, w) in nodes.iter().zip(&weights) {
                    sum += w * checked(mid + half * x)?;
                }
                Ok(half * sum)
            }
            QuadratureKind::PeriodicTrapezoid(n) => {
                let h = (self.b - self.a) / n as f64;
                let mut sum = 0.5 * (checked(self.a)? + checked(self.b)?);
                for k in 1..n {
                    sum += checked(self.a + h * k as f64)?;
                }
                Ok(h * sum)
            }
        }
    }
}

/// Evaluates `∫_a^b f` with the rule, estimating the error by rerunning with
/// twice the points.
pub fn quadrature<F: Fn(f64) -> f64>(rule: &QuadratureRule, f: F) -> Result<QuadratureResult> {
    let coarse = rule.apply(&f)?;
    let fine = rule.doubled().apply(&f)?;
    Ok(QuadratureResult {
        value: coarse,
        error_estimate: (coarse - fine).abs(),
    })
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes in increasing order.
pub fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
