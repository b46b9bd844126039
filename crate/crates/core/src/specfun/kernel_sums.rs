//! Sums of squared basis functions of classical positive linear operators:
//!
//! ```text
//! F_n(x) = Σ_{k=0}^{n} (C(n,k) x^k (1-x)^{n-k})²
//! G_n(x) = Σ_{k>=0}   (C(n+k-1,k) x^k (1+x)^{-n-k})²
//! U_n(x) = Σ_{k=0}^{n} (C(n,k) x^k (1+x)^{-n})²
//! J_n(x) = Σ_{k>=0}   (C(n+k,k) x^k (1-x)^{n+1})²
//! ```

use super::{SeriesResult, SeriesSum};
use crate::error::{Error, Result};
use crate::exactalg::{binomial, int, Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelSumKind {
    F,
    G,
    U,
    J,
}

/// `F_n` as an exact polynomial of degree `2n`.
pub fn f_poly(n: u32) -> Poly {
    let one_minus_x = Poly::from_ints(&[1, -1]);
    (0..=n)
        .map(|k| {
            let b = Rational::from_integer(binomial(n as u64, k as u64));
            let basis = &Poly::monomial(b, k as usize) * &one_minus_x.pow(n - k);
            &basis * &basis
        })
        .fold(Poly::zero(), |acc, t| &acc + &t)
}

/// Exact `U_n(x)` at a rational point (`x != -1`).
pub fn u_exact(n: u32, x: &Rational) -> Result<Rational> {
    let onep = x + int(1);
    if onep == int(0) {
        return Err(Error::DomainError("-1".into()));
    }
    let w0 = crate::exactalg::powi(&onep, -(n as i64));
    Ok((0..=n)
        .map(|k| {
            let w = Rational::from_integer(binomial(n as u64, k as u64))
                * crate::exactalg::powi(x, k as i64)
                * &w0;
            &w * &w
        })
        .sum())
}

/// Evaluates one of the sums by direct summation of its definition.
///
/// Domains: `F`, `U` any real `x` (`U` needs `x != -1`); `G` needs `x >= 0`;
/// `J` needs `|x| < 1`.
pub fn kernel_sum(kind: KernelSumKind, n: u32, x: f64, tol: f64) -> Result<SeriesResult> {
    match kind {
        KernelSumKind::F => {
            let mut w = (1.0 - x).powi(n as i32);
            let ratio = x / (1.0 - x);
            let mut sum = 0.0;
            if x == 1.0 {
                return Ok(SeriesResult::exact(1.0, n as usize + 1));
            }
            for k in 0..=n {
                sum += w * w;
                w *= (n - k) as f64 / (k + 1) as f64 * ratio;
            }
            Ok(SeriesResult::exact(sum, n as usize + 1))
        }
        KernelSumKind::U => {
            if x == -1.0 {
                return Err(Error::DomainError("-1".into()));
            }
            let mut w = (1.0 + x).powi(-(n as i32));
            let mut sum = 0.0;
            for k in 0..=n {
                sum += w * w;
                w *= (n - k) as f64 / (k + 1) as f64 * x;
            }
            Ok(SeriesResult::exact(sum, n as usize + 1))
        }
        KernelSumKind::G => {
            if x.is_nan() || x < 0.0 {
                return Err(Error::DomainError(x.to_string()));
            }
            let r = x / (1.0 + x);
            let w0 = (1.0 + x).powi(-(n as i32));
            Ok(squared_series(
                w0,
                r,
                |k| (n as f64 + k) / (k + 1.0),
                tol,
                "G_n",
            )?)
        }
        KernelSumKind::J => {
            if x.is_nan() || x.abs() >= 1.0 {
                return Err(Error::DivergentSeries(format!(
                    "J_n series at |x| = {}",
                    x.abs()
                )));
            }
            let w0 = (1.0 - x).powi(n as i32 + 1);
            Ok(squared_series(
                w0,
                x,
                |k| (n as f64 + k + 1.0) / (k + 1.0),
                tol,
                "J_n",
            )?)
        }
    }
}

/// `Σ w_k²` with `w_{k+1} = w_k · growth(k) · r`; the stopping rule only
/// applies once the terms are decreasing.
fn squared_series<G: Fn(f64) -> f64>(
    w0: f64,
    r: f64,
    growth: G,
    tol: f64,
    what: &str,
) -> Result<SeriesResult> {
    let mut acc = SeriesSum::new();
    let mut w = w0;
    let mut k = 0.0;
    loop {
        let step = growth(k) * r;
        if step.abs() < 1.0 {
            if acc.push(w * w, tol) {
                break;
            }
        } else {
            acc.push_unchecked(w * w);
        }
        acc.check_cap(what)?;
        w *= step;
        k += 1.0;
        if w == 0.0 && step == 0.0 {
            return Ok(SeriesResult::exact(acc.sum, acc.terms));
        }
    }
    Ok(acc.finish(r * r))
}

impl KernelSumKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "F" => Some(Self::F),
            "G" => Some(Self::G),
            "U" => Some(Self::U),
            "J" => Some(Self::J),
            _ => None,
        }
    }
}
