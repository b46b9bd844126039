//! Exact Taylor coefficients of `K_n` at 0 from the Cauchy product
//!
//! ```text
//! K_n(x) = e^{-2nx} · Σ_k (nx)^{2k} / (k!)².
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactalg::{factorial, Poly, Rational};

/// Largest derivative order used by the `K_n^{(j)}` checks.
pub(crate) const MAX_J: u32 = crate::specfun::szasz::MAX_DERIVATIVE;

/// `Σ_{m < order} c_m x^m`, the Taylor polynomial of `K_n` at 0.
pub fn kn_taylor(n: u32, order: usize) -> Poly {
    let n = BigInt::from(n);
    let coeffs = (0..order)
        .map(|m| {
            (0..=m / 2).fold(Rational::zero(), |acc, k| {
                let e = m - 2 * k;
                // (-2n)^e / e! · n^{2k} / (k!)²
                let minus_two_n: BigInt = -(&n * 2u32);
                let num = num_traits::pow(minus_two_n, e) * num_traits::pow(n.clone(), 2 * k);
                let kf = factorial(k as u64);
                acc + Rational::new(num, factorial(e as u64) * &kf * &kf)
            })
        })
        .collect();
    Poly::new(coeffs)
}

/// Taylor polynomial of `K_n^{(j)}` through order `order - 1`.
pub(crate) fn kn_derivative_taylor(n: u32, j: u32, order: usize) -> Poly {
    let mut p = kn_taylor(n, order + j as usize);
    for _ in 0..j {
        p = p.derivative();
    }
    p.truncate(order)
}
