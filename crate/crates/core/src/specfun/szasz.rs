//! `K_n(x) = Σ_k (e^{-nx} (nx)^k / k!)²`, the squared Szász–Mirakjan basis
//! sum, and its derivatives.
//!
//! `K_n` solves `x K'' + (4nx + 1) K' + 2n K = 0`; differentiating `j` times,
//!
//! ```text
//! x K^{(j+2)} + (4nx + 1 + j) K^{(j+1)} + 2n(2j+1) K^{(j)} = 0,
//! ```
//!
//! which yields every higher derivative from `K` and `K'` for `x > 0`.

use num_bigint::BigInt;

use super::SeriesSum;
use crate::error::{Error, Result};
use crate::exactalg::{binomial, int, to_f64, Rational};

/// Largest supported derivative order.
pub const MAX_DERIVATIVE: u32 = 16;

/// Largest `n x` before `e^{-nx}` underflows.
const MAX_NX: f64 = 700.0;

/// `K_n^{(j)}(x)` for `x >= 0`.
///
/// `K` and `K'` are summed directly (`K' = -n Σ (t_k - t_{k-1})²` has no
/// cancellation). Higher orders come from the recurrence above run
/// downwards from a large starting order and normalized by `K(x)`: the
/// derivatives of `K_n` are the minimal solution of the recurrence, so the
/// upward direction loses accuracy quickly for small `x`. At `x = 0` the
/// closed form [`kn_deriv_zero`] is used.
pub fn szasz_k(n: u32, j: u32, x: f64, tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParams("K_n needs n >= 1".into()));
    }
    if j > MAX_DERIVATIVE {
        return Err(Error::InvalidParams(format!(
            "derivative order {j} > {MAX_DERIVATIVE}"
        )));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::DomainError(x.to_string()));
    }
    let nf = n as f64;
    if nf * x > MAX_NX {
        return Err(Error::InvalidParams(format!("n x = {} too large", nf * x)));
    }
    if x == 0.0 {
        return Ok(to_f64(&kn_deriv_zero(n, j)));
    }
    let (k0, k1) = value_and_slope(nf, x, tol)?;
    match j {
        0 => Ok(k0),
        1 => Ok(k1),
        _ => {
            let mut start = j as usize + 40 + (12.0 * nf * x) as usize;
            let mut prev = downward_ratio(nf, x, j, start);
            loop {
                start *= 2;
                let next = downward_ratio(nf, x, j, start);
                if (next - prev).abs() <= 1e-14 * next.abs() || start > 1 << 16 {
                    return Ok(next * k0);
                }
                prev = next;
            }
        }
    }
}

/// `K^{(j)} / K` from the differentiated equation run downwards from order
/// `start` with arbitrary seeds.
fn downward_ratio(n: f64, x: f64, j: u32, start: usize) -> f64 {
    // y[i] ∝ K^{(i)}:  y_i = -(x y_{i+2} + (4nx + 1 + i) y_{i+1}) / (2n(2i+1))
    let (mut hi, mut mid) = (0.0f64, 1.0f64);
    let mut at_j = 0.0;
    for i in (0..start).rev() {
        let fi = i as f64;
        let lo = -(x * hi + (4.0 * n * x + 1.0 + fi) * mid) / (2.0 * n * (2.0 * fi + 1.0));
        hi = mid;
        mid = lo;
        if i == j as usize {
            at_j = mid;
        }
        // rescale to stay in range
        let m = mid.abs().max(hi.abs());
        if m > 1e250 || (m < 1e-250 && m > 0.0) {
            hi /= m;
            mid /= m;
            at_j /= m;
        }
    }
    at_j / mid
}

fn value_and_slope(n: f64, x: f64, tol: f64) -> Result<(f64, f64)> {
    let nx = n * x;
    let mut val = SeriesSum::new();
    let mut slope = SeriesSum::new();
    let mut t_prev = 0.0;
    let mut t = (-nx).exp();
    let mut k = 0.0;
    loop {
        let d = t - t_prev;
        if k > nx {
            let done_v = val.push(t * t, tol);
            let done_s = slope.push(d * d, tol);
            if done_v && done_s {
                break;
            }
        } else {
            val.push_unchecked(t * t);
            slope.push_unchecked(d * d);
        }
        val.check_cap("K_n")?;
        t_prev = t;
        t *= nx / (k + 1.0);
        k += 1.0;
    }
    Ok((val.sum, -n * slope.sum))
}

/// `K_n^{(j)}(0) = (-2n)^j Σ_{i=0}^{⌊j/2⌋} C(j, 2i) C(2i, i) 4^{-i}`, exactly.
pub fn kn_deriv_zero(n: u32, j: u32) -> Rational {
    let sum: Rational = (0..=j / 2)
        .map(|i| {
            Rational::new(
                binomial(j as u64, 2 * i as u64) * binomial(2 * i as u64, i as u64),
                num_traits::pow(BigInt::from(4), i as usize),
            )
        })
        .sum();
    num_traits::pow(int(-2 * n as i64), j as usize) * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// `K_n^{(j)}(x) = (1/π) ∫_0^π (-4n s)^j e^{-4nxs} dθ`, `s = sin²(θ/2)`,
    /// from `K_n(x) = e^{-2nx} I_0(2nx)`. All terms share one sign, and the
    /// trapezoid rule is spectrally accurate for this periodic integrand.
    fn integral_oracle(n: u32, j: u32, x: f64) -> f64 {
        let m = 2000;
        let h = PI / m as f64;
        let f = |th: f64| {
            let s = (th / 2.0).sin().powi(2);
            (-4.0 * n as f64 * s).powi(j as i32) * (-4.0 * n as f64 * x * s).exp()
        };
        let mut sum = 0.5 * (f(0.0) + f(PI));
        for i in 1..m {
            sum += f(h * i as f64);
        }
        sum * h / PI
    }

    #[test]
    fn value_at_zero_is_one() {
        for n in 1..=5 {
            assert_eq!(szasz_k(n, 0, 0.0, 1e-16).unwrap(), 1.0);
        }
    }

    #[test]
    fn bessel_product_value() {
        // e^{-2} I_0(2)
        let v = szasz_k(1, 0, 1.0, 1e-16).unwrap();
        assert!((v - 0.308508322553671).abs() < 1e-15);
    }

    #[test]
    fn first_derivative_at_zero() {
        assert_eq!(kn_deriv_zero(3, 1), int(-6));
        assert_eq!(szasz_k(3, 1, 0.0, 1e-16).unwrap(), -6.0);
    }

    #[test]
    fn closed_form_at_zero() {
        assert_eq!(kn_deriv_zero(5, 0), int(1));
        assert_eq!(kn_deriv_zero(2, 1), int(-4));
        assert_eq!(kn_deriv_zero(1, 2), int(6));
        // (-n)^j C(2j, j), from the integral representation
        for n in 1..=3u32 {
            for j in 0..=12u32 {
                let alt = num_traits::pow(int(-(n as i64)), j as usize)
                    * Rational::from_integer(binomial(2 * j as u64, j as u64));
                assert_eq!(kn_deriv_zero(n, j), alt);
            }
        }
    }

    #[test]
    fn derivatives_match_integral_oracle() {
        for n in 1..=3 {
            for j in 0..=16 {
                for &x in &[0.01, 0.1, 0.3, 0.5, 0.8, 2.0, 7.5] {
                    let v = szasz_k(n, j, x, 1e-16).unwrap();
                    let o = integral_oracle(n, j, x);
                    assert!(
                        (v - o).abs() <= 1e-12 * o.abs(),
                        "n={n} j={j} x={x}: {v} vs {o}"
                    );
                }
            }
        }
    }

    #[test]
    fn domain_checks() {
        assert!(szasz_k(1, 0, -0.1, 1e-16).is_err());
        assert!(szasz_k(0, 0, 0.1, 1e-16).is_err());
        assert!(szasz_k(1, 17, 0.1, 1e-16).is_err());
    }
}
