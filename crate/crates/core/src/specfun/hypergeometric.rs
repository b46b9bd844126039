//! Gauss hypergeometric function `₂F₁(a, b; c; x) = Σ (a)_k (b)_k / ((c)_k k!) x^k`.

use num_traits::{One, Zero};

use super::{SeriesResult, SeriesSum};
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, int, nonpositive_integer, Poly, Rational};

fn as_nonpositive_int(v: f64) -> Option<u64> {
    (v <= 0.0 && v.fract() == 0.0 && v > -1e15).then_some((-v) as u64)
}

/// Power series of `₂F₁` at a real argument.
///
/// Terminates exactly when `a` or `b` is a non-positive integer, in which
/// case any `x` is accepted. Otherwise `|x| < 1` is required.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64, tol: f64) -> Result<SeriesResult> {
    let stop = match (as_nonpositive_int(a), as_nonpositive_int(b)) {
        (Some(m), Some(n)) => Some(m.min(n)),
        (m, n) => m.or(n),
    };
    if let Some(cm) = as_nonpositive_int(c) {
        // (c)_k vanishes from k = cm + 1 on
        if stop.is_none_or(|n| n > cm) {
            return Err(Error::InvalidC(c.to_string()));
        }
    }
    if let Some(n) = stop {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..n {
            let k = k as f64;
            term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
            sum += term;
        }
        return Ok(SeriesResult::exact(sum, n as usize + 1));
    }
    if x.is_nan() || x.abs() >= 1.0 {
        return Err(Error::DivergentSeries(format!(
            "2F1 series at |x| = {} >= 1",
            x.abs()
        )));
    }
    let mut acc = SeriesSum::new();
    let mut term = 1.0;
    let mut k = 0.0;
    loop {
        if acc.push(term, tol) {
            break;
        }
        acc.check_cap("2F1")?;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        k += 1.0;
    }
    Ok(acc.finish(x))
}

/// `₂F₁` on the real line, continued analytically to `x <= -1` by integrating
/// the hypergeometric equation
/// `x(1-x) w'' + [c - (a+b+1)x] w' - ab w = 0` from `x = -1/2`.
///
/// Inside `|x| < 0.9`, or for terminating parameters, this is [`hyp2f1`].
pub fn hyp2f1_real(a: f64, b: f64, c: f64, x: f64, tol: f64) -> Result<SeriesResult> {
    let terminating = as_nonpositive_int(a).is_some() || as_nonpositive_int(b).is_some();
    if terminating || x.abs() < 0.9 || (0.0..1.0).contains(&x) {
        return hyp2f1(a, b, c, x, tol);
    }
    if x >= 1.0 {
        return Err(Error::DivergentSeries(format!(
            "2F1 at x = {x} >= 1 (branch cut)"
        )));
    }
    let x0 = -0.5;
    let w0 = hyp2f1(a, b, c, x0, tol)?.value;
    let dw0 = a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, x0, tol)?.value;
    let rhs =
        |z: f64, w: f64, dw: f64| (a * b * w - (c - (a + b + 1.0) * z) * dw) / (z * (1.0 - z));
    let integrate = |steps: usize| {
        let h = (x - x0) / steps as f64;
        let (mut w, mut dw) = (w0, dw0);
        for s in 0..steps {
            let z = x0 + h * s as f64;
            let k1 = (dw, rhs(z, w, dw));
            let k2 = (
                dw + 0.5 * h * k1.1,
                rhs(z + 0.5 * h, w + 0.5 * h * k1.0, dw + 0.5 * h * k1.1),
            );
            let k3 = (
                dw + 0.5 * h * k2.1,
                rhs(z + 0.5 * h, w + 0.5 * h * k2.0, dw + 0.5 * h * k2.1),
            );
            let k4 = (dw + h * k3.1, rhs(z + h, w + h * k3.0, dw + h * k3.1));
            w += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            dw += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        w
    };
    let target = tol.max(1e-15);
    let mut steps = 256;
    let mut coarse = integrate(steps);
    loop {
        let fine = integrate(2 * steps);
        // fourth-order Richardson step
        let value = fine + (fine - coarse) / 15.0;
        let err = (fine - coarse).abs() / 15.0;
        if err <= target * value.abs() || steps >= 1 << 16 {
            return Ok(SeriesResult {
                value,
                terms_used: 2 * steps,
                terminated: false,
                tail_estimate: err,
            });
        }
        coarse = fine;
        steps *= 2;
    }
}

/// Exact polynomial `₂F₁(a, b; c; x)` when `a` or `b` is a non-positive integer.
pub fn hyp2f1_poly(a: &Rational, b: &Rational, c: &Rational) -> Result<Poly> {
    let n = match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(m), Some(n)) => m.min(n),
        (Some(m), None) => m,
        (None, Some(n)) => n,
        (None, None) => {
            return Err(Error::DivergentSeries(format!(
                "2F1({}, {}; …) does not terminate",
                format_rational(a),
                format_rational(b)
            )))
        }
    };
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut term = Rational::one();
    coeffs.push(term.clone());
    for k in 0..n as i64 {
        let k = int(k);
        let den = (c + &k) * (&k + int(1));
        if den.is_zero() {
            return Err(Error::InvalidC(format_rational(c)));
        }
        term = term * (a + &k) * (b + &k) / den;
        coeffs.push(term.clone());
    }
    Ok(Poly::new(coeffs))
}
