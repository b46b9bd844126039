//! Confluent Heun function `HC(p, γ, δ, α, σ; x)`: the solution of
//!
//! ```text
//! u'' + (4p + γ/x + δ/(x-1)) u' + (4pαx - σ) / (x(x-1)) u = 0,  u(0) = 1.
//! ```
//!
//! Clearing denominators and matching powers of `x`:
//!
//! ```text
//! (k+1)(k+γ) c_{k+1} = [k(k-1+γ+δ-4p) - σ] c_k + 4p(k-1+α) c_{k-1}.
//! ```

use num_traits::{One, Zero};

use super::{SeriesResult, SeriesSum};
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, int, nonpositive_integer, to_f64, Poly, Rational};

/// Terms scanned for termination when no degree candidate is known.
const TERMINATION_SCAN: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfluentHeunParams {
    pub p: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    pub alpha: Rational,
    pub sigma: Rational,
}

impl ConfluentHeunParams {
    pub fn new(
        p: Rational,
        gamma: Rational,
        delta: Rational,
        alpha: Rational,
        sigma: Rational,
    ) -> Result<Self> {
        if nonpositive_integer(&gamma).is_some() {
            return Err(Error::InvalidGamma(format_rational(&gamma)));
        }
        Ok(ConfluentHeunParams {
            p,
            gamma,
            delta,
            alpha,
            sigma,
        })
    }

    /// `δ = 0` and `σ = 4pα`: the point `x = 1` is removable and the
    /// solution is entire.
    pub fn regular_at_one(&self) -> bool {
        self.delta.is_zero() && self.sigma == int(4) * &self.p * &self.alpha
    }
}

fn exact_coefficients(cp: &ConfluentHeunParams, nterms: usize) -> Vec<Rational> {
    let one = int(1);
    let four_p = int(4) * &cp.p;
    let mut c: Vec<Rational> = Vec::with_capacity(nterms);
    if nterms == 0 {
        return c;
    }
    c.push(Rational::one());
    for k in 0..nterms - 1 {
        let kq = int(k as i64);
        let km1 = &kq - &one;
        let mut rhs = (&kq * (&km1 + &cp.gamma + &cp.delta - &four_p) - &cp.sigma) * &c[k];
        if k >= 1 {
            rhs += &four_p * (&km1 + &cp.alpha) * &c[k - 1];
        }
        c.push(rhs / ((&kq + &one) * (&kq + &cp.gamma)));
    }
    c
}

/// Exact truncated series `Σ_{k < nterms} c_k x^k`.
pub fn confluent_series_exact(cp: &ConfluentHeunParams, nterms: usize) -> Poly {
    Poly::new(exact_coefficients(cp, nterms))
}

/// The exact polynomial `HC`, if the series terminates (two consecutive zero
/// coefficients).
pub fn confluent_polynomial(cp: &ConfluentHeunParams) -> Option<Poly> {
    // for p != 0, c_{N+2} = 0 = c_{N+1} forces (N + α) c_N = 0
    let scan = match nonpositive_integer(&cp.alpha) {
        _ if cp.p.is_zero() => TERMINATION_SCAN,
        Some(n) if n <= 4096 => n as usize + 3,
        _ => return None,
    };
    let c = exact_coefficients(cp, scan);
    (0..scan - 2)
        .find(|&n| c[n + 1].is_zero() && c[n + 2].is_zero())
        .map(|n| Poly::new(c[..=n].to_vec()))
}

/// `HC(x)` by its power series at 0.
///
/// Requires `|x| < 1` unless the series terminates or `x = 1` is removable
/// (see [`ConfluentHeunParams::regular_at_one`]).
pub fn confluent_heun(cp: &ConfluentHeunParams, x: f64, tol: f64) -> Result<SeriesResult> {
    confluent_eval(cp, x, tol, false)
}

/// `HC'(x)` by termwise differentiation.
pub fn confluent_heun_derivative(
    cp: &ConfluentHeunParams,
    x: f64,
    tol: f64,
) -> Result<SeriesResult> {
    confluent_eval(cp, x, tol, true)
}

fn confluent_eval(
    cp: &ConfluentHeunParams,
    x: f64,
    tol: f64,
    derivative: bool,
) -> Result<SeriesResult> {
    if let Some(poly) = confluent_polynomial(cp) {
        let terms = poly.coeffs().len();
        let target = if derivative { poly.derivative() } else { poly };
        return Ok(SeriesResult::exact(target.eval_f64(x), terms));
    }
    if x * to_f64(&cp.p) > 0.0 {
        // HC(p,γ,δ,α,σ;x) = e^{-4px} HC(-p,γ,δ,γ+δ-α,σ-4pγ;x): the
        // transformed series has no sign cancellation
        let four_p = int(4) * &cp.p;
        let twin = ConfluentHeunParams {
            p: -cp.p.clone(),
            gamma: cp.gamma.clone(),
            delta: cp.delta.clone(),
            alpha: &cp.gamma + &cp.delta - &cp.alpha,
            sigma: &cp.sigma - &four_p * &cp.gamma,
        };
        let e = (-to_f64(&four_p) * x).exp();
        let v = confluent_eval(&twin, x, tol, false)?;
        let value = if derivative {
            let dv = confluent_eval(&twin, x, tol, true)?;
            e * (dv.value - to_f64(&four_p) * v.value)
        } else {
            e * v.value
        };
        return Ok(SeriesResult {
            value,
            tail_estimate: e * v.tail_estimate,
            ..v
        });
    }
    let entire = cp.regular_at_one();
    if !entire && (x.is_nan() || x.abs() >= 1.0) {
        return Err(Error::DivergentSeries(format!(
            "confluent Heun series at |x| = {} >= 1",
            x.abs()
        )));
    }
    let (p, gamma, delta, alpha, sigma) = (
        to_f64(&cp.p),
        to_f64(&cp.gamma),
        to_f64(&cp.delta),
        to_f64(&cp.alpha),
        to_f64(&cp.sigma),
    );
    if x == 0.0 {
        let v = if derivative { -sigma / gamma } else { 1.0 };
        return Ok(SeriesResult {
            value: v,
            terms_used: 1,
            terminated: false,
            tail_estimate: 0.0,
        });
    }
    if entire && x.abs() > 1.0 {
        return entire_exact_coefficients(cp, x, tol, derivative);
    }
    let (mut d_prev, mut d) = (0.0f64, 1.0f64);
    let mut acc = SeriesSum::new();
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let term = if derivative { kf * d / x } else { d };
        // entire series: only stop after the terms have started to shrink
        let past_peak = !entire || kf > 4.0 * p.abs() * x.abs() + gamma.abs() + alpha.abs();
        if past_peak {
            if acc.push(term, tol) {
                break;
            }
        } else {
            acc.push_unchecked(term);
        }
        acc.check_cap("confluent Heun")?;
        let next = ((kf * (kf - 1.0 + gamma + delta - 4.0 * p) - sigma) * d * x
            + 4.0 * p * (kf - 1.0 + alpha) * d_prev * x * x)
            / ((kf + 1.0) * (kf + gamma));
        d_prev = d;
        d = next;
        k += 1;
    }
    Ok(acc.finish(if entire { 0.0 } else { x }))
}

/// Beyond `|x| = 1` the float recurrence amplifies rounding like `|x|^k`,
/// so the coefficients are generated exactly and only the sum is rounded.
fn entire_exact_coefficients(
    cp: &ConfluentHeunParams,
    x: f64,
    tol: f64,
    derivative: bool,
) -> Result<SeriesResult> {
    let four_p = int(4) * &cp.p;
    let shift = &cp.gamma + &cp.delta - &four_p - int(1);
    let bound =
        4.0 * to_f64(&cp.p).abs() * x.abs() + to_f64(&cp.gamma).abs() + to_f64(&cp.alpha).abs();
    let (mut c_prev, mut c) = (Rational::zero(), Rational::one());
    let mut xk = 1.0f64;
    let mut acc = SeriesSum::new();
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let ck = to_f64(&c);
        let term = if derivative {
            kf * ck * xk / x
        } else {
            ck * xk
        };
        if kf > bound {
            if acc.push(term, tol) {
                break;
            }
        } else {
            acc.push_unchecked(term);
        }
        acc.check_cap("confluent Heun")?;
        let kr = int(k as i64);
        let next = ((&kr * (&kr + &shift) - &cp.sigma) * &c
            + &four_p * (&kr - int(1) + &cp.alpha) * &c_prev)
            / ((&kr + int(1)) * (&kr + &cp.gamma));
        c_prev = std::mem::replace(&mut c, next);
        xk *= x;
        k += 1;
    }
    Ok(acc.finish(0.0))
}

/// Coefficients of `x(x-1)u'' + [4p x(x-1) + γ(x-1) + δx] u' + (4pαx - σ) u`.
///
/// For a series truncated to `N` terms the coefficients of `x^k`, `k < N-1`,
/// vanish exactly when the truncation agrees with the true solution.
pub fn confluent_heun_ode_residual(cp: &ConfluentHeunParams, u: &Poly) -> Poly {
    let x = Poly::x();
    let xm1 = Poly::linear(int(-1), int(1));
    let four_p = int(4) * &cp.p;
    let a = &x * &xm1;
    let b = &(&a.scale(&four_p) + &xm1.scale(&cp.gamma)) + &x.scale(&cp.delta);
    let c = Poly::linear(-&cp.sigma, &four_p * &cp.alpha);
    let d1 = u.derivative();
    let d2 = d1.derivative();
    &(&(&a * &d2) + &(&b * &d1)) + &(&c * u)
}
