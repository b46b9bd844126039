//! Local Heun function `Hl(a, q; α, β; γ, δ; x)`: the solution of
//!
//! ```text
//! u'' + (γ/x + δ/(x-1) + ε/(x-a)) u' + (αβx - q) / (x(x-1)(x-a)) u = 0,
//! ε = α + β + 1 - γ - δ,
//! ```
//!
//! analytic at 0 with `u(0) = 1`. Writing `u = Σ c_k x^k` gives
//!
//! ```text
//! a(k+1)(k+γ) c_{k+1} = [k((k-1+γ)(1+a) + aδ + ε) + q] c_k - (k-1+α)(k-1+β) c_{k-1}.
//! ```

use num_traits::{One, Zero};

use super::{SeriesResult, SeriesSum};
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, int, nonpositive_integer, to_f64, Poly, Rational};

/// Largest polynomial degree probed by exact termination detection.
const MAX_EXACT_DEGREE: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeunParams {
    pub a: Rational,
    pub q: Rational,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
}

impl HeunParams {
    pub fn new(
        a: Rational,
        q: Rational,
        alpha: Rational,
        beta: Rational,
        gamma: Rational,
        delta: Rational,
    ) -> Result<Self> {
        if a.is_zero() || a.is_one() {
            return Err(Error::InvalidParams(format!(
                "singular point a = {} must differ from 0 and 1",
                format_rational(&a)
            )));
        }
        if nonpositive_integer(&gamma).is_some() {
            return Err(Error::InvalidGamma(format_rational(&gamma)));
        }
        Ok(HeunParams {
            a,
            q,
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    /// The exponent at `x = a` fixed by the Fuchsian relation.
    pub fn epsilon(&self) -> Rational {
        &self.alpha + &self.beta + int(1) - &self.gamma - &self.delta
    }

    /// Whether `q = aαβ`, the condition under which the derivative is again
    /// a Heun function.
    pub fn derivative_condition_holds(&self) -> bool {
        self.q == &self.a * &self.alpha * &self.beta
    }

    /// `(A, B, C)` with the equation written as `A u'' + B u' + C u = 0`.
    pub fn ode_coefficients(&self) -> (Poly, Poly, Poly) {
        let x = Poly::x();
        let xm1 = Poly::linear(int(-1), int(1));
        let xma = Poly::linear(-&self.a, int(1));
        let a_poly = &(&x * &xm1) * &xma;
        let b_poly = &(&(&xm1 * &xma).scale(&self.gamma) + &(&x * &xma).scale(&self.delta))
            + &(&x * &xm1).scale(&self.epsilon());
        let c_poly = Poly::linear(-&self.q, &self.alpha * &self.beta);
        (a_poly, b_poly, c_poly)
    }

    fn coefficients_f64(&self) -> [f64; 6] {
        [
            to_f64(&self.a),
            to_f64(&self.q),
            to_f64(&self.alpha),
            to_f64(&self.beta),
            to_f64(&self.gamma),
            to_f64(&self.delta),
        ]
    }
}

/// Exact truncated series `Σ_{k < nterms} c_k x^k`.
pub fn heun_series_exact(p: &HeunParams, nterms: usize) -> Poly {
    Poly::new(exact_coefficients(p, nterms))
}

fn exact_coefficients(p: &HeunParams, nterms: usize) -> Vec<Rational> {
    let eps = p.epsilon();
    let one = int(1);
    let mut c: Vec<Rational> = Vec::with_capacity(nterms);
    if nterms == 0 {
        return c;
    }
    c.push(Rational::one());
    for k in 0..nterms.saturating_sub(1) {
        let kq = int(k as i64);
        let km1 = &kq - &one;
        let mid = &kq * ((&km1 + &p.gamma) * (&one + &p.a) + &p.a * &p.delta + &eps) + &p.q;
        let mut rhs = mid * &c[k];
        if k >= 1 {
            rhs -= (&km1 + &p.alpha) * (&km1 + &p.beta) * &c[k - 1];
        }
        let den = &p.a * (&kq + &one) * (&kq + &p.gamma);
        c.push(rhs / den);
    }
    c
}

/// The exact polynomial `Hl`, if the series terminates.
///
/// Termination needs `α` or `β` equal to `-N` and the accessory parameter
/// tuned so that `c_{N+1} = 0`; then every later coefficient vanishes.
pub fn heun_polynomial(p: &HeunParams) -> Option<Poly> {
    let mut candidates: Vec<u64> = [&p.alpha, &p.beta]
        .into_iter()
        .filter_map(nonpositive_integer)
        .filter(|&n| n <= MAX_EXACT_DEGREE)
        .collect();
    candidates.sort_unstable();
    let last = *candidates.last()?;
    let c = exact_coefficients(p, last as usize + 3);
    candidates.into_iter().find_map(|n| {
        let n = n as usize;
        (c[n + 1].is_zero() && c[n + 2].is_zero()).then(|| Poly::new(c[..=n].to_vec()))
    })
}

fn radius(p: &HeunParams) -> f64 {
    to_f64(&p.a).abs().min(1.0)
}

/// `Hl(x)` by its power series at 0.
///
/// Requires `|x| < min(1, |a|)` unless the series terminates.
pub fn heun_local(p: &HeunParams, x: f64, tol: f64) -> Result<SeriesResult> {
    heun_eval(p, x, tol, false)
}

/// `Hl'(x)` by termwise differentiation of the series.
pub fn heun_local_derivative(p: &HeunParams, x: f64, tol: f64) -> Result<SeriesResult> {
    heun_eval(p, x, tol, true)
}

fn heun_eval(p: &HeunParams, x: f64, tol: f64, derivative: bool) -> Result<SeriesResult> {
    if let Some(poly) = heun_polynomial(p) {
        let terms = poly.coeffs().len();
        let target = if derivative { poly.derivative() } else { poly };
        return Ok(SeriesResult::exact(target.eval_f64(x), terms));
    }
    let r = radius(p);
    if x.is_nan() || x.abs() >= r {
        return Err(Error::DivergentSeries(format!(
            "Heun series at |x| = {} outside radius {r}",
            x.abs()
        )));
    }
    let [a, q, alpha, beta, gamma, delta] = p.coefficients_f64();
    let eps = alpha + beta + 1.0 - gamma - delta;
    if x == 0.0 {
        let v = if derivative { q / (a * gamma) } else { 1.0 };
        return Ok(SeriesResult {
            value: v,
            terms_used: 1,
            terminated: false,
            tail_estimate: 0.0,
        });
    }
    // d_k = c_k x^k
    let (mut d_prev, mut d) = (0.0f64, 1.0f64);
    let mut acc = SeriesSum::new();
    let mut zero_run = 0;
    let mut k = 0usize;
    loop {
        let term = if derivative { k as f64 * d / x } else { d };
        if acc.push(term, tol) {
            break;
        }
        acc.check_cap("Heun")?;
        zero_run = if d == 0.0 { zero_run + 1 } else { 0 };
        if zero_run >= 3 {
            return Ok(SeriesResult::exact(acc.sum, acc.terms));
        }
        let kf = k as f64;
        let mid = kf * ((kf - 1.0 + gamma) * (1.0 + a) + a * delta + eps) + q;
        let next = (mid * d * x - (kf - 1.0 + alpha) * (kf - 1.0 + beta) * d_prev * x * x)
            / (a * (kf + 1.0) * (kf + gamma));
        d_prev = d;
        d = next;
        k += 1;
    }
    Ok(acc.finish(x / r))
}

/// `x(x-1)(x-a) p'' + [γ(x-1)(x-a) + δx(x-a) + εx(x-1)] p' + (αβx - q) p`.
///
/// Zero exactly when the polynomial `p` solves the Heun equation.
pub fn heun_ode_residual(params: &HeunParams, p: &Poly) -> Poly {
    let (a, b, c) = params.ode_coefficients();
    let d1 = p.derivative();
    let d2 = d1.derivative();
    &(&(&a * &d2) + &(&b * &d1)) + &(&c * p)
}

/// Residual of the rational function `num / den`, multiplied through by `den³`.
pub fn heun_ode_residual_rational(params: &HeunParams, num: &Poly, den: &Poly) -> Poly {
    let (a, b, c) = params.ode_coefficients();
    let (p1, p2) = (num.derivative(), num.derivative().derivative());
    let (q1, q2) = (den.derivative(), den.derivative().derivative());
    // u' Q² = P'Q - PQ',  u'' Q³ = (P''Q - PQ'')Q - 2Q'(P'Q - PQ')
    let first = &(&p1 * den) - &(num * &q1);
    let second = &(&(&(&p2 * den) - &(num * &q2)) * den) - &(&q1 * &first).scale(&int(2));
    let t1 = &a * &second;
    let t2 = &(&b * &first) * den;
    let t3 = &(&c * num) * &(den * den);
    &(&t1 + &t2) + &t3
}
