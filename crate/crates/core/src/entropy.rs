//! Order-2 Rényi and Tsallis entropies and variances of two families of
//! positive linear operators:
//!
//! - the B-spline operators `L_n` of [`crate::bspline`], with kernel
//!   `W_n(x, ·)`;
//! - the Kantorovich modifications of the Bernstein operators,
//!   `Q_n^[k] f = n^k (n-k)!/n! · D^k B_n f^(-k)`, whose kernel at `x` is
//!   `Σ_j b_{n-k,j}(x) B_{k-1}(j/n, …, (j+k)/n; ·)`.
//!
//! For a kernel `K(x, ·)` the entropies are `-log ∫ K²` and `1 - ∫ K²`. The
//! squared-kernel integral of `Q_n^[k]` is written `S_n^[k](x)`.

use std::f64::consts::PI;

use num_traits::{One, Signed, Zero};

use crate::bspline::{bspline_density, kernel, KnotVector, SigmaSpec};
use crate::error::{Error, Result};
use crate::exactalg::{
    binomial, factorial, format_rational, int, rat, to_f64, PiecewisePoly, Poly, Rational,
};
use crate::specfun::kernel_sums::f_poly;
use crate::specfun::quadrature::QuadratureRule;

/// Nodes of the periodic trapezoid rule used for the integral form of `S_n^[2]`.
pub const INTEGRAL_FORM_NODES: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorSpec {
    /// `L_n` with width function `sigma`; defined on all of ℝ.
    BSpline { n: u32, sigma: SigmaSpec },
    /// `Q_n^[k]` on `[0, 1]`, `0 <= k <= n`.
    Kantorovich { n: u32, k: u32 },
}

impl OperatorSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            OperatorSpec::BSpline { n: 0, .. } => Err(Error::InvalidParams(
                "operator index n must be positive".into(),
            )),
            OperatorSpec::Kantorovich { n, k } if *n == 0 || k > n => Err(Error::InvalidParams(
                format!("Kantorovich operator needs 0 <= k <= n and n >= 1, got n = {n}, k = {k}"),
            )),
            _ => Ok(()),
        }
    }
}

/// Entropies and variance of one operator at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyPoint {
    pub x: f64,
    pub squared_kernel_integral: f64,
    pub renyi: f64,
    pub tsallis: f64,
    pub variance: f64,
}

/// The monomials `e_0, e_1, e_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestFunction {
    E0,
    E1,
    E2,
}

impl TestFunction {
    pub const ALL: [TestFunction; 3] = [TestFunction::E0, TestFunction::E1, TestFunction::E2];

    pub fn poly(self) -> Poly {
        let deg = match self {
            TestFunction::E0 => 0,
            TestFunction::E1 => 1,
            TestFunction::E2 => 2,
        };
        Poly::monomial(Rational::one(), deg)
    }
}

/// How [`kantorovich_apply`] evaluates `Q_n^[k] f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KantorovichMethod {
    /// `n^k (n-k)!/n! · D^k B_n f^(-k)` with exact antiderivatives.
    Definition,
    /// Integration of `f` against the B-spline kernel.
    BSplineForm,
}

/// How [`s_nk`] evaluates `S_n^[k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SMethod {
    /// Exact double sum of products of Bernstein weights and B-spline overlaps.
    Direct,
    /// The closed polynomial in `(x - 1/2)²`; `k = 2` only.
    SumForm,
    /// The `φ`-integral by periodic trapezoid; `k = 2` only.
    IntegralForm,
}

/// `C(n, j) x^j (1-x)^(n-j)` as a polynomial.
pub fn bernstein_poly(n: u32, j: u32) -> Result<Poly> {
    if j > n {
        return Err(Error::IndexOutOfRange(format!(
            "Bernstein index j = {j} exceeds n = {n}"
        )));
    }
    let one_minus_x = Poly::linear(int(1), int(-1));
    let c = Rational::from_integer(binomial(n as u64, j as u64));
    Ok(&Poly::monomial(c, j as usize) * &one_minus_x.pow(n - j))
}

/// `b_{n,j}(x) = C(n, j) x^j (1-x)^(n-j)`, exactly.
pub fn bernstein_basis(n: u32, j: i64, x: &Rational) -> Result<Rational> {
    if j < 0 || j > n as i64 {
        return Err(Error::IndexOutOfRange(format!(
            "Bernstein index j = {j} outside 0..={n}"
        )));
    }
    let j = j as u32;
    let one_minus = int(1) - x;
    let mut v = Rational::from_integer(binomial(n as u64, j as u64));
    for _ in 0..j {
        v *= x;
    }
    for _ in j..n {
        v *= &one_minus;
    }
    Ok(v)
}

/// `B_n f` as a polynomial, for polynomial `f`.
pub fn bernstein_operator(n: u32, f: &Poly) -> Poly {
    let nq = int(n as i64);
    (0..=n).fold(Poly::zero(), |acc, j| {
        let w = f.eval(&(int(j as i64) / &nq));
        &acc + &bernstein_poly(n, j).expect("j <= n").scale(&w)
    })
}

fn check_kantorovich(n: u32, k: u32) -> Result<()> {
    OperatorSpec::Kantorovich { n, k }.validate()
}

/// `Q_n^[k] f` as a polynomial, straight from the definition.
pub fn kantorovich_poly(n: u32, k: u32, f: &Poly) -> Result<Poly> {
    check_kantorovich(n, k)?;
    let mut g = f.clone();
    for _ in 0..k {
        g = g.antiderivative();
    }
    let mut h = bernstein_operator(n, &g);
    for _ in 0..k {
        h = h.derivative();
    }
    let scale = Rational::new(
        num_bigint::BigInt::from(n).pow(k) * factorial((n - k) as u64),
        factorial(n as u64),
    );
    Ok(h.scale(&scale))
}

/// `B_{k-1}(j/n, (j+1)/n, …, (j+k)/n; ·)`.
fn kantorovich_spline(n: u32, k: u32, j: u32) -> PiecewisePoly {
    let nq = int(n as i64);
    let knots = KnotVector::uniform(
        &(int(j as i64) / &nq),
        &(int((j + k) as i64) / &nq),
        k as usize,
    )
    .expect("k >= 1 and n >= 1");
    bspline_density(&knots)
}

/// Exact `Q_n^[k] f(x)` for polynomial `f`.
pub fn kantorovich_apply(
    n: u32,
    k: u32,
    f: &Poly,
    x: &Rational,
    method: KantorovichMethod,
) -> Result<Rational> {
    check_kantorovich(n, k)?;
    match method {
        KantorovichMethod::Definition => Ok(kantorovich_poly(n, k, f)?.eval(x)),
        KantorovichMethod::BSplineForm if k == 0 => {
            let nq = int(n as i64);
            (0..=n).try_fold(Rational::zero(), |acc, j| {
                Ok(acc + bernstein_basis(n, j as i64, x)? * f.eval(&(int(j as i64) / &nq)))
            })
        }
        KantorovichMethod::BSplineForm => (0..=n - k).try_fold(Rational::zero(), |acc, j| {
            let w = bernstein_basis(n - k, j as i64, x)?;
            Ok(acc + w * kantorovich_spline(n, k, j).integrate_against(f))
        }),
    }
}

/// `S_n^[k](x)` by exact summation over overlapping kernel pieces.
pub fn s_direct(n: u32, k: u32, x: &Rational) -> Result<Rational> {
    check_kantorovich(n, k)?;
    if k == 0 {
        return Err(Error::UnsupportedK(0));
    }
    let m = n - k;
    let splines: Vec<PiecewisePoly> = (0..=m).map(|j| kantorovich_spline(n, k, j)).collect();
    let weights: Vec<Rational> = (0..=m)
        .map(|j| bernstein_basis(m, j as i64, x))
        .collect::<Result<_>>()?;
    let mut total = Rational::zero();
    for j in 0..=m as usize {
        for jp in j..=(m as usize).min(j + k as usize - 1) {
            let overlap = splines[j].integrate_product(&splines[jp]);
            let term = &weights[j] * &weights[jp] * overlap;
            total += if jp == j { term } else { term * int(2) };
        }
    }
    Ok(total)
}

/// `S_n^[k]` as an exact polynomial in `x`, by the same double sum as
/// [`s_direct`] with the Bernstein weights kept symbolic.
pub fn s_direct_poly(n: u32, k: u32) -> Result<Poly> {
    check_kantorovich(n, k)?;
    if k == 0 {
        return Err(Error::UnsupportedK(0));
    }
    let m = n - k;
    let splines: Vec<PiecewisePoly> = (0..=m).map(|j| kantorovich_spline(n, k, j)).collect();
    let weights: Vec<Poly> = (0..=m)
        .map(|j| bernstein_poly(m, j))
        .collect::<Result<_>>()?;
    let mut total = Poly::zero();
    for j in 0..=m as usize {
        for jp in j..=(m as usize).min(j + k as usize - 1) {
            let mut overlap = splines[j].integrate_product(&splines[jp]);
            if jp != j {
                overlap *= int(2);
            }
            total = &total + &(&weights[j] * &weights[jp]).scale(&overlap);
        }
    }
    Ok(total)
}

/// `S_n^[2]` as an exact polynomial in `x`, `n >= 2`:
///
/// ```text
/// S_{m+2}^[2](x) = (m+2) / (3(m+1) 4^m) Σ_i (3m-2i+2) 4^i C(2i,i) C(2m-2i,m-i) (x-1/2)^{2i}
/// ```
pub fn s_sum_form_poly(n: u32) -> Result<Poly> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "S_n^[2] needs n >= 2, got {n}"
        )));
    }
    let m = (n - 2) as i64;
    let shifted_sq = Poly::linear(rat(-1, 2), int(1)).pow(2);
    let mut sum = Poly::zero();
    let mut u_pow = Poly::one();
    for i in 0..=m {
        let c = int(3 * m - 2 * i + 2)
            * int(4).pow(i as i32)
            * Rational::from_integer(binomial(2 * i as u64, i as u64))
            * Rational::from_integer(binomial((2 * m - 2 * i) as u64, (m - i) as u64));
        sum = &sum + &u_pow.scale(&c);
        u_pow = &u_pow * &shifted_sq;
    }
    let prefactor = int(m + 2) / (int(3) * int(m + 1) * int(4).pow(m as i32));
    Ok(sum.scale(&prefactor))
}

/// `S_n^[2](x) = n/(3π) ∫_0^π (1 - 4x(1-x) sin²(φ/2))^(n-2) (1 + 2cos²(φ/2)) dφ`.
pub fn s_integral_form(n: u32, x: f64, nodes: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "S_n^[2] needs n >= 2, got {n}"
        )));
    }
    let m = (n - 2) as i32;
    let c = 4.0 * x * (1.0 - x);
    let rule = QuadratureRule::periodic_trapezoid(nodes, 0.0, PI)?;
    let integral = rule.apply(|phi| {
        let s = (phi / 2.0).sin();
        let co = (phi / 2.0).cos();
        (1.0 - c * s * s).powi(m) * (1.0 + 2.0 * co * co)
    })?;
    Ok(n as f64 / (3.0 * PI) * integral)
}

fn require_k2(k: u32, method: SMethod) -> Result<()> {
    if method != SMethod::Direct && k != 2 {
        return Err(Error::UnsupportedK(k));
    }
    Ok(())
}

/// Exact `S_n^[k](x)` by [`SMethod::Direct`] or [`SMethod::SumForm`].
pub fn s_nk_exact(n: u32, k: u32, x: &Rational, method: SMethod) -> Result<Rational> {
    check_kantorovich(n, k)?;
    if k == 0 {
        return Err(Error::UnsupportedK(0));
    }
    require_k2(k, method)?;
    match method {
        SMethod::Direct => s_direct(n, k, x),
        SMethod::SumForm => Ok(s_sum_form_poly(n)?.eval(x)),
        SMethod::IntegralForm => Err(Error::InvalidParams(
            "the integral form is evaluated in floating point".into(),
        )),
    }
}

/// `S_n^[k](x)` for `k >= 1`. The discrete case `k = 0` has squared-kernel
/// sum `F_n(x)`, see [`crate::specfun::kernel_sums`].
pub fn s_nk(n: u32, k: u32, x: &Rational, method: SMethod) -> Result<f64> {
    check_kantorovich(n, k)?;
    if k == 0 {
        return Err(Error::UnsupportedK(0));
    }
    require_k2(k, method)?;
    match method {
        SMethod::IntegralForm => s_integral_form(n, to_f64(x), INTEGRAL_FORM_NODES),
        _ => Ok(to_f64(&s_nk_exact(n, k, x, method)?)),
    }
}

fn check_domain(op: &OperatorSpec, x: &Rational) -> Result<()> {
    op.validate()?;
    if matches!(op, OperatorSpec::Kantorovich { .. }) && (x.is_negative() || x > &int(1)) {
        return Err(Error::DomainError(format!(
            "Kantorovich operators live on [0, 1], got x = {}",
            format_rational(x)
        )));
    }
    Ok(())
}

/// Exact `∫ K(x, t)² dt` (the sum of squared weights when `k = 0`).
pub fn squared_kernel_integral(op: &OperatorSpec, x: &Rational) -> Result<Rational> {
    check_domain(op, x)?;
    match op {
        OperatorSpec::BSpline { n, sigma } => {
            let w = kernel(*n, sigma, x)?;
            Ok(w.density.integrate_product(&w.density))
        }
        OperatorSpec::Kantorovich { n, k: 0 } => Ok(f_poly(*n).eval(x)),
        OperatorSpec::Kantorovich { n, k: 2 } => s_nk_exact(*n, 2, x, SMethod::SumForm),
        OperatorSpec::Kantorovich { n, k } => s_direct(*n, *k, x),
    }
}

/// Exact `L e_2(x) - (L e_1(x))²` from the kernel moments.
pub fn operator_variance(op: &OperatorSpec, x: &Rational) -> Result<Rational> {
    check_domain(op, x)?;
    let (m1, m2) = match op {
        OperatorSpec::BSpline { n, sigma } => {
            let w = kernel(*n, sigma, x)?;
            (
                w.density.integrate_against(&TestFunction::E1.poly()),
                w.density.integrate_against(&TestFunction::E2.poly()),
            )
        }
        OperatorSpec::Kantorovich { n, k } => {
            let apply = |f: TestFunction| {
                kantorovich_apply(*n, *k, &f.poly(), x, KantorovichMethod::BSplineForm)
            };
            (apply(TestFunction::E1)?, apply(TestFunction::E2)?)
        }
    };
    Ok(m2 - &m1 * &m1)
}

/// Entropies and variance at each point, in input order.
pub fn entropy_profile(op: &OperatorSpec, xs: &[Rational]) -> Result<Vec<EntropyPoint>> {
    xs.iter()
        .map(|x| {
            let s = squared_kernel_integral(op, x)?;
            assert!(s.is_positive(), "squared-kernel integral must be positive");
            let sf = to_f64(&s);
            Ok(EntropyPoint {
                x: to_f64(x),
                squared_kernel_integral: sf,
                renyi: -sf.ln(),
                tsallis: to_f64(&(int(1) - &s)),
                variance: to_f64(&operator_variance(op, x)?),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynchronicityReport {
    pub pass: bool,
    /// Indices `(i, j)` of the pair with the smallest product.
    pub worst_pair: (usize, usize),
    pub worst_product: f64,
}

/// Checks `(f_i - f_j)(g_i - g_j) >= 0` over all pairs `i < j`.
pub fn synchronicity_check(f_vals: &[f64], g_vals: &[f64]) -> Result<SynchronicityReport> {
    if f_vals.len() != g_vals.len() {
        return Err(Error::LengthMismatch(f_vals.len(), g_vals.len()));
    }
    if f_vals.len() < 2 {
        return Err(Error::InvalidParams(
            "synchronicity needs at least two points".into(),
        ));
    }
    let mut worst = (0, 1);
    let mut worst_product = f64::INFINITY;
    for i in 0..f_vals.len() {
        for j in i + 1..f_vals.len() {
            let p = (f_vals[i] - f_vals[j]) * (g_vals[i] - g_vals[j]);
            if p < worst_product {
                worst_product = p;
                worst = (i, j);
            }
        }
    }
    Ok(SynchronicityReport {
        pass: worst_product >= 0.0,
        worst_pair: worst,
        worst_product,
    })
}

/// Pairwise synchronicity of variance, Rényi and Tsallis entropy along a profile.
pub fn profile_synchronicity(points: &[EntropyPoint]) -> Result<[SynchronicityReport; 3]> {
    let col = |f: fn(&EntropyPoint) -> f64| points.iter().map(f).collect::<Vec<_>>();
    let (v, r, t) = (col(|p| p.variance), col(|p| p.renyi), col(|p| p.tsallis));
    Ok([
        synchronicity_check(&v, &r)?,
        synchronicity_check(&v, &t)?,
        synchronicity_check(&r, &t)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid9() -> Vec<Rational> {
        (0..=8).map(|i| rat(i, 8)).collect()
    }

    #[test]
    fn bernstein_examples() {
        assert_eq!(bernstein_basis(5, 0, &int(0)).unwrap(), int(1));
        assert_eq!(bernstein_basis(2, 1, &rat(1, 4)).unwrap(), rat(3, 8));
        let total = (0..=3).fold(Poly::zero(), |acc, j| &acc + &bernstein_poly(3, j).unwrap());
        assert_eq!(total, Poly::one());
        assert!(matches!(
            bernstein_basis(3, 4, &int(0)),
            Err(Error::IndexOutOfRange(_))
        ));
        assert!(matches!(
            bernstein_basis(3, -1, &int(0)),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn kantorovich_examples() {
        assert_eq!(kantorovich_poly(1, 0, &Poly::x()).unwrap(), Poly::x());
        for method in [
            KantorovichMethod::Definition,
            KantorovichMethod::BSplineForm,
        ] {
            for x in grid9() {
                let v = kantorovich_apply(2, 2, &Poly::one(), &x, method).unwrap();
                assert_eq!(v, int(1));
            }
            assert_eq!(
                kantorovich_apply(2, 2, &Poly::x(), &rat(1, 2), method).unwrap(),
                rat(1, 2)
            );
        }
        assert!(
            kantorovich_apply(2, 3, &Poly::x(), &rat(1, 2), KantorovichMethod::Definition).is_err()
        );
    }

    #[test]
    fn kantorovich_forms_agree() {
        let xs = [int(0), rat(1, 4), rat(1, 2), int(1)];
        for n in 1..=6 {
            for k in 1..=3.min(n) {
                for f in TestFunction::ALL {
                    for x in &xs {
                        let a =
                            kantorovich_apply(n, k, &f.poly(), x, KantorovichMethod::Definition);
                        let b =
                            kantorovich_apply(n, k, &f.poly(), x, KantorovichMethod::BSplineForm);
                        assert_eq!(a.unwrap(), b.unwrap(), "n={n} k={k} {f:?} x={x}");
                    }
                }
            }
        }
    }

    #[test]
    fn antiderivative_constant_cancels() {
        // adding a degree < k polynomial to f^(-k) leaves D^k B_n unchanged
        let f = Poly::from_ints(&[3, -1, 2]);
        let g = f.antiderivative().antiderivative();
        let shifted = &g + &Poly::from_ints(&[7, -5]);
        let a = bernstein_operator(4, &g).derivative().derivative();
        let b = bernstein_operator(4, &shifted).derivative().derivative();
        assert_eq!(a, b);
    }

    #[test]
    fn s_examples() {
        for x in grid9() {
            assert_eq!(s_direct(2, 2, &x).unwrap(), rat(4, 3));
        }
        assert_eq!(
            s_nk_exact(3, 2, &rat(1, 2), SMethod::Direct).unwrap(),
            rat(5, 4)
        );
        assert_eq!(
            s_nk_exact(3, 2, &rat(1, 2), SMethod::SumForm).unwrap(),
            rat(5, 4)
        );
        // at x = 0 the kernel is the single hat on [0, 2/3] with peak 3: ∫ = (2/3)·9/3
        assert_eq!(s_nk_exact(3, 2, &int(0), SMethod::Direct).unwrap(), int(2));
        assert_eq!(s_nk_exact(3, 2, &int(0), SMethod::SumForm).unwrap(), int(2));
        assert!(matches!(
            s_nk(4, 3, &int(0), SMethod::SumForm),
            Err(Error::UnsupportedK(3))
        ));
        assert!(matches!(
            s_nk(4, 0, &int(0), SMethod::Direct),
            Err(Error::UnsupportedK(0))
        ));
    }

    #[test]
    fn s_three_way() {
        for n in 2..=8 {
            for x in grid9() {
                let direct = s_nk_exact(n, 2, &x, SMethod::Direct).unwrap();
                let sum = s_nk_exact(n, 2, &x, SMethod::SumForm).unwrap();
                assert_eq!(direct, sum, "n={n} x={x}");
                let integral = s_nk(n, 2, &x, SMethod::IntegralForm).unwrap();
                let sf = to_f64(&sum);
                assert!((integral - sf).abs() <= 1e-9 * sf, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn direct_poly_matches_pointwise() {
        for (n, k) in [(2, 1), (4, 2), (5, 3), (6, 4)] {
            let p = s_direct_poly(n, k).unwrap();
            for x in grid9() {
                assert_eq!(p.eval(&x), s_direct(n, k, &x).unwrap());
            }
        }
    }

    #[test]
    fn k1_is_piecewise_constant_kernel() {
        // B_0 on [j/n, (j+1)/n] has height n and the pieces do not overlap
        for n in 1..=5u32 {
            let x = rat(1, 3);
            let expected = (0..n).fold(Rational::zero(), |acc, j| {
                let b = bernstein_basis(n - 1, j as i64, &x).unwrap();
                acc + &b * &b * int(n as i64)
            });
            assert_eq!(s_direct(n, 1, &x).unwrap(), expected);
        }
    }

    #[test]
    fn variance_closed_forms() {
        for n in 1..=8 {
            for sigma in [rat(1, 2), int(1), rat(7, 3)] {
                let op = OperatorSpec::BSpline {
                    n,
                    sigma: SigmaSpec::Constant(sigma.clone()),
                };
                for x in [int(-1), int(0), rat(5, 2)] {
                    let v = operator_variance(&op, &x).unwrap();
                    assert_eq!(v, &sigma * &sigma / int(3 * n as i64));
                }
            }
        }
        for m in 0..=6i64 {
            let op = OperatorSpec::Kantorovich {
                n: (m + 2) as u32,
                k: 2,
            };
            for x in grid9() {
                let closed = int(m) / int((m + 2) * (m + 2)) * &x * (int(1) - &x)
                    + int(1) / int(6 * (m + 2) * (m + 2));
                assert_eq!(operator_variance(&op, &x).unwrap(), closed);
            }
        }
        let op = OperatorSpec::Kantorovich { n: 3, k: 2 };
        assert_eq!(operator_variance(&op, &rat(1, 2)).unwrap(), rat(5, 108));
        // discrete case: Bernstein variance x(1-x)/n
        let op = OperatorSpec::Kantorovich { n: 4, k: 0 };
        assert_eq!(operator_variance(&op, &rat(1, 3)).unwrap(), rat(1, 18));
    }

    #[test]
    fn profile_examples() {
        let op = OperatorSpec::BSpline {
            n: 1,
            sigma: SigmaSpec::Constant(int(1)),
        };
        for p in entropy_profile(&op, &[int(0), rat(1, 2), int(7)]).unwrap() {
            assert!((p.renyi - 2f64.ln()).abs() < 1e-15);
            assert_eq!(p.tsallis, 0.5);
            assert!((p.variance - 1.0 / 3.0).abs() < 1e-16);
        }
        let op = OperatorSpec::Kantorovich { n: 3, k: 2 };
        let p = &entropy_profile(&op, &[rat(1, 2)]).unwrap()[0];
        assert_eq!(p.squared_kernel_integral, 1.25);
        assert_eq!(p.variance, to_f64(&rat(5, 108)));
        let op = OperatorSpec::Kantorovich { n: 2, k: 2 };
        for p in entropy_profile(&op, &grid9()).unwrap() {
            assert_eq!(p.tsallis, to_f64(&rat(-1, 3)));
        }
        let op = OperatorSpec::Kantorovich { n: 3, k: 0 };
        let p = &entropy_profile(&op, &[rat(1, 2)]).unwrap()[0];
        assert_eq!(p.squared_kernel_integral, 20.0 / 64.0);
    }

    #[test]
    fn profile_errors() {
        let op = OperatorSpec::Kantorovich { n: 3, k: 2 };
        assert!(matches!(
            entropy_profile(&op, &[rat(3, 2)]),
            Err(Error::DomainError(_))
        ));
        let op = OperatorSpec::BSpline {
            n: 2,
            sigma: SigmaSpec::Quadratic {
                c: int(1),
                d: int(-1),
            },
        };
        assert!(matches!(
            entropy_profile(&op, &[int(2)]),
            Err(Error::NonpositiveWidth { .. })
        ));
        let op = OperatorSpec::Kantorovich { n: 2, k: 3 };
        assert!(entropy_profile(&op, &[int(0)]).is_err());
    }

    #[test]
    fn synchronicity_controls() {
        let r = synchronicity_check(&[0.0, 1.0], &[1.0, 0.0]).unwrap();
        assert!(!r.pass);
        assert_eq!(r.worst_product, -1.0);
        assert_eq!(r.worst_pair, (0, 1));
        assert!(matches!(
            synchronicity_check(&[0.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn synchronous_on_grids() {
        let grid33: Vec<Rational> = (0..=32).map(|i| rat(i, 8) - int(2)).collect();
        let unit33: Vec<Rational> = (0..=32).map(|i| rat(i, 32)).collect();
        let ops = [
            (
                OperatorSpec::BSpline {
                    n: 2,
                    sigma: SigmaSpec::Quadratic {
                        c: int(1),
                        d: int(1),
                    },
                },
                &grid33,
            ),
            (
                OperatorSpec::BSpline {
                    n: 3,
                    sigma: SigmaSpec::Constant(rat(3, 2)),
                },
                &grid33,
            ),
            (OperatorSpec::Kantorovich { n: 3, k: 2 }, &unit33),
            (OperatorSpec::Kantorovich { n: 6, k: 2 }, &unit33),
        ];
        for (op, xs) in ops {
            let pts = entropy_profile(&op, xs).unwrap();
            for r in profile_synchronicity(&pts).unwrap() {
                assert!(r.pass, "{op:?}: {r:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn synchronicity_of_identical_lists(v in proptest::collection::vec(-1e3f64..1e3, 2..20)) {
            prop_assert!(synchronicity_check(&v, &v).unwrap().pass);
        }

        #[test]
        fn squared_integral_scales_inversely_with_width(n in 1u32..6, num in 1i64..20, den in 1i64..10) {
            let sigma = rat(num, den);
            let op = OperatorSpec::BSpline { n, sigma: SigmaSpec::Constant(sigma.clone()) };
            let s = squared_kernel_integral(&op, &rat(1, 3)).unwrap();
            prop_assert_eq!(s * sigma, crate::bspline::c_constant(n));
        }
    }
}
