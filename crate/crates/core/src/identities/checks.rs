//! The individual checks behind [`super::verify`].

use std::f64::consts::PI;

use num_traits::{One, Zero};

use super::taylor::{kn_derivative_taylor, kn_taylor, MAX_J};
use super::{
    nan_max, CheckMode, IdentityId, ModeKind, Mutation, Params, RouteReport, VerificationReport,
};
use crate::entropy::{
    s_direct, s_direct_poly, s_integral_form, s_sum_form_poly, INTEGRAL_FORM_NODES,
};
use crate::error::{Error, Result};
use crate::exactalg::{
    binomial, double_factorial, factorial, format_rational, from_f64, int, rat, to_f64, Poly,
    Rational,
};
use crate::specfun::rel_err;
use crate::specfun::{
    confluent_heun, confluent_heun_derivative, confluent_heun_ode_residual, confluent_series_exact,
    f_poly, heun_local, heun_local_derivative, heun_ode_residual, heun_ode_residual_rational,
    heun_polynomial, heun_series_exact, hyp2f1, hyp2f1_poly, hyp2f1_real, kernel_sum,
    kn_deriv_zero, legendre_p, legendre_poly, szasz_k, u_exact, ConfluentHeunParams, HeunParams,
    KernelSumKind, QuadratureRule, DEFAULT_TOL,
};

/// Central finite-difference step.
pub const FD_STEP: f64 = 1e-5;

/// Relative tolerance for finite-difference derivative routes.
pub const FD_TOL: f64 = 1e-6;

/// Number of Taylor coefficients compared by the truncated-series checks.
const TAYLOR_ORDER: usize = 24;

const GRID9: [f64; 9] = [0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45];
const HEUN_LADDER_GRID: [f64; 8] = [0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40];
const CONFLUENT_GRID: [f64; 4] = [0.1, 0.3, 0.5, 0.8];
const KN_GRID: [f64; 4] = [0.1, 0.25, 0.5, 0.9];

pub(crate) fn default_tol(_id: IdentityId) -> f64 {
    1e-9
}

pub(crate) fn default_grid(id: IdentityId, params: &Params) -> Vec<f64> {
    match id {
        IdentityId::I22 => (0..=8).map(|i| i as f64 / 8.0).collect(),
        // the alternating series at -x loses (1+2x)^{2n-1}/(1-2x)^{2n-1} digits
        IdentityId::I34 => match params.get_u32("n") {
            Ok(n) if n > 4 => vec![0.05, 0.10, 0.15, 0.20],
            _ => HEUN_LADDER_GRID.to_vec(),
        },
        IdentityId::I311_312 => HEUN_LADDER_GRID.to_vec(),
        IdentityId::I36 => vec![0.1, 0.25, 0.5, 1.0, 2.0, 4.0],
        IdentityId::I42 | IdentityId::I43 | IdentityId::I46 | IdentityId::I47 | IdentityId::I48 => {
            CONFLUENT_GRID.to_vec()
        }
        IdentityId::I45 => KN_GRID.to_vec(),
        _ => GRID9.to_vec(),
    }
}

// ---- routes ----

fn exact_route(name: &str, lhs: &Poly, rhs: &Poly) -> RouteReport {
    let diff = lhs - rhs;
    RouteReport {
        name: name.to_string(),
        max_err: diff.max_abs_coeff(),
        tol: 0.0,
        points: lhs.coeffs().len().max(rhs.coeffs().len()).max(1),
        pass: diff.is_zero(),
    }
}

fn zero_route(name: &str, residual: &Poly, points: usize) -> RouteReport {
    exact_route(name, residual, &Poly::zero()).with_points(points)
}

fn value_route(name: &str, got: &Rational, want: &Rational) -> RouteReport {
    exact_route(
        name,
        &Poly::constant(got.clone()),
        &Poly::constant(want.clone()),
    )
    .with_points(1)
}

fn missing_route(name: &str) -> RouteReport {
    RouteReport {
        name: name.to_string(),
        max_err: f64::INFINITY,
        tol: 0.0,
        points: 0,
        pass: false,
    }
}

impl RouteReport {
    fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }
}

/// Largest relative error of `f(x) = (computed, reference)` over the grid.
fn grid_route<F>(name: &str, grid: &[f64], tol: f64, f: F) -> Result<RouteReport>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let mut max_err = 0.0f64;
    for &x in grid {
        let (got, want) = f(x)?;
        max_err = nan_max(max_err, rel_err(got, want));
    }
    Ok(RouteReport {
        name: name.to_string(),
        max_err,
        tol,
        points: grid.len(),
        pass: max_err <= tol,
    })
}

fn central_difference<F: Fn(f64) -> Result<f64>>(f: &F, x: f64) -> Result<f64> {
    Ok((f(x + FD_STEP)? - f(x - FD_STEP)?) / (2.0 * FD_STEP))
}

// ---- shared builders ----

fn f_poly_m(n: u32, mutation: Mutation) -> Poly {
    let f = f_poly(n);
    match mutation {
        Mutation::PerturbFn => &f + &Poly::x(),
        _ => f,
    }
}

fn f_value_m(n: u32, x: f64, mutation: Mutation) -> Result<f64> {
    let v = kernel_sum(KernelSumKind::F, n, x, DEFAULT_TOL)?.value;
    Ok(match mutation {
        Mutation::PerturbFn => v + x,
        _ => v,
    })
}

fn hl(p: &HeunParams, x: f64) -> Result<f64> {
    Ok(heun_local(p, x, DEFAULT_TOL)?.value)
}

fn hc(p: &ConfluentHeunParams, x: f64) -> Result<f64> {
    Ok(confluent_heun(p, x, DEFAULT_TOL)?.value)
}

fn half() -> Rational {
    rat(1, 2)
}

fn r(v: i64) -> Rational {
    int(v)
}

/// `Hl(1/2, q; 2q, 1; 1, 1; ·)`.
fn hl_2q(q: &Rational) -> Result<HeunParams> {
    HeunParams::new(half(), q.clone(), q * r(2), r(1), r(1), r(1))
}

/// `Hl(1/2, -n; -2n, 1; 1, 1; ·)`, whose polynomial solution is `F_n`.
fn f_family(n: u32) -> Result<HeunParams> {
    let n = n as i64;
    HeunParams::new(half(), r(-n), r(-2 * n), r(1), r(1), r(1))
}

/// `Hl(1/2, 3 - 3n; 2 - 2n, 3; 2, 2; ·)`.
fn f_derivative_family(n: u32) -> Result<HeunParams> {
    let n = n as i64;
    HeunParams::new(half(), r(3 - 3 * n), r(2 - 2 * n), r(3), r(2), r(2))
}

/// `Hl(1/2, (i-n)(2i+1); 2(i-n), 2i+1; i+1, i+1; ·)`.
fn i314_family(n: u32, i: u32) -> Result<HeunParams> {
    let (n, i) = (n as i64, i as i64);
    HeunParams::new(
        half(),
        r((i - n) * (2 * i + 1)),
        r(2 * (i - n)),
        r(2 * i + 1),
        r(i + 1),
        r(i + 1),
    )
}

/// `HC(n, j+1, 0, (2j+1)/2, 2n(2j+1); ·) = K_n^{(j)} / K_n^{(j)}(0)`.
fn kn_family(n: u32, j: u32) -> Result<ConfluentHeunParams> {
    let (n, j) = (n as i64, j as i64);
    ConfluentHeunParams::new(
        r(n),
        r(j + 1),
        r(0),
        rat(2 * j + 1, 2),
        r(2 * n * (2 * j + 1)),
    )
}

/// The polynomial
///
/// ```text
/// (2i)!!/(2i-1)!! · 4^{-n} / C(n, i) · Σ_{j=0}^{n-i} 4^j C(i+j, i) C(2i+2j, i+j) C(2n-2i-2j, n-i-j) (x - 1/2)^{2j}
/// ```
///
/// with `(-1)!! = 0!! = 1`.
pub fn i314_rhs(n: u32, i: u32) -> Result<Poly> {
    i314_rhs_m(n, i, Mutation::None)
}

fn i314_rhs_m(n: u32, i: u32, mutation: Mutation) -> Result<Poly> {
    if i > n {
        return Err(Error::IndexOutOfRange(format!("i = {i} exceeds n = {n}")));
    }
    let (n, i) = (n as u64, i as u64);
    let shifted_sq = Poly::linear(rat(-1, 2), r(1)).pow(2);
    let mut sum = Poly::zero();
    let mut u_pow = Poly::one();
    for j in 0..=n - i {
        let mut c = Rational::from_integer(
            num_traits::pow(num_bigint::BigInt::from(4), j as usize)
                * binomial(i + j, i)
                * binomial(2 * i + 2 * j, i + j)
                * binomial(2 * n - 2 * i - 2 * j, n - i - j),
        );
        if mutation == Mutation::FlipI314Sign && j == n - i {
            c = -c;
        }
        sum = &sum + &u_pow.scale(&c);
        u_pow = &u_pow * &shifted_sq;
    }
    let prefactor = Rational::new(
        double_factorial(2 * i as i64),
        double_factorial(2 * i as i64 - 1)
            * num_traits::pow(num_bigint::BigInt::from(4), n as usize)
            * binomial(n, i),
    );
    Ok(sum.scale(&prefactor))
}

/// `Σ c_k h^k (g)^{deg-k}`: clears the denominators of `p(h/g)` with a
/// total degree `deg >= deg p`.
fn homogenize(p: &Poly, h: &Poly, g: &Poly, deg: usize) -> Poly {
    p.coeffs()
        .iter()
        .enumerate()
        .fold(Poly::zero(), |acc, (k, c)| {
            &acc + &(&h.pow(k as u32) * &g.pow((deg - k) as u32)).scale(c)
        })
}

fn poly_degree(p: &Poly) -> usize {
    p.coeffs().len().saturating_sub(1)
}

/// `Σ_{k<order} b_k² y^k` with `b_k = C(n+k, k)` when `shift`, else `C(n, k)`.
fn squared_binomial_series(n: u32, order: usize, shift: bool) -> Poly {
    let n = n as u64;
    let coeffs = (0..order as u64)
        .map(|k| {
            let b = if shift {
                binomial(n + k, k)
            } else {
                binomial(n, k)
            };
            Rational::from_integer(&b * &b)
        })
        .collect();
    Poly::new(coeffs)
}

// ---- dispatch ----

pub(crate) fn run(
    id: IdentityId,
    params: &Params,
    mode: &CheckMode,
    mutation: Mutation,
) -> Result<Vec<RouteReport>> {
    let (grid, tol) = match mode {
        CheckMode::NumericGrid { grid, tol } => (grid.as_slice(), *tol),
        _ => (&[][..], 0.0),
    };
    let kind = mode.kind();
    match id {
        IdentityId::I22 => check_i22(params, kind, grid, tol),
        IdentityId::I31 => check_i31(params, grid, tol),
        IdentityId::I32 => check_i32(params, grid, tol),
        IdentityId::I33 => check_i33(params, kind, grid, tol, mutation),
        IdentityId::I34 => check_i34(params, grid, tol),
        IdentityId::I35 => check_i35(params, kind, grid, tol, mutation),
        IdentityId::I36 => check_i36(params, kind, grid, tol, mutation),
        IdentityId::I37 => check_i37(params, kind, grid, tol, mutation),
        IdentityId::I38 => check_i38(params, kind, grid, tol),
        IdentityId::I39 => check_i39(params, kind, grid, tol, mutation),
        IdentityId::I311_312 => check_i311_312(params, grid, tol),
        IdentityId::I313 => check_i313(params, kind, grid, tol, mutation),
        IdentityId::I314 => check_i314(params, kind, grid, tol, mutation),
        IdentityId::I42 => ladder_routes(LadderFamily::HC42, params, grid, tol),
        IdentityId::I43 => ladder_routes(LadderFamily::HC43, params, grid, tol),
        IdentityId::I45 => check_i45(params, kind, grid, tol),
        IdentityId::I46 => check_i46_i47(params, kind, grid, tol, true),
        IdentityId::I47 => check_i46_i47(params, kind, grid, tol, false),
        IdentityId::I48 => check_i48(params, kind, grid, tol),
        IdentityId::I49 => check_i49(params),
        IdentityId::I410 => check_i410(params),
    }
}

/// `S_n^[2]`: exact double sum = polynomial sum form; `φ`-integral ≈ sum form.
fn check_i22(params: &Params, kind: ModeKind, grid: &[f64], tol: f64) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    let sum_form = s_sum_form_poly(n)?;
    if kind == ModeKind::Exact {
        let direct = s_direct_poly(n, 2)?;
        let mut pointwise = Vec::new();
        let mut ok = true;
        for i in 0..=8 {
            let x = rat(i, 8);
            let d = s_direct(n, 2, &x)?;
            ok &= d == sum_form.eval(&x);
            pointwise.push(to_f64(&(d - sum_form.eval(&x))).abs());
        }
        let max_err = pointwise.iter().copied().fold(0.0, nan_max);
        return Ok(vec![
            exact_route("direct polynomial vs sum form", &direct, &sum_form),
            RouteReport {
                name: "direct at x = i/8 vs sum form".into(),
                max_err,
                tol: 0.0,
                points: 9,
                pass: ok,
            },
        ]);
    }
    Ok(vec![grid_route(
        "integral form vs sum form",
        grid,
        tol,
        |x| {
            let exact = from_f64(x).ok_or(Error::NonFinite(x))?;
            Ok((
                s_integral_form(n, x, INTEGRAL_FORM_NODES)?,
                to_f64(&sum_form.eval(&exact)),
            ))
        },
    )?])
}

/// `(1/π) ∫_0^π (1 - 4x(1-x) sin²(φ/2))^{-q} dφ`.
fn phi_integral(q: f64, x: f64) -> Result<f64> {
    let c = 4.0 * x * (1.0 - x);
    let rule = QuadratureRule::periodic_trapezoid(INTEGRAL_FORM_NODES, 0.0, PI)?;
    Ok(rule.apply(|phi| {
        let s = (phi / 2.0).sin();
        (1.0 - c * s * s).powf(-q)
    })? / PI)
}

fn check_i31(params: &Params, grid: &[f64], tol: f64) -> Result<Vec<RouteReport>> {
    let q = params.get("q")?;
    let hp = hl_2q(q)?;
    let qf = to_f64(q);
    let two_f_one = |x: f64| -> Result<f64> {
        let z = (x / (x - 1.0)).powi(2);
        Ok((1.0 - x).powf(-2.0 * qf) * hyp2f1(qf, qf, 1.0, z, DEFAULT_TOL)?.value)
    };
    Ok(vec![
        grid_route("Heun series vs phi-integral", grid, tol, |x| {
            Ok((hl(&hp, x)?, phi_integral(qf, x)?))
        })?,
        grid_route("2F1 form vs phi-integral", grid, tol, |x| {
            Ok((two_f_one(x)?, phi_integral(qf, x)?))
        })?,
        grid_route("2F1 form vs Heun series", grid, tol, |x| {
            Ok((two_f_one(x)?, hl(&hp, x)?))
        })?,
    ])
}

fn check_i32(params: &Params, grid: &[f64], tol: f64) -> Result<Vec<RouteReport>> {
    let q = params.get("q")?;
    let hp = hl_2q(q)?;
    let qf = to_f64(q);
    let pfaff = |x: f64| -> Result<f64> {
        let z = x * x / (2.0 * x - 1.0);
        Ok((1.0 - 2.0 * x).powf(-qf) * hyp2f1_real(qf, 1.0 - qf, 1.0, z, DEFAULT_TOL)?.value)
    };
    Ok(vec![
        grid_route("transformed 2F1 vs phi-integral", grid, tol, |x| {
            Ok((pfaff(x)?, phi_integral(qf, x)?))
        })?,
        grid_route("transformed 2F1 vs Heun series", grid, tol, |x| {
            Ok((pfaff(x)?, hl(&hp, x)?))
        })?,
    ])
}

/// `F_n = Hl(1/2, -n; -2n, 1; 1, 1; ·)`.
fn check_i33(
    params: &Params,
    kind: ModeKind,
    grid: &[f64],
    tol: f64,
    mutation: Mutation,
) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    let hp = f_family(n)?;
    let f = f_poly_m(n, mutation);
    Ok(match kind {
        ModeKind::Exact => vec![match heun_polynomial(&hp) {
            Some(h) => exact_route("terminating Heun series vs F_n", &h, &f),
            None => missing_route("Heun series does not terminate"),
        }],
        ModeKind::Ode => vec![
            zero_route(
                "Heun equation residual of F_n",
                &heun_ode_residual(&hp, &f),
                poly_degree(&f) + 4,
            ),
            value_route("F_n(0) = 1", &f.eval(&Rational::zero()), &Rational::one()),
        ],
        ModeKind::Numeric => vec![grid_route("Heun series vs direct F_n", grid, tol, |x| {
            Ok((hl(&hp, x)?, f_value_m(n, x, mutation)?))
        })?],
    })
}

/// `G_n(x) = Hl(1/2, n; 2n, 1; 1, 1; -x)` against the defining sum of `G_n`.
fn check_i34(params: &Params, grid: &[f64], tol: f64) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    let hp = hl_2q(&r(n as i64))?;
    Ok(vec![grid_route(
        "Heun series at -x vs direct G_n",
        grid,
        tol,
        |x| {
            Ok((
                hl(&hp, -x)?,
                kernel_sum(KernelSumKind::G, n, x, DEFAULT_TOL)?.value,
            ))
        },
    )?])
}

/// `G_n(-x) = (1-2x)^{1-2n} F_{n-1}(x)`, with `G_n(-x) = Hl(1/2, n; 2n, 1; 1, 1; x)`.
fn check_i35(
    params: &Params,
    kind: ModeKind,
    grid: &[f64],
    tol: f64,
    mutation: Mutation,
) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    if n == 0 {
        return Err(Error::InvalidParams("needs n >= 1".into()));
    }
    let hp = hl_2q(&r(n as i64))?;
    let f = f_poly_m(n - 1, mutation);
    let den = Poly::linear(r(1), r(-2)).pow(2 * n - 1);
    Ok(match kind {
        ModeKind::Exact => {
            // (1-2x)^{2n-1} · Hl series reproduces F_{n-1} and nothing else
            let order = 4 * n as usize + 4;
            let series = heun_series_exact(&hp, order);
            let product = (&den * &series).truncate(order);
            vec![exact_route(
                "(1-2x)^(2n-1) times Heun series vs F_(n-1)",
                &product,
                &f,
            )]
        }
        ModeKind::Ode => vec![
            zero_route(
                "Heun equation residual of F_(n-1)/(1-2x)^(2n-1)",
                &heun_ode_residual_rational(&hp, &f, &den),
                poly_degree(&f) + 6 * n as usize + 2,
            ),
            value_route(
                "value at 0",
                &(f.eval(&Rational::zero()) / den.eval(&Rational::zero())),
                &Rational::one(),
            ),
        ],
        ModeKind::Numeric => vec![grid_route(
            "Heun series vs (1-2x)^(1-2n) F_(n-1)",
            grid,
            tol,
            |x| {
                let rhs = (1.0 - 2.0 * x).powi(1 - 2 * n as i32) * f_value_m(n - 1, x, mutation)?;
                Ok((hl(&hp, x)?, rhs))
            },
        )?],
    })
}

/// `U_n(x) = F_n(x/(x+1))`.
fn check_i36(
    params: &Params,
    kind: ModeKind,
    grid: &[f64],
    tol: f64,
    mutation: Mutation,
) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    let f = f_poly_m(n, mutation);
    match kind {
        ModeKind::Exact => {
            // (1+x)^{2n} U_n(x) = Σ C(n,k)² x^{2k}; clear the same power from F_n(x/(x+1))
            let deg = poly_degree(&f).max(2 * n as usize);
            let onep = Poly::linear(r(1), r(1));
            let u_side = &squared_binomial_series(n, n as usize + 1, false)
                .compose(&Poly::monomial(r(1), 2))
                * &onep.pow((deg - 2 * n as usize) as u32);
            let f_side = homogenize(&f, &Poly::x(), &onep, deg);
            let mut routes = vec![exact_route(
                "cleared U_n vs cleared F_n(x/(x+1))",
                &u_side,
                &f_side,
            )];
            for x in [rat(1, 3), r(1), rat(5, 2)] {
                let t = &x / (&x + r(1));
                routes.push(value_route(
                    &format!("U_n vs F_n(x/(x+1)) at x = {}", format_rational(&x)),
                    &u_exact(n, &x)?,
                    &f.eval(&t),
                ));
            }
            Ok(routes)
        }
        _ => Ok(vec![grid_route(
            "direct U_n vs F_n(x/(x+1))",
            grid,
            tol,
            |x| {
                Ok((
                    kernel_sum(KernelSumKind::U, n, x, DEFAULT_TOL)?.value,
                    f_value_m(n, x / (x + 1.0), mutation)?,
                ))
            },
        )?]),
    }
}

/// `J_n(x) = ((1-x)/(1+x))^{2n+1} F_n(1/(1-x))`.
///
/// Both sides reduce to `(1-x)(1+x)^{-2n-1} Σ C(n,k)² x^{2k}`: the defining
/// series through the Taylor identity
/// `(1-y)^{2n+1} Σ C(n+k,k)² y^k = Σ C(n,k)² y^k`, and the right side by
/// clearing `(1-x)^{2n}` from `F_n(1/(1-x))`.
fn check_i37(
    params: &Params,
    kind: ModeKind,
    grid: &[f64],
    tol: f64,
    mutation: Mutation,
) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    let f = f_poly_m(n, mutation);
    match kind {
        ModeKind::Exact => {
            let order = 2 * n as usize + 8;
            let reduced = squared_binomial_series(n, n as usize + 1, false);
            let series = squared_binomial_series(n, order, true);
            let factor = Poly::linear(r(1), r(-1)).pow(2 * n + 1);
            let series_side = (&factor * &series).truncate(order);
            let deg = poly_degree(&f).max(2 * n as usize);
            let onem = Poly::linear(r(1), r(-1));
            let f_side = homogenize(&f, &Poly::one(), &onem, deg);
            let target = &reduced.compose(&Poly::monomial(r(1), 2))
                * &onem.pow((deg - 2 * n as usize) as u32);
            Ok(vec![
                exact_route(
                    "(1-y)^(2n+1) times defining series of J_n",
                    &series_side,
                    &reduced,
                ),
                exact_route("(1-x)^(2n) F_n(1/(1-x)) vs reduced form", &f_side, &target),
            ])
        }
        _ => Ok(vec![grid_route(
            "direct J_n vs transformed F_n",
            grid,
            tol,
            |x| {
                let rhs = ((1.0 - x) / (1.0 + x)).powi(2 * n as i32 + 1)
                    * f_value_m(n, 1.0 / (1.0 - x), mutation)?;
                Ok((kernel_sum(KernelSumKind::J, n, x, DEFAULT_TOL)?.value, rhs))
            },
        )?]),
    }
}

/// `₂F₁(-n, n+1; 1; x) = P_n(1-2x)`.
fn check_i38(params: &Params, kind: ModeKind, grid: &[f64], tol: f64) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    match kind {
        ModeKind::Exact => {
            let lhs = hyp2f1_poly(&r(-(n as i64)), &r(n as i64 + 1), &r(1))?;
            let rhs = legendre_poly(n).compose_affine(&r(-2), &r(1));
            Ok(vec![exact_route(
                "terminating 2F1 vs P_n(1-2x)",
                &lhs,
                &rhs,
            )])
        }
        _ => {
            let nf = n as f64;
            Ok(vec![grid_route(
                "2F1 series vs Legendre recurrence",
                grid,
                tol,
                |x| {
                    Ok((
                        hyp2f1(-nf, nf + 1.0, 1.0, x, DEFAULT_TOL)?.value,
                        legendre_p(n, 1.0 - 2.0 * x),
                    ))
                },
            )?])
        }
    }
}

/// `F_n(x) = (1-2x)^n P_n((2x²-2x+1)/(1-2x))`.
fn check_i39(
    params: &Params,
    kind: ModeKind,
    grid: &[f64],
    tol: f64,
    mutation: Mutation,
) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    match kind {
        ModeKind::Exact => {
            let num = Poly::from_ints(&[1, -2, 2]);
            let den = Poly::linear(r(1), r(-2));
            let rhs = homogenize(&legendre_poly(n), &num, &den, n as usize);
            Ok(vec![exact_route(
                "expanded Legendre form vs F_n",
                &rhs,
                &f_poly_m(n, mutation),
            )])
        }
        _ => Ok(vec![grid_route(
            "Legendre form vs direct F_n",
            grid,
            tol,
            |x| {
                let t = (2.0 * x * x - 2.0 * x + 1.0) / (1.0 - 2.0 * x);
                Ok((
                    (1.0 - 2.0 * x).powi(n as i32) * legendre_p(n, t),
                    f_value_m(n, x, mutation)?,
                ))
            },
        )?]),
    }
}

fn check_i311_312(params: &Params, grid: &[f64], tol: f64) -> Result<Vec<RouteReport>> {
    let mut routes = ladder_routes(LadderFamily::Heun311, params, grid, tol)?;
    routes.extend(ladder_routes(LadderFamily::Heun312, params, grid, tol)?);
    let l = HeunLadder::new(params)?;
    routes.push(grid_route(
        "shifted vs reflected right side",
        grid,
        tol,
        |x| Ok((l.shifted(x)?, l.reflected(x)?)),
    )?);
    Ok(routes)
}

/// `F_n' = 2n(2x-1) Hl(1/2, 3-3n; 2-2n, 3; 2, 2; x)`.
fn check_i313(
    params: &Params,
    kind: ModeKind,
    grid: &[f64],
    tol: f64,
    mutation: Mutation,
) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    if n == 0 {
        return Err(Error::InvalidParams("needs n >= 1".into()));
    }
    let hp = f_derivative_family(n)?;
    let df = f_poly_m(n, mutation).derivative();
    let factor = Poly::linear(r(-2 * n as i64), r(4 * n as i64));
    match kind {
        ModeKind::Exact => Ok(vec![match heun_polynomial(&hp) {
            Some(h) => exact_route("F_n' vs 2n(2x-1) Heun polynomial", &df, &(&factor * &h)),
            None => missing_route("Heun series does not terminate"),
        }]),
        _ => {
            let rhs =
                |x: f64| -> Result<f64> { Ok(2.0 * n as f64 * (2.0 * x - 1.0) * hl(&hp, x)?) };
            let f = |x: f64| f_value_m(n, x, mutation);
            Ok(vec![
                grid_route("exact F_n' vs Heun series", grid, tol, |x| {
                    Ok((df.eval_f64(x), rhs(x)?))
                })?,
                grid_route(
                    "finite-difference F_n' vs Heun series",
                    grid,
                    tol.max(FD_TOL),
                    |x| Ok((central_difference(&f, x)?, rhs(x)?)),
                )?,
            ])
        }
    }
}

fn check_i314(
    params: &Params,
    kind: ModeKind,
    grid: &[f64],
    tol: f64,
    mutation: Mutation,
) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    let i = params.get_u32("i")?;
    let rhs = i314_rhs_m(n, i, mutation)?;
    let hp = i314_family(n, i)?;
    Ok(match kind {
        ModeKind::Ode => vec![
            zero_route(
                "Heun equation residual of the closed form",
                &heun_ode_residual(&hp, &rhs),
                poly_degree(&rhs) + 4,
            ),
            value_route(
                "closed form at 0",
                &rhs.eval(&Rational::zero()),
                &Rational::one(),
            ),
        ],
        ModeKind::Exact => vec![match heun_polynomial(&hp) {
            Some(h) => exact_route("terminating Heun series vs closed form", &h, &rhs),
            None => missing_route("Heun series does not terminate"),
        }],
        ModeKind::Numeric => vec![grid_route("Heun series vs closed form", grid, tol, |x| {
            Ok((hl(&hp, x)?, rhs.eval_f64(x)))
        })?],
    })
}

fn kn_value(n: u32, j: u32, x: f64) -> Result<f64> {
    szasz_k(n, j, x, DEFAULT_TOL)
}

/// `x u'' + (4nx + j + 1) u' + 2n(2j+1) u`.
fn kn_equation_residual(n: u32, j: u32, u: &Poly) -> Poly {
    let (n, j) = (n as i64, j as i64);
    let d1 = u.derivative();
    let d2 = d1.derivative();
    &(&(&Poly::x() * &d2) + &(&Poly::linear(r(j + 1), r(4 * n)) * &d1))
        + &u.scale(&r(2 * n * (2 * j + 1)))
}

/// `K_n(x) = HC(n, 1, 0, 1/2, 2n; x)`.
fn check_i45(params: &Params, kind: ModeKind, grid: &[f64], tol: f64) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    let cp = kn_family(n, 0)?;
    let order = TAYLOR_ORDER;
    Ok(match kind {
        ModeKind::Exact => vec![exact_route(
            "confluent Heun series vs Taylor series of K_n",
            &confluent_series_exact(&cp, order),
            &kn_taylor(n, order),
        )],
        ModeKind::Ode => {
            let t = kn_taylor(n, order);
            vec![
                zero_route(
                    "confluent Heun residual of the Taylor series of K_n",
                    &confluent_heun_ode_residual(&cp, &t).truncate(order - 1),
                    order - 1,
                ),
                zero_route(
                    "x K'' + (4nx+1) K' + 2n K on the Taylor series",
                    &kn_equation_residual(n, 0, &t).truncate(order - 1),
                    order - 1,
                ),
                value_route("K_n(0) = 1", &t.coeff(0), &Rational::one()),
            ]
        }
        ModeKind::Numeric => vec![grid_route(
            "confluent Heun series vs direct K_n",
            grid,
            tol,
            |x| Ok((hc(&cp, x)?, kn_value(n, 0, x)?)),
        )?],
    })
}

/// `HC(n, 2, 2, 5/2, 6n-2; x) = K_n'(x) / (2n(x-1))` when `with_pole`, else
/// `HC(n, 2, 0, 3/2, 6n; x) = -K_n'(x) / (2n)`.
fn check_i46_i47(
    params: &Params,
    kind: ModeKind,
    grid: &[f64],
    tol: f64,
    with_pole: bool,
) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    let ni = n as i64;
    let cp = if with_pole {
        ConfluentHeunParams::new(r(ni), r(2), r(2), rat(5, 2), r(6 * ni - 2))?
    } else {
        ConfluentHeunParams::new(r(ni), r(2), r(0), rat(3, 2), r(6 * ni))?
    };
    // HC · factor = K_n'
    let factor = if with_pole {
        Poly::linear(r(-2 * ni), r(2 * ni))
    } else {
        Poly::constant(r(-2 * ni))
    };
    match kind {
        ModeKind::Exact => {
            let order = TAYLOR_ORDER;
            let lhs = (&factor * &confluent_series_exact(&cp, order)).truncate(order);
            Ok(vec![exact_route(
                "scaled confluent Heun series vs Taylor series of K_n'",
                &lhs,
                &kn_derivative_taylor(n, 1, order),
            )])
        }
        _ => {
            let k = |x: f64| kn_value(n, 0, x);
            Ok(vec![
                grid_route("confluent Heun series vs series K_n'", grid, tol, |x| {
                    Ok((hc(&cp, x)?, kn_value(n, 1, x)? / factor.eval_f64(x)))
                })?,
                grid_route(
                    "confluent Heun series vs finite-difference K_n'",
                    grid,
                    tol.max(FD_TOL),
                    |x| Ok((hc(&cp, x)?, central_difference(&k, x)? / factor.eval_f64(x))),
                )?,
            ])
        }
    }
}

fn get_j(params: &Params) -> Result<u32> {
    let j = params.get_u32("j")?;
    if j > MAX_J {
        return Err(Error::InvalidParams(format!(
            "derivative order j = {j} exceeds {MAX_J}"
        )));
    }
    Ok(j)
}

/// `HC(n, j+1, 0, (2j+1)/2, 2n(2j+1); x) = K_n^{(j)}(x) / K_n^{(j)}(0)`.
fn check_i48(params: &Params, kind: ModeKind, grid: &[f64], tol: f64) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    let j = get_j(params)?;
    let cp = kn_family(n, j)?;
    let k0 = kn_deriv_zero(n, j);
    match kind {
        ModeKind::Exact => {
            let order = TAYLOR_ORDER;
            let lhs = confluent_series_exact(&cp, order).scale(&k0);
            Ok(vec![exact_route(
                "scaled confluent Heun series vs Taylor series of K_n^(j)",
                &lhs,
                &kn_derivative_taylor(n, j, order),
            )])
        }
        _ => {
            let k0 = to_f64(&k0);
            Ok(vec![grid_route(
                "confluent Heun series vs K_n^(j)/K_n^(j)(0)",
                grid,
                tol,
                |x| Ok((hc(&cp, x)?, kn_value(n, j, x)? / k0)),
            )?])
        }
    }
}

/// `K_n^{(j)}(0)` in closed form vs `j!` times the Taylor coefficient.
fn check_i49(params: &Params) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    let j = params.get_u32("j")?;
    if n == 0 {
        return Err(Error::InvalidParams("needs n >= 1".into()));
    }
    let taylor = kn_taylor(n, j as usize + 1).coeff(j as usize)
        * Rational::from_integer(factorial(j as u64));
    Ok(vec![value_route(
        "closed form vs Cauchy-product Taylor coefficient",
        &kn_deriv_zero(n, j),
        &taylor,
    )])
}

/// `x u'' + (4nx + j + 1) u' + 2n(2j+1) u = 0` for `u = K_n^{(j)}` and for
/// the confluent Heun series, through the truncation order.
fn check_i410(params: &Params) -> Result<Vec<RouteReport>> {
    let n = params.get_u32("n")?;
    let j = get_j(params)?;
    let order = TAYLOR_ORDER;
    let k = kn_derivative_taylor(n, j, order);
    let h = confluent_series_exact(&kn_family(n, j)?, order);
    Ok(vec![
        zero_route(
            "residual on the Taylor series of K_n^(j)",
            &kn_equation_residual(n, j, &k).truncate(order - 1),
            order - 1,
        ),
        zero_route(
            "residual on the confluent Heun series",
            &kn_equation_residual(n, j, &h).truncate(order - 1),
            order - 1,
        ),
    ])
}

// ---- derivative formulas ----

/// Derivative formulas checked by [`derivative_ladder_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderFamily {
    /// `d/dx Hl(1/2, αβ/2; α, β; γ, γ) = (αβ/γ)(1-2x) Hl(1/2, (α+2)(β+2)/2; α+2, β+2; γ+1, γ+1)`.
    Heun311,
    /// `d/dx Hl(1/2, αβ/2; α, β; γ, γ) = (αβ/γ)(1-2x)^{2γ-α-β-1} Hl(1/2, (2γ-α)(2γ-β)/2; 2γ-α, 2γ-β; γ+1, γ+1)`.
    Heun312,
    /// `d/dx HC(p, γ, 0, α, σ) = -(σ/γ) HC(p, γ+1, 0, α+1, 4p(α+1))`, `σ = 4pα`.
    HC42,
    /// `d/dx HC(p, γ, 0, α, σ) = (σ/γ)(x-1) HC(p, γ+1, 2, α+2, 4p(α+1)-γ-1)`, `σ = 4pα`.
    HC43,
    /// `d/dx [K_n^{(j)}/K_n^{(j)}(0)] = (K_n^{(j+1)}(0)/K_n^{(j)}(0)) · K_n^{(j+1)}/K_n^{(j+1)}(0)`
    /// in confluent Heun form.
    HC48,
}

impl LadderFamily {
    fn identity(self) -> IdentityId {
        match self {
            LadderFamily::Heun311 | LadderFamily::Heun312 => IdentityId::I311_312,
            LadderFamily::HC42 => IdentityId::I42,
            LadderFamily::HC43 => IdentityId::I43,
            LadderFamily::HC48 => IdentityId::I48,
        }
    }

    fn label(self) -> &'static str {
        match self {
            LadderFamily::Heun311 => "shifted",
            LadderFamily::Heun312 => "reflected",
            LadderFamily::HC42 => "raised",
            LadderFamily::HC43 => "pole",
            LadderFamily::HC48 => "next order",
        }
    }
}

struct HeunLadder {
    lhs: HeunParams,
    factor: f64,
    shifted: HeunParams,
    reflected: HeunParams,
    reflected_power: f64,
}

impl HeunLadder {
    fn new(params: &Params) -> Result<Self> {
        let alpha = params.get("alpha")?.clone();
        let beta = params.get("beta")?.clone();
        let gamma = params.get("gamma")?.clone();
        let q = &alpha * &beta / r(2);
        if let Some(given) = params.get_opt("q") {
            if given != &q {
                return Err(Error::ConstraintViolated(format!(
                    "q = {} but the derivative formula needs q = aαβ = {}",
                    format_rational(given),
                    format_rational(&q)
                )));
            }
        }
        let lhs = HeunParams::new(
            half(),
            q,
            alpha.clone(),
            beta.clone(),
            gamma.clone(),
            gamma.clone(),
        )?;
        if !lhs.derivative_condition_holds() {
            return Err(Error::ConstraintViolated("q != aαβ".into()));
        }
        let g1 = &gamma + r(1);
        let (a2, b2) = (&alpha + r(2), &beta + r(2));
        let shifted = HeunParams::new(half(), &a2 * &b2 / r(2), a2, b2, g1.clone(), g1.clone())?;
        let (ar, br) = (&gamma * r(2) - &alpha, &gamma * r(2) - &beta);
        let reflected_power = to_f64(&(&gamma * r(2) - &alpha - &beta - r(1)));
        let reflected = HeunParams::new(half(), &ar * &br / r(2), ar, br, g1.clone(), g1)?;
        Ok(HeunLadder {
            lhs,
            factor: to_f64(&(&alpha * &beta / &gamma)),
            shifted,
            reflected,
            reflected_power,
        })
    }

    fn shifted(&self, x: f64) -> Result<f64> {
        Ok(self.factor * (1.0 - 2.0 * x) * hl(&self.shifted, x)?)
    }

    fn reflected(&self, x: f64) -> Result<f64> {
        Ok(self.factor * (1.0 - 2.0 * x).powf(self.reflected_power) * hl(&self.reflected, x)?)
    }
}

/// `(lhs, factor, rhs params, with (x-1))` for the confluent formulas.
fn confluent_ladder(
    family: LadderFamily,
    params: &Params,
) -> Result<(ConfluentHeunParams, f64, ConfluentHeunParams, bool)> {
    if family == LadderFamily::HC48 {
        let n = params.get_u32("n")?;
        let j = get_j(params)?;
        let ratio = kn_deriv_zero(n, j + 1) / kn_deriv_zero(n, j);
        return Ok((
            kn_family(n, j)?,
            to_f64(&ratio),
            kn_family(n, j + 1)?,
            false,
        ));
    }
    let p = params.get("p")?.clone();
    let gamma = params.get("gamma")?.clone();
    let alpha = params.get("alpha")?.clone();
    let sigma = r(4) * &p * &alpha;
    if let Some(d) = params.get_opt("delta") {
        if !d.is_zero() {
            return Err(Error::ConstraintViolated(format!(
                "delta = {} but the formula needs delta = 0",
                format_rational(d)
            )));
        }
    }
    if let Some(s) = params.get_opt("sigma") {
        if s != &sigma {
            return Err(Error::ConstraintViolated(format!(
                "sigma = {} but the formula needs sigma = 4pα = {}",
                format_rational(s),
                format_rational(&sigma)
            )));
        }
    }
    let lhs =
        ConfluentHeunParams::new(p.clone(), gamma.clone(), r(0), alpha.clone(), sigma.clone())?;
    let ratio = to_f64(&(&sigma / &gamma));
    let g1 = &gamma + r(1);
    let a1 = &alpha + r(1);
    Ok(match family {
        LadderFamily::HC42 => {
            let s1 = r(4) * &p * &a1;
            (
                lhs,
                -ratio,
                ConfluentHeunParams::new(p, g1, r(0), a1, s1)?,
                false,
            )
        }
        _ => {
            let s1 = r(4) * &p * &a1 - &gamma - r(1);
            (
                lhs,
                ratio,
                ConfluentHeunParams::new(p, g1, r(2), &alpha + r(2), s1)?,
                true,
            )
        }
    })
}

fn ladder_routes(
    family: LadderFamily,
    params: &Params,
    grid: &[f64],
    tol: f64,
) -> Result<Vec<RouteReport>> {
    let label = family.label();
    let fd_tol = tol.max(FD_TOL);
    match family {
        LadderFamily::Heun311 | LadderFamily::Heun312 => {
            let l = HeunLadder::new(params)?;
            let rhs = |x: f64| {
                if family == LadderFamily::Heun311 {
                    l.shifted(x)
                } else {
                    l.reflected(x)
                }
            };
            let f = |x: f64| hl(&l.lhs, x);
            Ok(vec![
                grid_route(
                    &format!("series derivative vs {label} right side"),
                    grid,
                    tol,
                    |x| {
                        Ok((
                            heun_local_derivative(&l.lhs, x, DEFAULT_TOL)?.value,
                            rhs(x)?,
                        ))
                    },
                )?,
                grid_route(
                    &format!("finite difference vs {label} right side"),
                    grid,
                    fd_tol,
                    |x| Ok((central_difference(&f, x)?, rhs(x)?)),
                )?,
            ])
        }
        _ => {
            let (lhs, factor, next, pole) = confluent_ladder(family, params)?;
            let rhs = |x: f64| -> Result<f64> {
                let scale = if pole { factor * (x - 1.0) } else { factor };
                Ok(scale * hc(&next, x)?)
            };
            let f = |x: f64| hc(&lhs, x);
            Ok(vec![
                grid_route(
                    &format!("series derivative vs {label} right side"),
                    grid,
                    tol,
                    |x| {
                        Ok((
                            confluent_heun_derivative(&lhs, x, DEFAULT_TOL)?.value,
                            rhs(x)?,
                        ))
                    },
                )?,
                grid_route(
                    &format!("finite difference vs {label} right side"),
                    grid,
                    fd_tol,
                    |x| Ok((central_difference(&f, x)?, rhs(x)?)),
                )?,
            ])
        }
    }
}

/// Compares the derivative of the left side of a derivative formula,
/// computed both by termwise series differentiation (tolerance `tol`) and by
/// central differences with step [`FD_STEP`] (tolerance `max(tol, FD_TOL)`),
/// against its right side on the grid.
///
/// Parameters: `alpha`, `beta`, `gamma` (and optionally `q`, which must equal
/// `αβ/2`) for the Heun families; `p`, `gamma`, `alpha` (optionally `delta = 0`
/// and `sigma = 4pα`) for [`LadderFamily::HC42`]/[`LadderFamily::HC43`];
/// `n`, `j` for [`LadderFamily::HC48`].
pub fn derivative_ladder_check(
    family: LadderFamily,
    params: &Params,
    grid: &[f64],
    tol: f64,
) -> Result<VerificationReport> {
    let routes = ladder_routes(family, params, grid, tol)?;
    Ok(VerificationReport::from_routes(
        family.identity(),
        params.clone(),
        CheckMode::NumericGrid {
            grid: grid.to_vec(),
            tol,
        },
        routes,
    ))
}
