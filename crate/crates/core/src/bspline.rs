//! B-spline densities on equidistant knots and the kernel operator built from
//! them: for a width function `σ > 0`,
//!
//! ```text
//! W_n(x, t) = B_{n-1}(x - σ(x), x - σ(x) + 2σ(x)/n, …, x + σ(x); t)
//! L_n f(x)  = ∫ W_n(x, t) f(t) dt
//! ```
//!
//! `B_{m-1}` is normalized as a probability density (`∫ B = 1`). Everything
//! here is exact except [`apply_ln_fn`], which integrates arbitrary callables
//! with Gauss–Legendre on each polynomial piece.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, int, to_f64, PiecewisePoly, Poly, Rational};
use crate::specfun::quadrature::{gauss_legendre_nodes, QuadratureRule};

/// Knots `x_0 < x_1 < … < x_m` with equal spacing, `m >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotVector {
    points: Vec<Rational>,
}

impl KnotVector {
    pub fn new(points: Vec<Rational>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidKnots("need at least two knots".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidKnots(
                "knots must be strictly increasing".into(),
            ));
        }
        let h = &points[1] - &points[0];
        if points.windows(2).any(|w| &w[1] - &w[0] != h) {
            return Err(Error::InvalidKnots("knots must be equidistant".into()));
        }
        Ok(KnotVector { points })
    }

    /// `m + 1` equidistant knots from `start` to `end`.
    pub fn uniform(start: &Rational, end: &Rational, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidKnots("need at least one interval".into()));
        }
        let h = (end - start) / int(m as i64);
        Self::new((0..=m).map(|j| start + &h * int(j as i64)).collect())
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    /// Number of intervals `m`; the spline degree is `m - 1`.
    pub fn intervals(&self) -> usize {
        self.points.len() - 1
    }
}

/// Width function `σ(x)` of the kernel.
#[derive(Clone, Debug, PartialEq)]
pub enum SigmaSpec {
    Constant(Rational),
    /// `σ(x) = c + d x²`.
    Quadratic {
        c: Rational,
        d: Rational,
    },
    /// Piecewise-linear interpolation through `(xs[i], ys[i])`, held constant
    /// beyond the first and last abscissae.
    Table {
        xs: Vec<Rational>,
        ys: Vec<Rational>,
    },
}

impl SigmaSpec {
    pub fn table(xs: Vec<Rational>, ys: Vec<Rational>) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(Error::LengthMismatch(xs.len(), ys.len()));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(
                "table abscissae must be strictly increasing".into(),
            ));
        }
        Ok(SigmaSpec::Table { xs, ys })
    }

    fn raw(&self, x: &Rational) -> Rational {
        match self {
            SigmaSpec::Constant(c) => c.clone(),
            SigmaSpec::Quadratic { c, d } => c + d * x * x,
            SigmaSpec::Table { xs, ys } => {
                if x <= &xs[0] {
                    return ys[0].clone();
                }
                if x >= xs.last().unwrap() {
                    return ys.last().unwrap().clone();
                }
                let i = xs.partition_point(|v| v <= x) - 1;
                let w = (x - &xs[i]) / (&xs[i + 1] - &xs[i]);
                &ys[i] + w * (&ys[i + 1] - &ys[i])
            }
        }
    }

    /// `σ(x)`, failing with [`Error::NonpositiveWidth`] when `σ(x) <= 0`.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let v = self.raw(x);
        if !v.is_positive() {
            return Err(Error::NonpositiveWidth {
                x: format_rational(x),
                value: format_rational(&v),
            });
        }
        Ok(v)
    }
}

/// `W_n(x, ·)` at one center `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelInstance {
    pub n: u32,
    pub x: Rational,
    pub width: Rational,
    pub density: PiecewisePoly,
}

/// Degree-`(m-1)` B-spline on the knots, normalized to integrate to one.
///
/// Built by the Cox–de Boor recursion carried out on whole piecewise
/// polynomials: each basis function is a vector of `m` pieces, one per knot
/// interval, and every recursion step multiplies pieces by the two linear
/// blending factors.
pub fn bspline_density(knots: &KnotVector) -> PiecewisePoly {
    let x = knots.points();
    let m = knots.intervals();
    // basis[i][s]: piece of N_{i,p} on interval s
    let mut basis: Vec<Vec<Poly>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|s| if s == i { Poly::one() } else { Poly::zero() })
                .collect()
        })
        .collect();
    for p in 1..m {
        basis = (0..m - p)
            .map(|i| {
                let left = {
                    let d = &x[i + p] - &x[i];
                    Poly::linear(-&x[i] / &d, d.recip())
                };
                let right = {
                    let d = &x[i + p + 1] - &x[i + 1];
                    Poly::linear(&x[i + p + 1] / &d, -d.recip())
                };
                (0..m)
                    .map(|s| &(&left * &basis[i][s]) + &(&right * &basis[i + 1][s]))
                    .collect()
            })
            .collect();
    }
    // ∫ N_{0,m-1} = (x_m - x_0) / m
    let norm = int(m as i64) / (&x[m] - &x[0]);
    let pieces = basis
        .swap_remove(0)
        .into_iter()
        .map(|q| q.scale(&norm))
        .collect();
    PiecewisePoly::new(x.to_vec(), pieces).expect("knots are strictly increasing")
}

/// The kernel `W_n(x, ·)`: `n` equal subintervals of `[x - σ(x), x + σ(x)]`.
pub fn kernel(n: u32, sigma: &SigmaSpec, x: &Rational) -> Result<KernelInstance> {
    if n == 0 {
        return Err(Error::InvalidParams(
            "kernel order n must be positive".into(),
        ));
    }
    let width = sigma.eval(x)?;
    let knots = KnotVector::uniform(&(x - &width), &(x + &width), n as usize)?;
    Ok(KernelInstance {
        n,
        x: x.clone(),
        width,
        density: bspline_density(&knots),
    })
}

/// `c_n = σ(x) ∫ W_n(x, t)² dt`, evaluated at `σ = 1`, `x = 0`.
pub fn c_constant(n: u32) -> Rational {
    let k = kernel(
        n.max(1),
        &SigmaSpec::Constant(Rational::one()),
        &Rational::zero(),
    )
    .expect("unit width is positive");
    k.density.integrate_product(&k.density)
}

/// Exact `∫ t^order W(t) dt`.
pub fn kernel_moment(k: &KernelInstance, order: u32) -> Rational {
    k.density
        .integrate_against(&Poly::monomial(Rational::one(), order as usize))
}

/// Exact `L_n f(x)` for a polynomial `f`.
pub fn apply_ln(n: u32, sigma: &SigmaSpec, f: &Poly, x: &Rational) -> Result<Rational> {
    Ok(kernel(n, sigma, x)?.density.integrate_against(f))
}

/// `L_n f(x)` for an arbitrary callable, by `points`-node Gauss–Legendre on
/// each polynomial piece of the kernel.
pub fn apply_ln_fn<F: Fn(f64) -> f64>(
    n: u32,
    sigma: &SigmaSpec,
    f: F,
    x: &Rational,
    points: usize,
) -> Result<f64> {
    let k = kernel(n, sigma, x)?;
    let (nodes, weights) = gauss_legendre_nodes(points.max(2));
    let mut total = 0.0;
    for (w, piece) in k.density.breakpoints().windows(2).zip(k.density.pieces()) {
        let rule = QuadratureRule::gauss_legendre(nodes.len(), to_f64(&w[0]), to_f64(&w[1]))?;
        let (mid, half) = rule.midpoint_halfwidth();
        for (t, wt) in nodes.iter().zip(&weights) {
            let s = mid + half * t;
            let v = piece.eval_f64(s) * f(s);
            if !v.is_finite() {
                return Err(Error::NonFinite(s));
            }
            total += half * wt * v;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    /// Cox–de Boor pointwise evaluation in exact arithmetic; independent of
    /// the piecewise construction above.
    fn cox_de_boor_point(knots: &[Rational], i: usize, p: usize, t: &Rational) -> Rational {
        if p == 0 {
            let inside = &knots[i] <= t && t < &knots[i + 1];
            return if inside {
                Rational::one()
            } else {
                Rational::zero()
            };
        }
        let a = (t - &knots[i]) / (&knots[i + p] - &knots[i]);
        let b = (&knots[i + p + 1] - t) / (&knots[i + p + 1] - &knots[i + 1]);
        a * cox_de_boor_point(knots, i, p - 1, t) + b * cox_de_boor_point(knots, i + 1, p - 1, t)
    }

    #[test]
    fn density_examples() {
        let d = bspline_density(&KnotVector::new(vec![int(-1), int(1)]).unwrap());
        assert_eq!(d.pieces(), &[Poly::constant(rat(1, 2))]);

        let hat = bspline_density(&KnotVector::new(vec![int(-1), int(0), int(1)]).unwrap());
        assert_eq!(hat.eval(&int(0)), int(1));

        let knots = vec![int(0), rat(1, 3), rat(2, 3), int(1)];
        let q = bspline_density(&KnotVector::new(knots.clone()).unwrap());
        assert_eq!(q.eval(&rat(1, 2)), rat(9, 4));
        // oracle: 3 * N_{0,2}(1/2) with interval length 1
        assert_eq!(
            cox_de_boor_point(&knots, 0, 2, &rat(1, 2)) * int(3),
            rat(9, 4)
        );
    }

    #[test]
    fn density_matches_pointwise_recursion() {
        for m in 1..=6usize {
            let knots = KnotVector::uniform(&rat(-1, 2), &int(2), m).unwrap();
            let d = bspline_density(&knots);
            let scale = int(m as i64) / rat(5, 2);
            for s in 0..=40 {
                let t = rat(-1, 2) + rat(5 * s, 80);
                if t == int(2) {
                    continue;
                }
                let oracle = cox_de_boor_point(knots.points(), 0, m - 1, &t) * &scale;
                assert_eq!(d.eval(&t), oracle, "m={m} t={t}");
            }
        }
    }

    #[test]
    fn invalid_knots() {
        assert!(matches!(
            KnotVector::new(vec![int(0)]),
            Err(Error::InvalidKnots(_))
        ));
        assert!(matches!(
            KnotVector::new(vec![int(0), int(1), int(3)]),
            Err(Error::InvalidKnots(_))
        ));
        assert!(matches!(
            KnotVector::new(vec![int(1), int(0)]),
            Err(Error::InvalidKnots(_))
        ));
    }

    #[test]
    fn kernel_examples() {
        let one = SigmaSpec::Constant(int(1));
        let k1 = kernel(1, &one, &int(0)).unwrap();
        assert_eq!(k1.density.pieces(), &[Poly::constant(rat(1, 2))]);
        let k2 = kernel(2, &one, &int(3)).unwrap();
        assert_eq!(k2.density.support(), (&int(2), &int(4)));
        assert_eq!(k2.density.eval(&int(3)), int(1));
        let k3 = kernel(3, &one, &int(0)).unwrap();
        assert_eq!(k3.density.integrate_product(&k3.density), rat(33, 40));
    }

    #[test]
    fn nonpositive_width_is_rejected() {
        let bad = SigmaSpec::Quadratic {
            c: int(-1),
            d: int(1),
        };
        assert!(matches!(
            kernel(2, &bad, &int(0)),
            Err(Error::NonpositiveWidth { .. })
        ));
        assert!(kernel(2, &bad, &int(2)).is_ok());
        assert!(matches!(
            apply_ln(2, &SigmaSpec::Constant(int(0)), &Poly::one(), &int(0)),
            Err(Error::NonpositiveWidth { .. })
        ));
    }

    #[test]
    fn c_constants() {
        assert_eq!(c_constant(1), rat(1, 2));
        assert_eq!(c_constant(2), rat(2, 3));
        assert_eq!(c_constant(3), rat(33, 40));
    }

    #[test]
    fn moments() {
        let one = SigmaSpec::Constant(int(1));
        for n in 1..=5 {
            let k = kernel(n, &one, &rat(7, 3)).unwrap();
            assert_eq!(kernel_moment(&k, 0), int(1));
        }
        assert_eq!(kernel_moment(&kernel(2, &one, &int(5)).unwrap(), 1), int(5));
        assert_eq!(
            kernel_moment(&kernel(1, &one, &int(0)).unwrap(), 2),
            rat(1, 3)
        );
    }

    #[test]
    fn apply_ln_examples() {
        let e = |i| Poly::monomial(int(1), i);
        let one = SigmaSpec::Constant(int(1));
        assert_eq!(
            apply_ln(4, &SigmaSpec::Constant(rat(7, 3)), &e(0), &int(-1)).unwrap(),
            int(1)
        );
        assert_eq!(apply_ln(3, &one, &e(1), &rat(1, 4)).unwrap(), rat(1, 4));
        assert_eq!(
            apply_ln(1, &SigmaSpec::Constant(int(2)), &e(2), &int(0)).unwrap(),
            rat(4, 3)
        );
    }

    #[test]
    fn apply_ln_callable_matches_exact_on_polynomials() {
        let sigma = SigmaSpec::Quadratic {
            c: int(1),
            d: rat(1, 2),
        };
        let f = Poly::from_ints(&[1, -2, 0, 3]);
        for n in 1..=5 {
            let x = rat(3, 4);
            let exact = to_f64(&apply_ln(n, &sigma, &f, &x).unwrap());
            let approx = apply_ln_fn(n, &sigma, |t| f.eval_f64(t), &x, 8).unwrap();
            assert!((exact - approx).abs() < 1e-13, "n={n}: {exact} vs {approx}");
        }
        let v = apply_ln_fn(2, &SigmaSpec::Constant(int(1)), f64::cos, &int(0), 16).unwrap();
        // ∫_{-1}^{1} (1 - |t|) cos t dt = 2 (1 - cos 1)
        assert!((v - 2.0 * (1.0 - 1f64.cos())).abs() < 1e-14);
    }

    #[test]
    fn table_sigma() {
        let s = SigmaSpec::table(vec![int(0), int(2)], vec![int(1), int(3)]).unwrap();
        assert_eq!(s.eval(&int(1)).unwrap(), int(2));
        assert_eq!(s.eval(&int(-5)).unwrap(), int(1));
        assert_eq!(s.eval(&int(9)).unwrap(), int(3));
        assert!(SigmaSpec::table(vec![int(0)], vec![]).is_err());
        assert!(SigmaSpec::table(vec![int(1), int(0)], vec![int(1), int(1)]).is_err());
    }

    /// Bernstein coefficients of `p` on `[a, b]`; all nonnegative certifies
    /// `p >= 0` there.
    fn bernstein_coefficients(p: &Poly, a: &Rational, b: &Rational) -> Vec<Rational> {
        use crate::exactalg::binomial;
        let local = p.compose_affine(&(b - a), a);
        let d = local.coeffs().len().max(1) - 1;
        (0..=d)
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        local.coeff(i) * Rational::from_integer(binomial(k as u64, i as u64))
                            / Rational::from_integer(binomial(d as u64, i as u64))
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn densities_are_nonnegative() {
        for n in 1..=8 {
            let k = kernel(n, &SigmaSpec::Constant(rat(7, 3)), &rat(-1, 1)).unwrap();
            let bps = k.density.breakpoints();
            for (w, p) in bps.windows(2).zip(k.density.pieces()) {
                let bc = bernstein_coefficients(p, &w[0], &w[1]);
                assert!(bc.iter().all(|c| !c.is_negative()), "n={n}");
            }
        }
        for n in 4..=8 {
            let k = kernel(n, &SigmaSpec::Constant(int(1)), &int(0)).unwrap();
            for s in 0..=400 {
                let t = int(-1) + rat(s, 200);
                assert!(!k.density.eval(&t).is_negative(), "n={n} t={t}");
            }
        }
    }

    #[test]
    fn translation_covariance() {
        for n in 1..=6 {
            let sigma = SigmaSpec::Constant(rat(3, 2));
            let base = kernel(n, &sigma, &int(0)).unwrap();
            let x = rat(-7, 5);
            assert_eq!(
                kernel(n, &sigma, &x).unwrap().density,
                base.density.translate(&x)
            );
        }
    }
}
