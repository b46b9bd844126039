//! Cross-module properties through the public API.

use heunent::bspline::{apply_ln, SigmaSpec};
use heunent::entropy::{entropy_profile, s_nk_exact, OperatorSpec, SMethod};
use heunent::exactalg::{from_f64, int, rat, to_f64, Poly};
use heunent::specfun::{
    confluent_heun, confluent_heun_derivative, confluent_series_exact, f_poly, heun_local,
    kernel_sum, szasz_k, ConfluentHeunParams, HeunParams, KernelSumKind, DEFAULT_TOL,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn f_is_a_heun_polynomial(n in 0u32..=8, x in -0.45f64..0.45) {
        let hp = HeunParams::new(rat(1, 2), -int(n as i64), -int(2 * n as i64), int(1), int(1), int(1)).unwrap();
        let h = heun_local(&hp, x, DEFAULT_TOL).unwrap().value;
        let f = f_poly(n).eval_f64(x);
        prop_assert!((h - f).abs() <= 1e-13 * f.abs().max(1.0));
    }

    #[test]
    fn float_sum_matches_exact_polynomial(n in 0u32..=8, x in 0.0f64..1.0) {
        let direct = kernel_sum(KernelSumKind::F, n, x, DEFAULT_TOL).unwrap().value;
        let exact = to_f64(&f_poly(n).eval(&from_f64(x).unwrap()));
        prop_assert!((direct - exact).abs() <= 1e-14 * exact);
    }

    #[test]
    fn s2_symmetric_about_half(n in 2u32..=7, num in 0i64..=32) {
        let x = rat(num, 32);
        let mirror = int(1) - &x;
        let a = s_nk_exact(n, 2, &x, SMethod::SumForm).unwrap();
        let b = s_nk_exact(n, 2, &mirror, SMethod::SumForm).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a, s_nk_exact(n, 2, &x, SMethod::Direct).unwrap());
    }

    #[test]
    fn bspline_operator_reproduces_lines(n in 1u32..=6, c in 1i64..=5, d in 0i64..=3, num in -8i64..=8) {
        let sigma = SigmaSpec::Quadratic { c: rat(c, 2), d: int(d) };
        let x = rat(num, 4);
        let line = Poly::linear(rat(3, 7), rat(-2, 5));
        prop_assert_eq!(apply_ln(n, &sigma, &line, &x).unwrap(), line.eval(&x));
    }

    /// `HC(p,γ,δ,α,σ;x) = e^{-4px} HC(-p,γ,δ,γ+δ-α,σ-4pγ;x)` is used for
    /// `px > 0`; compare with the exact Taylor polynomial.
    #[test]
    fn confluent_series_matches_taylor_polynomial(
        p in 1i64..=6,
        g in 1i64..=6,
        a in 1i64..=8,
        d in 0i64..=2,
        shift in -3i64..=3,
        xn in 2i64..=24,
    ) {
        // σ = 4pα + shift with p/2 and α/2
        let cp = ConfluentHeunParams::new(rat(p, 2), int(g), int(d), rat(a, 2), int(p * a + shift)).unwrap();
        let s = confluent_series_exact(&cp, 90);
        let xr = rat(xn, 40);
        let x = to_f64(&xr);
        let want = to_f64(&s.eval(&xr));
        let dwant = to_f64(&s.derivative().eval(&xr));
        let v = confluent_heun(&cp, x, DEFAULT_TOL).unwrap().value;
        let dv = confluent_heun_derivative(&cp, x, DEFAULT_TOL).unwrap().value;
        prop_assert!((v - want).abs() <= 1e-13 * want.abs().max(1.0));
        prop_assert!((dv - dwant).abs() <= 1e-12 * dwant.abs().max(1.0));
    }
}

#[test]
fn szasz_k_is_confluent_heun() {
    for n in 1..=3u32 {
        let cp =
            ConfluentHeunParams::new(int(n as i64), int(1), int(0), rat(1, 2), int(2 * n as i64))
                .unwrap();
        for x in [0.1, 0.7, 1.5, 3.0] {
            let k = szasz_k(n, 0, x, DEFAULT_TOL).unwrap();
            let hc = confluent_heun(&cp, x, DEFAULT_TOL).unwrap().value;
            assert!((k - hc).abs() <= 1e-13 * k, "n={n} x={x}");
        }
    }
}

#[test]
fn entropies_follow_the_squared_integral() {
    let xs: Vec<_> = (0..=8).map(|i| rat(i, 8)).collect();
    let ops = [
        OperatorSpec::Kantorovich { n: 5, k: 2 },
        OperatorSpec::Kantorovich { n: 4, k: 0 },
        OperatorSpec::Kantorovich { n: 4, k: 3 },
        OperatorSpec::BSpline {
            n: 3,
            sigma: SigmaSpec::Quadratic {
                c: int(1),
                d: int(1),
            },
        },
    ];
    for op in &ops {
        for p in entropy_profile(op, &xs).unwrap() {
            assert!((p.renyi + p.squared_kernel_integral.ln()).abs() < 1e-15);
            assert!((p.tsallis - (1.0 - p.squared_kernel_integral)).abs() < 1e-15);
            assert!(p.variance >= 0.0);
        }
    }
}
