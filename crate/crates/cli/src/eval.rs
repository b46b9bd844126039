//! The `eval` command: one function at one point or on a grid.

use std::str::FromStr;

use heunent::bspline::{c_constant, kernel, SigmaSpec};
use heunent::exactalg::{to_f64, Rational};
use heunent::identities::Params;
use heunent::specfun::{
    confluent_heun, confluent_polynomial, f_poly, heun_local, heun_polynomial, hyp2f1_poly,
    hyp2f1_real, kernel_sum, kn_deriv_zero, legendre_p, legendre_poly, szasz_k, u_exact,
    ConfluentHeunParams, HeunParams, KernelSumKind,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Function {
    Hl,
    Hc,
    Hyp2f1,
    Legendre,
    F,
    G,
    U,
    J,
    K,
    Bspline,
    Cn,
    KnDerivZero,
}

impl FromStr for Function {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "hl" => Function::Hl,
            "hc" => Function::Hc,
            "2f1" => Function::Hyp2f1,
            "legendre" => Function::Legendre,
            "F" => Function::F,
            "G" => Function::G,
            "U" => Function::U,
            "J" => Function::J,
            "K" => Function::K,
            "bspline" => Function::Bspline,
            "c_n" => Function::Cn,
            "kn_deriv_zero" => Function::KnDerivZero,
            _ => {
                return Err(format!(
                    "unknown function `{s}` (expected hl, hc, 2f1, legendre, F, G, U, J, K, bspline, c_n, kn_deriv_zero)"
                ))
            }
        })
    }
}

impl Function {
    /// Required and optional parameter names, without the variable `x`.
    fn keys(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Function::Hl => (&["a", "q", "alpha", "beta", "gamma", "delta"], &[]),
            Function::Hc => (&["p", "gamma", "delta", "alpha", "sigma"], &[]),
            Function::Hyp2f1 => (&["a", "b", "c"], &[]),
            Function::Legendre | Function::F | Function::G | Function::U | Function::J => {
                (&["n"], &[])
            }
            Function::K => (&["n"], &["j"]),
            Function::Bspline => (&["n"], &["center"]),
            Function::Cn => (&["n"], &[]),
            Function::KnDerivZero => (&["n", "j"], &[]),
        }
    }

    /// Whether the function takes the variable `x`.
    pub fn has_variable(self) -> bool {
        !matches!(self, Function::Cn | Function::KnDerivZero)
    }

    pub fn validate(self, params: &Params) -> Result<(), String> {
        let (required, optional) = self.keys();
        let mut allowed: Vec<&str> = required.iter().chain(optional).copied().collect();
        if self.has_variable() {
            allowed.push("x");
        }
        crate::args::check_keys(params, &allowed, "this function")?;
        for k in required {
            params.get(k).map_err(|e| e.to_string())?;
        }
        Ok(())
    }
}

fn u32_param(p: &Params, key: &str) -> Result<u32, String> {
    p.get_u32(key).map_err(|e| e.to_string())
}

fn rat_param(p: &Params, key: &str) -> Result<Rational, String> {
    p.get(key).cloned().map_err(|e| e.to_string())
}

fn heun_params(p: &Params) -> Result<HeunParams, String> {
    let r = |k| rat_param(p, k);
    HeunParams::new(
        r("a")?,
        r("q")?,
        r("alpha")?,
        r("beta")?,
        r("gamma")?,
        r("delta")?,
    )
    .map_err(|e| e.to_string())
}

fn confluent_params(p: &Params) -> Result<ConfluentHeunParams, String> {
    let r = |k| rat_param(p, k);
    ConfluentHeunParams::new(r("p")?, r("gamma")?, r("delta")?, r("alpha")?, r("sigma")?)
        .map_err(|e| e.to_string())
}

fn center(p: &Params) -> Rational {
    p.get_opt("center").cloned().unwrap_or_default()
}

/// Exact value; fails for functions that are not rational-valued at rational points.
pub fn eval_exact(
    f: Function,
    p: &Params,
    x: Option<&Rational>,
    sigma: &SigmaSpec,
) -> Result<Rational, String> {
    let xv = || x.ok_or_else(|| "missing x".to_string());
    let not_exact = |why: &str| Err(format!("--exact is not available here: {why}"));
    match f {
        Function::Cn => Ok(c_constant(u32_param(p, "n")?)),
        Function::KnDerivZero => Ok(kn_deriv_zero(u32_param(p, "n")?, u32_param(p, "j")?)),
        Function::F => Ok(f_poly(u32_param(p, "n")?).eval(xv()?)),
        Function::U => u_exact(u32_param(p, "n")?, xv()?).map_err(|e| e.to_string()),
        Function::Legendre => Ok(legendre_poly(u32_param(p, "n")?).eval(xv()?)),
        Function::Hyp2f1 => {
            let poly = hyp2f1_poly(
                &rat_param(p, "a")?,
                &rat_param(p, "b")?,
                &rat_param(p, "c")?,
            )
            .map_err(|e| e.to_string())?;
            Ok(poly.eval(xv()?))
        }
        Function::Hl => match heun_polynomial(&heun_params(p)?) {
            Some(poly) => Ok(poly.eval(xv()?)),
            None => not_exact("the Heun series does not terminate"),
        },
        Function::Hc => match confluent_polynomial(&confluent_params(p)?) {
            Some(poly) => Ok(poly.eval(xv()?)),
            None => not_exact("the confluent Heun series does not terminate"),
        },
        Function::Bspline => {
            let k = kernel(u32_param(p, "n")?, sigma, &center(p)).map_err(|e| e.to_string())?;
            Ok(k.density.eval(xv()?))
        }
        Function::G | Function::J => not_exact("the sum is an infinite series"),
        Function::K => not_exact("K_n is transcendental"),
    }
}

pub fn eval_float(
    f: Function,
    p: &Params,
    x: Option<&Rational>,
    sigma: &SigmaSpec,
    tol: f64,
) -> Result<f64, String> {
    let xf = || x.map(to_f64).ok_or_else(|| "missing x".to_string());
    let series = |kind| -> Result<f64, String> {
        kernel_sum(kind, u32_param(p, "n")?, xf()?, tol)
            .map(|r| r.value)
            .map_err(|e| e.to_string())
    };
    match f {
        Function::Cn | Function::KnDerivZero | Function::Bspline | Function::U => {
            eval_exact(f, p, x, sigma).map(|v| to_f64(&v))
        }
        Function::F => series(KernelSumKind::F),
        Function::G => series(KernelSumKind::G),
        Function::J => series(KernelSumKind::J),
        Function::Legendre => Ok(legendre_p(u32_param(p, "n")?, xf()?)),
        Function::Hyp2f1 => {
            let r = |k| rat_param(p, k).map(|v| to_f64(&v));
            hyp2f1_real(r("a")?, r("b")?, r("c")?, xf()?, tol)
                .map(|s| s.value)
                .map_err(|e| e.to_string())
        }
        Function::Hl => heun_local(&heun_params(p)?, xf()?, tol)
            .map(|s| s.value)
            .map_err(|e| e.to_string()),
        Function::Hc => confluent_heun(&confluent_params(p)?, xf()?, tol)
            .map(|s| s.value)
            .map_err(|e| e.to_string()),
        Function::K => {
            let j = match p.get_opt("j") {
                Some(_) => u32_param(p, "j")?,
                None => 0,
            };
            szasz_k(u32_param(p, "n")?, j, xf()?, tol).map_err(|e| e.to_string())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use heunent::exactalg::{int, rat};

    fn params(s: &str) -> Params {
        Params::parse(s).unwrap()
    }

    fn unit() -> SigmaSpec {
        SigmaSpec::Constant(int(1))
    }

    #[test]
    fn exact_examples() {
        assert_eq!(
            eval_exact(Function::Cn, &params("n=3"), None, &unit()).unwrap(),
            rat(33, 40)
        );
        let x = rat(1, 4);
        assert_eq!(
            eval_exact(Function::F, &params("n=1"), Some(&x), &unit()).unwrap(),
            rat(5, 8)
        );
        assert!(eval_exact(Function::K, &params("n=1"), Some(&x), &unit()).is_err());
    }

    #[test]
    fn float_matches_exact_where_both_exist() {
        let x = rat(3, 10);
        for (f, p) in [
            (Function::F, "n=4"),
            (Function::Legendre, "n=5"),
            (Function::Hyp2f1, "a=-3,b=4,c=1"),
            (Function::Hl, "a=1/2,q=-3,alpha=-6,beta=1,gamma=1,delta=1"),
        ] {
            let e = to_f64(&eval_exact(f, &params(p), Some(&x), &unit()).unwrap());
            let v = eval_float(f, &params(p), Some(&x), &unit(), 1e-16).unwrap();
            assert!((e - v).abs() <= 1e-13 * e.abs().max(1.0), "{f:?}");
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(Function::F.validate(&params("n=1,m=2")).is_err());
        assert!(Function::Cn.validate(&params("n=1,x=2")).is_err());
        assert!(Function::Hl.validate(&params("a=2")).is_err());
        assert!(Function::K.validate(&params("n=1,j=2,x=1")).is_ok());
    }
}
