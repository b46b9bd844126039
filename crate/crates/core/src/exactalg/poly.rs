use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{format_rational, int, to_f64, Rational};

/// Degree of a [`Poly`]. The zero polynomial has degree minus infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

/// Dense univariate polynomial with exact rational coefficients.
///
/// `coeffs[i]` multiplies `x^i`. The vector never ends in a zero, so the
/// zero polynomial is the empty vector and equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Poly {
            coeffs: vec![Rational::zero(), Rational::one()],
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^deg`.
    pub fn monomial(c: Rational, deg: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    /// `a + b x`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![a, b])
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation in binary floating point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `p(a x + b)`. With `a = 0` the result is the constant `p(b)`.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Poly {
        let inner = Poly::linear(b.clone(), a.clone());
        self.compose(&inner)
    }

    /// `p(q(x))` by Horner's scheme over polynomials.
    pub fn compose(&self, q: &Poly) -> Poly {
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, c| {
            &(&acc * q) + &Poly::constant(c.clone())
        })
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c / int(i as i64 + 1)),
        );
        Poly::new(coeffs)
    }

    /// `∫_a^b p(t) dt`.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// Largest absolute coefficient, as a double; zero for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    /// Coefficientwise truncation to degree `< n`.
    pub fn truncate(&self, n: usize) -> Poly {
        Poly::new(self.coeffs.iter().take(n).cloned().collect())
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, d) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += d;
        }
        Poly::new(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c = format_rational(c);
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use proptest::prelude::*;

    #[test]
    fn eval_examples() {
        assert_eq!(Poly::zero().eval(&int(7)), int(0));
        let f1 = Poly::from_ints(&[1, -2, 2]);
        assert_eq!(f1.eval(&rat(1, 4)), rat(5, 8));
        assert_eq!(Poly::monomial(int(1), 3).eval(&int(-2)), int(-8));
    }

    #[test]
    fn arithmetic_examples() {
        let p = Poly::from_ints(&[1, 1]);
        let q = Poly::from_ints(&[1, -1]);
        assert_eq!(&p * &q, Poly::from_ints(&[1, 0, -1]));

        let sq = Poly::monomial(int(1), 2);
        assert_eq!(
            sq.compose_affine(&int(2), &int(-1)),
            Poly::from_ints(&[1, -4, 4])
        );
        assert_eq!(sq.compose_affine(&int(0), &int(3)), Poly::constant(int(9)));

        let r = Poly::from_ints(&[3, 0, 5, 2]);
        assert!((&r + &r.scale(&int(-1))).is_zero());
        assert_eq!(r.scale(&int(0)), Poly::zero());
    }

    #[test]
    fn calculus_examples() {
        assert_eq!(
            Poly::monomial(int(1), 3).derivative(),
            Poly::monomial(int(3), 2)
        );
        assert_eq!(
            Poly::monomial(int(3), 2).antiderivative(),
            Poly::monomial(int(1), 3)
        );
        assert!(Poly::constant(int(5)).derivative().is_zero());
        assert!(Poly::zero().antiderivative().is_zero());
    }

    #[test]
    fn degree_of_zero_is_negative_infinity() {
        assert_eq!(Poly::zero().degree(), Degree::NegInfinity);
        assert_eq!(Poly::one().degree(), Degree::Finite(0));
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(
            Poly::new(vec![int(1), int(0), int(0)]).degree(),
            Degree::Finite(0)
        );
    }

    #[test]
    fn antiderivative_constant_cancels_under_derivative() {
        // D^k of any order-k antiderivative is independent of the constants chosen.
        let f = Poly::from_ints(&[2, -3, 7]);
        let anti = f.antiderivative().antiderivative();
        let shifted = &anti + &Poly::from_ints(&[11, -4]);
        assert_eq!(anti.derivative().derivative(), f);
        assert_eq!(shifted.derivative().derivative(), f);
    }

    #[test]
    fn pow_and_compose() {
        let p = Poly::from_ints(&[1, 1]);
        assert_eq!(p.pow(3), Poly::from_ints(&[1, 3, 3, 1]));
        assert_eq!(p.pow(0), Poly::one());
        let q = Poly::from_ints(&[0, 0, 1]);
        assert_eq!(p.compose(&q), Poly::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(Poly::zero().to_string(), "0");
        let p = Poly::new(vec![rat(1, 2), int(0), int(-3)]);
        assert_eq!(p.to_string(), "1/2 + (-3)x^2");
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(small_rat(), 0..6).prop_map(Poly::new)
    }

    proptest! {
        #[test]
        fn leibniz_rule(p in small_poly(), q in small_poly()) {
            let lhs = (&p * &q).derivative();
            let rhs = &(&p.derivative() * &q) + &(&p * &q.derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn compose_affine_matches_substitution(p in small_poly(), a in small_rat(), b in small_rat(), x in small_rat()) {
            let lhs = p.compose_affine(&a, &b).eval(&x);
            let rhs = p.eval(&(&a * &x + &b));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn antiderivative_inverts_derivative(p in small_poly()) {
            prop_assert_eq!(p.antiderivative().derivative(), p);
        }
    }
}
