use crate::exactalg::{int, Poly};

/// `P_n(x)` by the three-term recurrence `(k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}`.
pub fn legendre_p(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return 1.0;
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Exact `P_n` as a polynomial, by the same recurrence.
pub fn legendre_poly(n: u32) -> Poly {
    let mut prev = Poly::one();
    if n == 0 {
        return prev;
    }
    let mut cur = Poly::x();
    for k in 1..n as i64 {
        let next = &(&Poly::x() * &cur).scale(&int(2 * k + 1)) - &prev.scale(&int(k));
        prev = cur;
        cur = next.scale(&int(k + 1).recip());
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    #[test]
    fn low_orders() {
        assert_eq!(legendre_p(0, 0.3), 1.0);
        assert_eq!(legendre_poly(0), Poly::one());
        assert_eq!(
            legendre_poly(2),
            Poly::new(vec![rat(-1, 2), int(0), rat(3, 2)])
        );
    }

    #[test]
    fn normalized_at_one() {
        for n in 0..=10 {
            assert_eq!(legendre_poly(n).eval(&int(1)), int(1));
            assert!((legendre_p(n, 1.0) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn p3_at_half() {
        // (5x³ - 3x)/2 at 1/2
        assert_eq!(legendre_poly(3).eval(&rat(1, 2)), rat(-7, 16));
        assert!((legendre_p(3, 0.5) + 7.0 / 16.0).abs() < 1e-16);
    }

    #[test]
    fn float_matches_exact() {
        for n in 0..=12 {
            let p = legendre_poly(n);
            for &x in &[-0.9, -0.3, 0.0, 0.41, 0.77] {
                assert!((p.eval_f64(x) - legendre_p(n, x)).abs() < 1e-13);
            }
        }
    }
}
