use num_traits::Zero;

use super::{int, Poly, Rational};
use crate::error::{Error, Result};

/// Piecewise polynomial on `breakpoints[0] < … < breakpoints[m]`, zero outside.
///
/// `pieces[i]` is the polynomial on `[breakpoints[i], breakpoints[i+1])`; the
/// last piece also owns the final breakpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rational>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Poly>) -> Result<Self> {
        if breakpoints.len() < 2 || pieces.len() != breakpoints.len() - 1 {
            return Err(Error::InvalidParams(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                pieces.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(PiecewisePoly {
            breakpoints,
            pieces,
        })
    }

    /// A single polynomial restricted to `[a, b]`.
    pub fn on_interval(p: Poly, a: Rational, b: Rational) -> Result<Self> {
        Self::new(vec![a, b], vec![p])
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn support(&self) -> (&Rational, &Rational) {
        (&self.breakpoints[0], self.breakpoints.last().unwrap())
    }

    fn piece_index(&self, t: &Rational) -> Option<usize> {
        let (lo, hi) = self.support();
        if t < lo || t > hi {
            return None;
        }
        // first breakpoint strictly greater than t, minus one
        let idx = self.breakpoints.partition_point(|b| b <= t);
        Some(idx.saturating_sub(1).min(self.pieces.len() - 1))
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        match self.piece_index(t) {
            Some(i) => self.pieces[i].eval(t),
            None => Rational::zero(),
        }
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let lo = super::to_f64(self.support().0);
        let hi = super::to_f64(self.support().1);
        if !(lo..=hi).contains(&t) {
            return 0.0;
        }
        let idx = self
            .breakpoints
            .partition_point(|b| super::to_f64(b) <= t)
            .saturating_sub(1)
            .min(self.pieces.len() - 1);
        self.pieces[idx].eval_f64(t)
    }

    /// `∫ f`.
    pub fn integrate(&self) -> Rational {
        self.breakpoints
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, p)| p.integrate(&w[0], &w[1]))
            .sum()
    }

    /// `∫ p(t) f(t) dt` for a polynomial weight `p`.
    pub fn integrate_against(&self, p: &Poly) -> Rational {
        self.breakpoints
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, q)| (p * q).integrate(&w[0], &w[1]))
            .sum()
    }

    /// `f(t - shift)`: the same function translated right by `shift`.
    pub fn translate(&self, shift: &Rational) -> PiecewisePoly {
        let minus = -shift;
        PiecewisePoly {
            breakpoints: self.breakpoints.iter().map(|b| b + shift).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| p.compose_affine(&int(1), &minus))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> PiecewisePoly {
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(s)).collect(),
        }
    }

    /// Exact `∫ f g` over the merged breakpoint set; zero for disjoint supports.
    pub fn integrate_product(&self, other: &PiecewisePoly) -> Rational {
        let lo = self.support().0.max(other.support().0);
        let hi = self.support().1.min(other.support().1);
        if lo >= hi {
            return Rational::zero();
        }
        let mut cuts: Vec<Rational> = self
            .breakpoints
            .iter()
            .chain(&other.breakpoints)
            .filter(|b| *b >= lo && *b <= hi)
            .cloned()
            .collect();
        cuts.sort();
        cuts.dedup();
        let two = int(2);
        cuts.windows(2)
            .map(|w| {
                let mid = (&w[0] + &w[1]) / &two;
                let f = &self.pieces[self.piece_index(&mid).unwrap()];
                let g = &other.pieces[other.piece_index(&mid).unwrap()];
                (f * g).integrate(&w[0], &w[1])
            })
            .sum()
    }
}
