use std::fmt;

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

const FLOAT_EQ: f64 = 1e-12;

/// A unimodular scalar `e^{2πi t}` stored by its number of turns `t`.
///
/// Rational turns stay exact under products and powers. A float phase
/// poisons exactness and is compared with an absolute tolerance of 1e-12.
#[derive(Clone, Copy, Debug)]
pub enum Phase {
    Turns(Ratio<i64>),
    Float(f64),
}

impl Phase {
    pub fn one() -> Self {
        Phase::Turns(Ratio::zero())
    }

    /// `e^{2πi num/den}`.
    pub fn rational(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidPhase("zero denominator".into()));
        }
        Ok(Phase::Turns(reduce(Ratio::new(num, den))))
    }

    pub fn from_turns(t: f64) -> Self {
        Phase::Float(t - t.floor())
    }

    pub fn turns(&self) -> f64 {
        match self {
            Phase::Turns(r) => *r.numer() as f64 / *r.denom() as f64,
            Phase::Float(t) => *t,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Phase::Turns(_))
    }

    pub fn is_one(&self) -> bool {
        match self {
            Phase::Turns(r) => r.is_zero(),
            Phase::Float(t) => dist(*t, 0.0) <= FLOAT_EQ,
        }
    }

    pub fn mul(self, other: Phase) -> Phase {
        match (self, other) {
            (Phase::Turns(a), Phase::Turns(b)) => Phase::Turns(reduce(a + b)),
            _ => Phase::from_turns(self.turns() + other.turns()),
        }
    }

    pub fn conj(self) -> Phase {
        match self {
            Phase::Turns(a) => Phase::Turns(reduce(-a)),
            Phase::Float(t) => Phase::from_turns(-t),
        }
    }

    pub fn pow(self, k: i64) -> Phase {
        match self {
            Phase::Turns(a) => Phase::Turns(reduce(a * Ratio::from_integer(k))),
            Phase::Float(t) => Phase::from_turns(t * k as f64),
        }
    }

    /// Principal `alpha`-th root: the argument is taken in `(-π, π]` and divided.
    pub fn principal_root(self, alpha: u64) -> Phase {
        assert!(alpha > 0);
        match self {
            Phase::Turns(a) => {
                let half = Ratio::new(1, 2);
                let centred = if a > half { a - Ratio::one() } else { a };
                Phase::Turns(reduce(centred / Ratio::from_integer(alpha as i64)))
            }
            Phase::Float(t) => {
                let centred = if t > 0.5 { t - 1.0 } else { t };
                Phase::from_turns(centred / alpha as f64)
            }
        }
    }

    pub fn approx_eq(&self, other: &Phase) -> bool {
        match (self, other) {
            (Phase::Turns(a), Phase::Turns(b)) => a == b,
            _ => dist(self.turns(), other.turns()) <= FLOAT_EQ,
        }
    }

    pub fn to_complex<T: Real>(&self) -> Complex<T> {
        match self {
            Phase::Turns(r) => {
                // exact values on the axes keep dense products exact
                let (n, d) = (*r.numer(), *r.denom());
                if n == 0 {
                    return Complex::new(T::one(), T::zero());
                }
                if d == 2 {
                    return Complex::new(-T::one(), T::zero());
                }
                if d == 4 {
                    let s = if n == 1 { T::one() } else { -T::one() };
                    return Complex::new(T::zero(), s);
                }
                let ang = T::of(std::f64::consts::TAU) * T::of(n as f64) / T::of(d as f64);
                Complex::new(num_traits::Float::cos(ang), num_traits::Float::sin(ang))
            }
            Phase::Float(t) => {
                let ang = T::of(std::f64::consts::TAU * t);
                Complex::new(num_traits::Float::cos(ang), num_traits::Float::sin(ang))
            }
        }
    }
}

impl PartialEq for Phase {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::one()
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Turns(r) if r.is_zero() => write!(f, "1"),
            Phase::Turns(r) => write!(f, "e(2πi·{}/{})", r.numer(), r.denom()),
            Phase::Float(t) => write!(f, "e(2πi·{t:.12})"),
        }
    }
}

fn reduce(r: Ratio<i64>) -> Ratio<i64> {
    let f = r.floor();
    r - f
}

fn dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// JSON form: `{"num": k, "den": n}` for exact rotations, `{"turns": t}` otherwise.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhaseDoc {
    Exact { num: i64, den: i64 },
    Float { turns: f64 },
}

impl From<Phase> for PhaseDoc {
    fn from(p: Phase) -> Self {
        match p {
            Phase::Turns(r) => PhaseDoc::Exact { num: *r.numer(), den: *r.denom() },
            Phase::Float(t) => PhaseDoc::Float { turns: t },
        }
    }
}

impl TryFrom<PhaseDoc> for Phase {
    type Error = Error;
    fn try_from(d: PhaseDoc) -> Result<Phase> {
        match d {
            PhaseDoc::Exact { num, den } => Phase::rational(num, den),
            PhaseDoc::Float { turns } if turns.is_finite() => Ok(Phase::from_turns(turns)),
            PhaseDoc::Float { .. } => Err(Error::InvalidPhase("non-finite turns".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_wraps() {
        let l = Phase::rational(1, 5).unwrap();
        assert!(l.pow(5).is_one());
        assert_eq!(l.mul(l.conj()), Phase::one());
        assert_eq!(l.pow(-1), l.conj());
    }

    #[test]
    fn principal_root_of_conjugate() {
        // conj(e^{2πi/5}) = e^{-2πi/5}; its square root is e^{-πi/5}
        let l = Phase::rational(1, 5).unwrap();
        let b = l.conj().principal_root(2);
        assert_eq!(b, Phase::rational(-1, 10).unwrap());
        assert_eq!(b.pow(2), l.conj());
        // -1 has argument π, so its square root is i
        assert_eq!(Phase::rational(1, 2).unwrap().principal_root(2), Phase::rational(1, 4).unwrap());
    }

    #[test]
    fn float_and_exact_compare() {
        let a = Phase::rational(1, 3).unwrap();
        let b = Phase::from_turns(1.0 / 3.0);
        assert_eq!(a, b);
        assert!(!b.is_exact());
        let z = a.to_complex::<f64>();
        assert!((z.norm() - 1.0).abs() < 1e-15);
    }
}
