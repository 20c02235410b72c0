//! Truncated Laurent series in a shift parameter `t`, with precision
//! tracking, used to take exact limits `t → 0` through removable
//! singularities.

use std::ops::{Add, Mul, Neg, Sub};

use super::{ExactError, Rational};

/// Number of stored coefficients.
const TERMS: usize = 8;
/// Precision marker for values known to all orders.
const EXACT: i64 = i64::MAX / 4;

/// `t^val (c₀ + c₁t + …) + O(t^prec)` with `c₀ ≠ 0`; an empty coefficient
/// list means the value is zero up to `O(t^prec)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    val: i64,
    coeffs: Vec<Rational>,
    prec: i64,
}

/// Value at `t = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Finite(Rational),
    Pole,
    /// Cancellation exhausted the stored precision.
    Unknown,
}

impl Limit {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Limit::Finite(x) => Some(x),
            _ => None,
        }
    }
}

impl Series {
    fn build(val: i64, coeffs: Vec<Rational>, prec: i64) -> Series {
        let prec = prec.min(EXACT);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) if val + (k as i64) < prec => {
                let val = val + k as i64;
                let room = (prec - val).clamp(0, TERMS as i64) as usize;
                let mut coeffs: Vec<Rational> = coeffs.into_iter().skip(k).collect();
                let prec = if coeffs.len() > room { val + room as i64 } else { prec };
                coeffs.truncate(room);
                while coeffs.last().is_some_and(|c| c.is_zero()) && prec == EXACT {
                    coeffs.pop();
                }
                Series { val, coeffs, prec }
            }
            _ => Series { val: prec, coeffs: Vec::new(), prec },
        }
    }

    pub fn constant(c: Rational) -> Series {
        Series::build(0, vec![c], EXACT)
    }

    /// `c₀ + c₁ t`.
    pub fn linear(c0: Rational, c1: Rational) -> Series {
        Series::build(0, vec![c0, c1], EXACT)
    }

    /// The shift parameter itself.
    pub fn variable() -> Series {
        Series::linear(Rational::zero(), Rational::one())
    }

    fn coeff(&self, order: i64) -> Rational {
        let k = order - self.val;
        if k < 0 || k as usize >= self.coeffs.len() {
            Rational::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    fn known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest order with a known nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (!self.known_zero()).then_some(self.val)
    }

    pub fn limit(&self) -> Limit {
        if self.known_zero() {
            return if self.prec > 0 { Limit::Finite(Rational::zero()) } else { Limit::Unknown };
        }
        match self.val {
            v if v < 0 => Limit::Pole,
            0 => Limit::Finite(self.coeffs[0].clone()),
            _ => Limit::Finite(Rational::zero()),
        }
    }

    fn low(&self) -> i64 {
        if self.known_zero() {
            self.prec
        } else {
            self.val
        }
    }

    fn combine(&self, rhs: &Series, sign: i64) -> Series {
        let prec = self.prec.min(rhs.prec);
        let val = self.low().min(rhs.low());
        let top = prec.min(val + TERMS as i64);
        let coeffs = (val..top.max(val))
            .map(|o| {
                let b = rhs.coeff(o);
                self.coeff(o) + if sign > 0 { b } else { -b }
            })
            .collect();
        Series::build(val, coeffs, prec)
    }

    fn product(&self, rhs: &Series) -> Series {
        let prec = (self.low().saturating_add(rhs.prec)).min(rhs.low().saturating_add(self.prec));
        if self.known_zero() || rhs.known_zero() {
            return Series::build(prec, Vec::new(), prec);
        }
        let val = self.val + rhs.val;
        let len = TERMS.min((prec - val).clamp(0, TERMS as i64) as usize);
        let mut coeffs = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j < len {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Series::build(val, coeffs, prec)
    }

    fn reciprocal(&self) -> Result<Series, ExactError> {
        if self.known_zero() {
            return Err(ExactError::DivisionByZero);
        }
        // unit part u = c₀ + c₁t + … known to relative order rel
        let rel = (self.prec - self.val).min(EXACT);
        let len = TERMS.min(rel.clamp(0, TERMS as i64) as usize);
        let c0_inv = self.coeffs[0].recip()?;
        let mut inv = vec![Rational::zero(); len];
        if len > 0 {
            inv[0] = c0_inv.clone();
        }
        for k in 1..len {
            let mut acc = Rational::zero();
            for i in 1..=k {
                if i < self.coeffs.len() {
                    acc += &self.coeffs[i] * &inv[k - i];
                }
            }
            inv[k] = -(acc * &c0_inv);
        }
        let prec = if rel >= EXACT && self.coeffs.len() == 1 { EXACT } else { -self.val + rel.min(len as i64) };
        Ok(Series::build(-self.val, inv, prec))
    }

    pub fn checked_div(&self, rhs: &Series) -> Result<Series, ExactError> {
        Ok(self.product(&rhs.reciprocal()?))
    }

    pub fn powi(&self, exp: i64) -> Result<Series, ExactError> {
        let base = if exp < 0 { self.reciprocal()? } else { self.clone() };
        let mut out = Series::constant(Rational::one());
        for _ in 0..exp.unsigned_abs() {
            out = out.product(&base);
        }
        Ok(out)
    }
}

impl From<Rational> for Series {
    fn from(c: Rational) -> Series {
        Series::constant(c)
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        self.combine(&rhs, 1)
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        self.combine(&rhs, -1)
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        self.product(&rhs)
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        let coeffs = self.coeffs.into_iter().map(|c| -c).collect();
        Series { coeffs, ..self }
    }
}

/// Scalars the transition formulas can be written over: plain rationals
/// for lattice points, series for limits along a shift.
pub trait Field:
    Clone
    + From<Rational>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn try_div(&self, rhs: &Self) -> Result<Self, ExactError>;

    /// True when the value at the base point is zero.
    fn vanishes(&self) -> bool;
}

impl Field for Rational {
    fn try_div(&self, rhs: &Self) -> Result<Self, ExactError> {
        self.checked_div(rhs)
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

impl Field for Series {
    fn try_div(&self, rhs: &Self) -> Result<Self, ExactError> {
        self.checked_div(rhs)
    }

    fn vanishes(&self) -> bool {
        self.limit() == Limit::Finite(Rational::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn t() -> Series {
        Series::variable()
    }

    fn c(x: Rational) -> Series {
        Series::constant(x)
    }

    #[test]
    fn removable_singularity() {
        // (t² + 3t) / (2t) → 3/2
        let num = t() * t() + c(q(3, 1)) * t();
        let den = c(q(2, 1)) * t();
        assert_eq!(num.checked_div(&den).unwrap().limit(), Limit::Finite(q(3, 2)));
    }

    #[test]
    fn pole_and_zero() {
        let x = c(q(1, 1)).checked_div(&t()).unwrap();
        assert_eq!(x.limit(), Limit::Pole);
        assert_eq!((t() * c(q(5, 1))).limit(), Limit::Finite(Rational::zero()));
    }

    #[test]
    fn geometric_inverse() {
        // 1/(1 - t) = 1 + t + t² + …
        let x = c(q(1, 1)).checked_div(&Series::linear(q(1, 1), q(-1, 1))).unwrap();
        let back = x * Series::linear(q(1, 1), q(-1, 1));
        assert_eq!(back.limit(), Limit::Finite(q(1, 1)));
        assert_eq!(back.valuation(), Some(0));
    }

    #[test]
    fn exact_cancellation_is_zero() {
        let a = Series::linear(q(2, 3), q(5, 7));
        let z = a.clone() - a;
        assert_eq!(z.limit(), Limit::Finite(Rational::zero()));
        assert!(z.valuation().is_none());
    }

    #[test]
    fn precision_runs_out_honestly() {
        // (1/t^9)·(t^9 + t^10) truncated: the lead survives
        let mut p = c(q(1, 1));
        for _ in 0..9 {
            p = p * t();
        }
        let inv = c(q(1, 1)).checked_div(&p).unwrap();
        assert_eq!((inv.clone() * p.clone()).limit(), Limit::Finite(q(1, 1)));
        // a difference of two inverses that agree to every stored order
        let a = c(q(1, 1)).checked_div(&(p.clone() + p.clone() * t())).unwrap();
        let b = c(q(1, 1)).checked_div(&(p.clone() + p * t())).unwrap();
        let d = (a - b) * c(q(1, 1));
        assert!(matches!(d.limit(), Limit::Unknown | Limit::Finite(_)));
    }

    #[test]
    fn division_by_known_zero_fails() {
        let z = t() - t();
        assert!(c(q(1, 1)).checked_div(&z).is_err());
    }
}
