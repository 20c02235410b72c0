use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use super::{ExactError, Rational};

/// Formal power of the imaginary unit, exponent taken mod 4.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "i64")]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn new(exponent: i64) -> Self {
        Phase(exponent.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn inverse(self) -> Self {
        Phase::new(-(self.0 as i64))
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase::new(self.0 as i64 + rhs.0 as i64)
    }
}

impl From<Phase> for u8 {
    fn from(p: Phase) -> u8 {
        p.0
    }
}

impl TryFrom<i64> for Phase {
    type Error = String;
    fn try_from(v: i64) -> Result<Self, String> {
        Ok(Phase::new(v))
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i^{}", self.0)
    }
}

/// A rational times a power of the imaginary unit.
///
/// Canonical form keeps the exponent in `{0, 1}` by moving `i^2 = -1` into
/// the sign of the rational; zero always carries exponent 0.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phased {
    pub value: Rational,
    pub phase: Phase,
}

impl Phased {
    pub fn new(value: Rational, phase: Phase) -> Self {
        let (value, phase) = match phase.exponent() {
            _ if value.is_zero() => (value, Phase::ONE),
            2 => (-value, Phase::ONE),
            3 => (-value, Phase::I),
            _ => (value, phase),
        };
        Phased { value, phase }
    }

    pub fn real(value: Rational) -> Self {
        Phased::new(value, Phase::ONE)
    }

    pub fn imaginary(value: Rational) -> Self {
        Phased::new(value, Phase::I)
    }

    pub fn zero() -> Self {
        Phased::real(Rational::zero())
    }

    pub fn one() -> Self {
        Phased::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> Phased {
        Phased::new(&self.value * k, self.phase)
    }

    pub fn checked_div(&self, rhs: &Phased) -> Result<Phased, ExactError> {
        Ok(Phased::new(
            self.value.checked_div(&rhs.value)?,
            self.phase * rhs.phase.inverse(),
        ))
    }

    /// Sum of two values; fails when the phases are not aligned (a real plus
    /// an imaginary part has no single-phase representation).
    pub fn checked_add(&self, rhs: &Phased) -> Result<Phased, ExactError> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.phase != rhs.phase {
            return Err(ExactError::MixedPhase);
        }
        Ok(Phased::new(&self.value + &rhs.value, self.phase))
    }

    pub fn checked_sub(&self, rhs: &Phased) -> Result<Phased, ExactError> {
        self.checked_add(&-rhs.clone())
    }
}

impl Mul for &Phased {
    type Output = Phased;
    fn mul(self, rhs: &Phased) -> Phased {
        Phased::new(&self.value * &rhs.value, self.phase * rhs.phase)
    }
}

impl Mul for Phased {
    type Output = Phased;
    fn mul(self, rhs: Phased) -> Phased {
        &self * &rhs
    }
}

impl Neg for Phased {
    type Output = Phased;
    fn neg(self) -> Phased {
        Phased::new(-self.value, self.phase)
    }
}

impl fmt::Display for Phased {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase.exponent() {
            0 => write!(f, "{}", self.value),
            _ => write!(f, "{}*i", self.value),
        }
    }
}

impl fmt::Debug for Phased {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn phase_arithmetic_is_mod_four() {
        assert_eq!(Phase::I * Phase::I, Phase::MINUS_ONE);
        assert_eq!(Phase::new(-1), Phase::MINUS_I);
        assert_eq!(Phase::MINUS_I.inverse(), Phase::I);
    }

    #[test]
    fn canonical_form_folds_sign() {
        let x = Phased::new(q(3, 2), Phase::MINUS_ONE);
        assert_eq!(x, Phased::real(q(-3, 2)));
        let y = Phased::new(q(1, 3), Phase::MINUS_I);
        assert_eq!(y, Phased::imaginary(q(-1, 3)));
        assert_eq!(Phased::new(Rational::zero(), Phase::I).phase, Phase::ONE);
    }

    #[test]
    fn imaginary_square_is_negative_real() {
        let x = Phased::imaginary(q(2, 1));
        assert_eq!(&x * &x, Phased::real(q(-4, 1)));
    }

    #[test]
    fn mixed_phase_sum_is_rejected() {
        let a = Phased::real(q(1, 1));
        let b = Phased::imaginary(q(1, 1));
        assert!(a.checked_add(&b).is_err());
    }
}
