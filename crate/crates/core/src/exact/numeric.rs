//! Floating-point evaluation of gamma quotients through log-gamma.
//!
//! Target accuracy is 1e-12 relative away from poles. This path shares no
//! code with the exact reduction and serves as its independent cross-check.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use super::{ExactError, GammaQuotient, Phase, Rational};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NumericValue {
    /// Even phase, folded into the sign.
    Real(f64),
    /// Odd phase: non-negative magnitude and exponent 1 or 3.
    Complex { magnitude: f64, phase: Phase },
}

impl NumericValue {
    /// Signed magnitude together with a phase exponent in {0, 1}.
    pub fn parts(self) -> (f64, Phase) {
        match self {
            NumericValue::Real(x) => (x, Phase::ONE),
            NumericValue::Complex { magnitude, phase } if phase == Phase::MINUS_I => {
                (-magnitude, Phase::I)
            }
            NumericValue::Complex { magnitude, phase } => (magnitude, phase),
        }
    }

    pub fn real(self) -> Option<f64> {
        match self {
            NumericValue::Real(x) => Some(x),
            NumericValue::Complex { .. } => None,
        }
    }
}

/// `ln|Γ(x)|` and the sign of `Γ(x)`, for `x` not a pole.
fn ln_gamma_signed(x: &Rational) -> (f64, f64) {
    let xf = x.to_f64();
    if x.is_positive() {
        return (ln_gamma(xf), 1.0);
    }
    // reflection: Γ(x)Γ(1-x) = π / sin(πx); reduce x mod 2 exactly first
    let turns = Rational::from_big((x * Rational::half()).floor(), 1.into()).expect("unit denominator");
    let t = (x - turns * 2).to_f64();
    let s = (PI * t).sin();
    let one_minus = (Rational::one() - x).to_f64();
    (PI.ln() - s.abs().ln() - ln_gamma(one_minus), s.signum())
}

pub fn evaluate_numeric(g: &GammaQuotient) -> Result<NumericValue, ExactError> {
    if let Some(arg) = g.pole_args().into_iter().next() {
        return Err(ExactError::PoleAt { arg });
    }
    let mut ln_abs = 0.0;
    let mut sign = g.prefactor().signum() as f64;
    let mut vanishes = g.prefactor().is_zero();
    for factor in g.factors() {
        if factor.arg.is_nonpositive_integer() {
            // negative exponent here (poles were rejected above): 1/Γ vanishes
            vanishes = true;
            continue;
        }
        let (l, s) = ln_gamma_signed(&factor.arg);
        ln_abs += factor.exp as f64 * l;
        if factor.exp % 2 != 0 {
            sign *= s;
        }
    }
    let magnitude = if vanishes {
        0.0
    } else {
        g.prefactor().abs().to_f64() * ln_abs.exp()
    };
    let phase = g.phase();
    Ok(if phase.is_real() {
        let s = if phase == Phase::MINUS_ONE { -sign } else { sign };
        NumericValue::Real(s * magnitude)
    } else if sign < 0.0 {
        NumericValue::Complex { magnitude, phase: phase * Phase::MINUS_ONE }
    } else {
        NumericValue::Complex { magnitude, phase }
    })
}
