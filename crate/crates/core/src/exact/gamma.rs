use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ExactError, Phase, Phased, Rational};

/// One factor `Γ(arg)^exp`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GammaFactor {
    pub arg: Rational,
    pub exp: i64,
}

/// `prefactor · i^phase · ∏ Γ(arg)^exp`, kept unevaluated.
///
/// Factors are merged by argument and sorted, so identical arguments cancel
/// formally as soon as two quotients are multiplied or divided.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaQuotient {
    prefactor: Rational,
    phase: Phase,
    factors: Vec<GammaFactor>,
}

/// Outcome of reducing a quotient whose factors pair up by integer shifts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Reduced {
    Finite(Phased),
    Pole,
    /// A vanishing prefactor multiplied by a pole.
    Indeterminate,
}

impl Reduced {
    pub fn finite(&self) -> Option<&Phased> {
        match self {
            Reduced::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Reduced::Finite(v) => v.to_string(),
            Reduced::Pole => "POLE".into(),
            Reduced::Indeterminate => "INDETERMINATE".into(),
        }
    }
}

impl fmt::Display for Reduced {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl GammaQuotient {
    pub fn new<I>(prefactor: Rational, phase: Phase, factors: I) -> Self
    where
        I: IntoIterator<Item = (Rational, i64)>,
    {
        let mut merged: BTreeMap<Rational, i64> = BTreeMap::new();
        for (arg, exp) in factors {
            *merged.entry(arg).or_insert(0) += exp;
        }
        let factors = merged
            .into_iter()
            .filter(|(_, e)| *e != 0)
            .map(|(arg, exp)| GammaFactor { arg, exp })
            .collect();
        GammaQuotient { prefactor, phase, factors }
    }

    pub fn constant(value: Phased) -> Self {
        GammaQuotient::new(value.value, value.phase, std::iter::empty())
    }

    /// A single `Γ(arg)`.
    pub fn gamma(arg: Rational) -> Self {
        GammaQuotient::new(Rational::one(), Phase::ONE, [(arg, 1)])
    }

    pub fn prefactor(&self) -> &Rational {
        &self.prefactor
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn factors(&self) -> &[GammaFactor] {
        &self.factors
    }

    pub fn scale(&self, k: &Rational, phase: Phase) -> Self {
        GammaQuotient {
            prefactor: &self.prefactor * k,
            phase: self.phase * phase,
            factors: self.factors.clone(),
        }
    }

    pub fn mul(&self, rhs: &GammaQuotient) -> GammaQuotient {
        GammaQuotient::new(
            &self.prefactor * &rhs.prefactor,
            self.phase * rhs.phase,
            self.pairs().chain(rhs.pairs()),
        )
    }

    pub fn inverse(&self) -> Result<GammaQuotient, ExactError> {
        Ok(GammaQuotient::new(
            self.prefactor.recip()?,
            self.phase.inverse(),
            self.factors.iter().map(|g| (g.arg.clone(), -g.exp)),
        ))
    }

    pub fn checked_div(&self, rhs: &GammaQuotient) -> Result<GammaQuotient, ExactError> {
        Ok(self.mul(&rhs.inverse()?))
    }

    fn pairs(&self) -> impl Iterator<Item = (Rational, i64)> + '_ {
        self.factors.iter().map(|g| (g.arg.clone(), g.exp))
    }

    /// Arguments of numerator factors sitting on a pole of Γ.
    pub fn pole_args(&self) -> Vec<Rational> {
        self.factors
            .iter()
            .filter(|g| g.exp > 0 && g.arg.is_nonpositive_integer())
            .map(|g| g.arg.clone())
            .collect()
    }

    /// Arguments of denominator factors sitting on a pole of Γ.
    pub fn zero_args(&self) -> Vec<Rational> {
        self.factors
            .iter()
            .filter(|g| g.exp < 0 && g.arg.is_nonpositive_integer())
            .map(|g| g.arg.clone())
            .collect()
    }

    pub fn has_pole_flag(&self) -> bool {
        !self.pole_args().is_empty()
    }

    pub fn has_zero_flag(&self) -> bool {
        !self.zero_args().is_empty()
    }

    /// Reduce by the functional equation, grouping arguments by residue mod 1.
    ///
    /// In each class every factor is rewritten as a Pochhammer product over
    /// the class minimum; the exponents must sum to zero. A linear factor that
    /// vanishes is counted instead of multiplied, and the class is a zero or a
    /// pole according to the sign of the net count.
    pub fn reduce(&self) -> Result<Reduced, ExactError> {
        let mut classes: BTreeMap<Rational, Vec<&GammaFactor>> = BTreeMap::new();
        for g in &self.factors {
            classes.entry(g.arg.fract()).or_default().push(g);
        }

        let mut numer = self.prefactor.clone();
        let mut denom = Rational::one();
        let mut zero = self.prefactor.is_zero();
        let mut pole = false;

        for members in classes.values() {
            let net: i64 = members.iter().map(|g| g.exp).sum();
            if net != 0 {
                return Err(ExactError::NonCommensurable {
                    arg: members[0].arg.clone(),
                });
            }
            // factors are sorted by argument, so the first one is the base
            let base = &members[0].arg;
            let mut vanishing = 0i64;
            for g in members {
                let shift = (&g.arg - base)
                    .to_i64()
                    .expect("arguments in one class differ by an integer");
                let mut x = base.clone();
                for _ in 0..shift {
                    if x.is_zero() {
                        vanishing += g.exp;
                    } else {
                        let p = x.pow(g.exp.unsigned_abs() as i32)?;
                        if g.exp > 0 {
                            numer *= p;
                        } else {
                            denom *= p;
                        }
                    }
                    x += Rational::one();
                }
            }
            match vanishing.signum() {
                1 => zero = true,
                -1 => pole = true,
                _ => {}
            }
        }

        Ok(match (zero, pole) {
            (true, true) => Reduced::Indeterminate,
            (false, true) => Reduced::Pole,
            (true, false) => Reduced::Finite(Phased::zero()),
            (false, false) => Reduced::Finite(Phased::new(numer.checked_div(&denom)?, self.phase)),
        })
    }

    /// Exact finite value; poles and indeterminate forms are errors.
    pub fn value(&self) -> Result<Phased, ExactError> {
        match self.reduce()? {
            Reduced::Finite(v) => Ok(v),
            Reduced::Pole => Err(ExactError::UncancelledPole {
                arg: self.pole_args().into_iter().next().unwrap_or_default(),
            }),
            Reduced::Indeterminate => Err(ExactError::Indeterminate),
        }
    }
}

/// Exact `a / b`.
pub fn ratio(a: &GammaQuotient, b: &GammaQuotient) -> Result<Phased, ExactError> {
    a.checked_div(b)?.value()
}

/// Exact `a / b` with pole and zero outcomes reported instead of raised.
pub fn ratio_reduced(a: &GammaQuotient, b: &GammaQuotient) -> Result<Reduced, ExactError> {
    a.checked_div(b)?.reduce()
}

impl fmt::Display for GammaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Phased::new(self.prefactor.clone(), self.phase))?;
        for g in &self.factors {
            write!(f, " G({})^{}", g.arg, g.exp)?;
        }
        Ok(())
    }
}

impl fmt::Debug for GammaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn g(arg: Rational) -> GammaQuotient {
        GammaQuotient::gamma(arg)
    }

    #[test]
    fn two_steps_of_the_functional_equation() {
        assert_eq!(ratio(&g(q(7, 2)), &g(q(3, 2))).unwrap(), Phased::real(q(15, 4)));
    }

    #[test]
    fn identical_poles_cancel_formally() {
        let a = g(q(-2, 1));
        assert!(a.has_pole_flag());
        assert_eq!(ratio(&a, &a).unwrap(), Phased::one());
    }

    #[test]
    fn shifted_poles_cancel_to_the_uniform_limit() {
        // Γ(-2+δ)/Γ(-3+δ) → -3
        assert_eq!(ratio(&g(q(-2, 1)), &g(q(-3, 1))).unwrap(), Phased::real(q(-3, 1)));
    }

    #[test]
    fn regular_over_pole_is_zero() {
        let r = ratio_reduced(&g(q(1, 1)), &g(q(-1, 1))).unwrap();
        assert_eq!(r, Reduced::Finite(Phased::zero()));
        let r = ratio_reduced(&g(q(-1, 1)), &g(q(1, 1))).unwrap();
        assert_eq!(r, Reduced::Pole);
        assert!(matches!(
            ratio(&g(q(-1, 1)), &g(q(1, 1))),
            Err(ExactError::UncancelledPole { .. })
        ));
    }

    #[test]
    fn zero_prefactor_against_a_pole_is_indeterminate() {
        let a = GammaQuotient::new(Rational::zero(), Phase::ONE, [(q(-1, 1), 1), (q(1, 1), -1)]);
        assert_eq!(a.reduce().unwrap(), Reduced::Indeterminate);
        let b = GammaQuotient::new(Rational::zero(), Phase::ONE, [(q(3, 2), 1), (q(1, 2), -1)]);
        assert_eq!(b.reduce().unwrap(), Reduced::Finite(Phased::zero()));
    }

    #[test]
    fn zeros_and_poles_net_out_within_a_class() {
        // Γ(1)Γ(-1) / (Γ(0)Γ(2)) = [Γ(1)/Γ(0)]·[Γ(-1)/Γ(2)] → δ · 1/((-1)δ(1))
        let a = GammaQuotient::new(
            Rational::one(),
            Phase::ONE,
            [(q(1, 1), 1), (q(-1, 1), 1), (q(0, 1), -1), (q(2, 1), -1)],
        );
        assert_eq!(a.reduce().unwrap(), Reduced::Finite(Phased::real(q(-1, 1))));
    }

    #[test]
    fn non_commensurable_arguments() {
        assert!(matches!(
            ratio(&g(q(1, 3)), &g(q(1, 2))),
            Err(ExactError::NonCommensurable { .. })
        ));
    }

    #[test]
    fn phase_and_prefactor_travel_through() {
        let a = GammaQuotient::new(q(-4, 1), Phase::I, [(q(5, 2), 1)]);
        let b = GammaQuotient::new(q(2, 1), Phase::ONE, [(q(3, 2), 1)]);
        assert_eq!(ratio(&a, &b).unwrap(), Phased::imaginary(q(-3, 1)));
    }

    #[test]
    fn serialization_shape() {
        let a = GammaQuotient::new(q(1, 2), Phase::I, [(q(3, 2), 1), (q(1, 2), -1)]);
        let v = serde_json::to_value(&a).unwrap();
        assert_eq!(v["prefactor"], "1/2");
        assert_eq!(v["phase"], 1);
        assert_eq!(v["factors"][0]["arg"], "1/2");
        assert_eq!(v["factors"][0]["exp"], -1);
        let back: GammaQuotient = serde_json::from_value(v).unwrap();
        assert_eq!(back, a);
    }
}
