use std::collections::BTreeMap;

use super::{ExactError, GammaQuotient, Phase, Rational, Series};

/// `Γ(arg + slope·t)^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopedFactor {
    pub arg: Rational,
    pub slope: Rational,
    pub exp: i64,
}

/// A gamma quotient whose arguments move linearly with a shift `t`.
///
/// Factors merge only when both argument and slope agree, so cancellations
/// are identities in `t`; evaluating the expansion at `t → 0` gives the
/// limit along the shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopedQuotient {
    prefactor: Rational,
    phase: Phase,
    factors: Vec<SlopedFactor>,
}

impl SlopedQuotient {
    pub fn new<I>(prefactor: Rational, phase: Phase, factors: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Rational, i64)>,
    {
        let mut merged: BTreeMap<(Rational, Rational), i64> = BTreeMap::new();
        for (arg, slope, exp) in factors {
            *merged.entry((arg, slope)).or_default() += exp;
        }
        let factors = merged
            .into_iter()
            .filter(|(_, e)| *e != 0)
            .map(|((arg, slope), exp)| SlopedFactor { arg, slope, exp })
            .collect();
        SlopedQuotient { prefactor, phase, factors }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    fn triples(&self) -> impl Iterator<Item = (Rational, Rational, i64)> + '_ {
        self.factors.iter().map(|g| (g.arg.clone(), g.slope.clone(), g.exp))
    }

    pub fn scale(&self, k: &Rational, phase: Phase) -> Self {
        SlopedQuotient {
            prefactor: &self.prefactor * k,
            phase: self.phase * phase,
            factors: self.factors.clone(),
        }
    }

    pub fn mul(&self, rhs: &SlopedQuotient) -> SlopedQuotient {
        SlopedQuotient::new(
            &self.prefactor * &rhs.prefactor,
            self.phase * rhs.phase,
            self.triples().chain(rhs.triples()),
        )
    }

    pub fn inverse(&self) -> Result<SlopedQuotient, ExactError> {
        Ok(SlopedQuotient::new(
            self.prefactor.recip()?,
            self.phase.inverse(),
            self.triples().map(|(a, s, e)| (a, s, -e)),
        ))
    }

    pub fn checked_div(&self, rhs: &SlopedQuotient) -> Result<SlopedQuotient, ExactError> {
        Ok(self.mul(&rhs.inverse()?))
    }

    /// The same quotient at `t = 0`, where equal arguments cancel
    /// regardless of slope.
    pub fn at_origin(&self) -> GammaQuotient {
        GammaQuotient::new(
            self.prefactor.clone(),
            self.phase,
            self.factors.iter().map(|g| (g.arg.clone(), g.exp)),
        )
    }

    /// Expansion in `t`, times the phase. Within each group of equal slope
    /// and argument class the exponents must cancel, leaving a product of
    /// linear factors `(x + slope·t)`.
    pub fn expand(&self) -> Result<(Series, Phase), ExactError> {
        let mut groups: BTreeMap<(Rational, Rational), Vec<&SlopedFactor>> = BTreeMap::new();
        for g in &self.factors {
            groups.entry((g.arg.fract(), g.slope.clone())).or_default().push(g);
        }
        let mut numer = Series::constant(self.prefactor.clone());
        let mut denom = Series::constant(Rational::one());
        for ((_, slope), members) in &groups {
            if members.iter().map(|g| g.exp).sum::<i64>() != 0 {
                return Err(ExactError::NonCommensurable { arg: members[0].arg.clone() });
            }
            let base = members.iter().map(|g| &g.arg).min().expect("nonempty group");
            for g in members {
                let shift = (&g.arg - base).to_i64().expect("integer-spaced class");
                let mut x = base.clone();
                for _ in 0..shift {
                    let linear = Series::linear(x.clone(), slope.clone());
                    if slope.is_zero() && x.is_zero() {
                        return Err(ExactError::Indeterminate);
                    }
                    let p = linear.powi(g.exp.abs())?;
                    if g.exp > 0 {
                        numer = numer * p;
                    } else {
                        denom = denom * p;
                    }
                    x += Rational::one();
                }
            }
        }
        Ok((numer.checked_div(&denom)?, self.phase))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, Limit, Phased, Reduced};

    #[test]
    fn same_slope_matches_formal_reduction() {
        // Γ(5/2 + t)/Γ(1/2 + t) → 3/4
        let s = SlopedQuotient::new(Rational::one(), Phase::ONE, [(q(5, 2), q(1, 1), 1), (q(1, 2), q(1, 1), -1)]);
        assert_eq!(s.expand().unwrap().0.limit(), Limit::Finite(q(3, 4)));
        assert_eq!(s.at_origin().reduce().unwrap(), Reduced::Finite(Phased::real(q(3, 4))));
    }

    #[test]
    fn opposite_slopes_at_a_pole() {
        // Γ(−1 + t/2)/Γ(−1 − t/2) → −1, while the formal quotient is 1
        let s = SlopedQuotient::new(Rational::one(), Phase::ONE, [(q(-1, 1), q(1, 2), 1), (q(-1, 1), q(-1, 2), -1)]);
        assert_eq!(s.at_origin().reduce().unwrap(), Reduced::Finite(Phased::one()));
        assert!(s.expand().is_err(), "different slopes are separate classes");
        let pair = SlopedQuotient::new(
            Rational::one(),
            Phase::ONE,
            [(q(-1, 1), q(1, 2), 1), (q(0, 1), q(1, 2), -1)],
        );
        // Γ(−1+t/2)/Γ(t/2) = 1/(−1 + t/2)
        assert_eq!(pair.expand().unwrap().0.limit(), Limit::Finite(q(-1, 1)));
    }

    #[test]
    fn pole_survives() {
        // Γ(t)/Γ(1 + t) = 1/t
        let s = SlopedQuotient::new(Rational::one(), Phase::ONE, [(q(0, 1), q(1, 1), 1), (q(1, 1), q(1, 1), -1)]);
        assert_eq!(s.expand().unwrap().0.limit(), Limit::Pole);
    }
}
