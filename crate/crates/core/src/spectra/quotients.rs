use std::fmt;

use serde::Serialize;

use crate::exact::{q, ExactError, GammaQuotient, Phase, Phased, Rational, Reduced, Series};
use crate::ktypes::{neighbors, Column, Direction, KType, Row, Sign};
use crate::{Fidelity, Model, Mutation};

/// A closed-form quotient of products of linear factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientEntry {
    pub numerator: Vec<Rational>,
    pub denominator: Vec<Rational>,
    /// Added to a finite value; zero unless a mutation is active.
    #[serde(skip)]
    pub offset: Rational,
}

impl QuotientEntry {
    pub fn new(numerator: Vec<Rational>, denominator: Vec<Rational>) -> Self {
        QuotientEntry { numerator, denominator, offset: Rational::zero() }
    }

    /// Each factor `L` written as `2 Γ(L/2 + 1) / Γ(L/2)`, so poles and zeros
    /// are flagged by the same rules as the spectral function.
    pub fn to_gamma(&self) -> GammaQuotient {
        let mut factors = Vec::new();
        for (list, sign) in [(&self.numerator, 1), (&self.denominator, -1)] {
            for l in list {
                let h = l * q(1, 2);
                factors.push((&h + 1, sign));
                factors.push((h, -sign));
            }
        }
        let scale = self.numerator.len() as i32 - self.denominator.len() as i32;
        let prefactor = Rational::from_integer(2).pow(scale).expect("nonzero base");
        GammaQuotient::new(prefactor, Phase::ONE, factors)
    }

    /// The entry with every linear factor moving as `L + slope·t`.
    pub fn series(&self, slope: &Rational) -> Result<Series, ExactError> {
        let product = |list: &[Rational]| {
            list.iter()
                .fold(Series::from(Rational::one()), |acc, l| acc * Series::linear(l.clone(), slope.clone()))
        };
        let value = product(&self.numerator).checked_div(&product(&self.denominator))?;
        Ok(value + Series::from(self.offset.clone()))
    }

    pub fn reduce(&self) -> Reduced {
        if self.denominator.iter().chain(&self.numerator).all(|l| !l.is_zero()) {
            let product = |list: &[Rational]| list.iter().fold(Rational::one(), |acc, l| acc * l);
            let value = product(&self.numerator).checked_div(&product(&self.denominator)).expect("no zero factor");
            return Reduced::Finite(Phased::real(value + &self.offset));
        }
        let reduced = self
            .to_gamma()
            .reduce()
            .expect("linear-factor quotients are always commensurable");
        match reduced {
            Reduced::Finite(v) if !self.offset.is_zero() => {
                Reduced::Finite(Phased::real(v.value + &self.offset))
            }
            other => other,
        }
    }
}

impl fmt::Display for QuotientEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| {
            v.iter().map(|x| format!("({x})")).collect::<Vec<_>>().join("")
        };
        write!(f, "{}/{}", join(&self.numerator), join(&self.denominator))
    }
}

/// The 3×2 layout of quotients around a center; rows j+1, j, j−1 and
/// columns f−1, f+1. Entries are `B(neighbor) / B(center)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientMatrix {
    pub center: KType,
    pub entries: Vec<(Direction, QuotientEntry)>,
    pub absent: Vec<Direction>,
}

impl QuotientMatrix {
    pub fn get(&self, direction: Direction) -> Option<&QuotientEntry> {
        self.entries.iter().find(|(d, _)| *d == direction).map(|(_, e)| e)
    }
}

/// Case 3 entry for direction `d` at labels `(f, J, Ξε)`.
pub fn mult1_entry(r: &Rational, f: &Rational, big_j: &Rational, xi_eps: Sign, d: Direction) -> QuotientEntry {
    let s = xi_eps.rational();
    let hs = &s * q(1, 2);
    let sj = &s * big_j;
    let h = Rational::half();
    let (num, den) = match (d.row, d.column) {
        (Row::Top, Column::Left) => (-f + big_j + 1 + r + &hs, -f + big_j + 1 - r - &hs),
        (Row::Top, Column::Right) => (f + big_j + 1 + r - &hs, f + big_j + 1 - r + &hs),
        (Row::Middle, Column::Left) => (-f + &h + r - &sj, -f + &h - r + &sj),
        (Row::Middle, Column::Right) => (f + &h + r + &sj, f + &h - r - &sj),
        (Row::Bottom, Column::Left) => (-f - big_j + 1 + r - &hs, -f - big_j + 1 - r + &hs),
        (Row::Bottom, Column::Right) => (f - big_j + 1 + r + &hs, f - big_j + 1 - r - &hs),
    };
    QuotientEntry::new(vec![num], vec![den])
}

/// Determinant quotient for direction `d` at labels `(f, J, Ξ, Ξε)`.
pub fn mult2_entry(
    r: &Rational,
    f: &Rational,
    big_j: &Rational,
    xi: Sign,
    xi_eps: Sign,
    d: Direction,
    fidelity: Fidelity,
) -> QuotientEntry {
    let x = xi.rational();
    let s = xi_eps.rational();
    let hs = &s * q(1, 2);
    let sj = &s * big_j;
    let h = Rational::half();
    // (base + shift ± r ∓ tail) with shift ∈ {1−Ξ, 1+Ξ} around the unit offset
    let pair = |base: Rational, tail: Rational| {
        let lo = &base - &x;
        let hi = &base + &x;
        (
            vec![&lo + r + &tail, &hi + r + &tail],
            vec![lo - r - &tail, hi - r - tail],
        )
    };
    let (num, mut den) = match (d.row, d.column) {
        (Row::Top, Column::Left) => pair(-f + big_j + 1, hs.clone()),
        (Row::Top, Column::Right) => pair(f + big_j + 1, -hs.clone()),
        (Row::Middle, Column::Left) => pair(-f + &h, -sj.clone()),
        (Row::Middle, Column::Right) => pair(f + &h, sj.clone()),
        (Row::Bottom, Column::Left) => pair(-f - big_j + 1, -hs.clone()),
        (Row::Bottom, Column::Right) => pair(f - big_j + 1, hs.clone()),
    };
    if fidelity == Fidelity::StrictPaper && d == Direction::new(Row::Middle, Column::Right) {
        // printed as (f + ½ + Ξ − r − ΞJ)
        den[1] = f + &h + &x - r - &x * big_j;
    }
    QuotientEntry::new(num, den)
}

pub fn mult1_quotient_matrix(model: &Model, center: &KType) -> QuotientMatrix {
    let big_j = model.j_unsigned(center);
    let hood = neighbors(center);
    let entries = hood
        .present
        .iter()
        .map(|n| {
            let mut e = mult1_entry(model.r(), &center.f, &big_j, center.xi_eps(), n.direction);
            e.offset = model.bump(Mutation::Mult1Entry(n.direction));
            (n.direction, e)
        })
        .collect();
    QuotientMatrix { center: center.clone(), entries, absent: hood.absent }
}

pub fn mult2_det_quotient_matrix(model: &Model, center: &KType) -> QuotientMatrix {
    let big_j = model.j_unsigned(center);
    let hood = neighbors(center);
    let entries = hood
        .present
        .iter()
        .map(|n| {
            let mut e = mult2_entry(
                model.r(),
                &center.f,
                &big_j,
                center.xi,
                center.xi_eps(),
                n.direction,
                model.fidelity,
            );
            e.offset = model.bump(Mutation::Mult2Entry(n.direction));
            (n.direction, e)
        })
        .collect();
    QuotientMatrix { center: center.clone(), entries, absent: hood.absent }
}
