use serde::Serialize;

use crate::exact::{q, Field, GammaQuotient, Limit, Phased, Rational, Series, SlopedQuotient};
use crate::ktypes::{KType, Sign};
use crate::operators::Mat2;
use crate::{FactorReading, Fidelity, Model, Mutation};

use super::functions::{b33_from_z, b33_of, b33_sloped, z_value};
use super::SpectraError;

/// `C₁ … C₆` of the interface block at a multiplicity-2 type.
pub fn interface_coefficients(model: &Model, k: &KType) -> [Rational; 6] {
    interface_coefficients_at(model, k, &k.f)
}

/// `C₁ … C₆` with the `f` label supplied as a scalar.
pub fn interface_coefficients_at<T: Field>(model: &Model, k: &KType, f: &T) -> [T; 6] {
    let n = model.n();
    let r = model.r();
    let x = k.xi.rational();
    let ja = model.j_signed(k);
    let xja = &x * &ja;
    let c = |v: Rational| T::from(v);
    let two_f = f.clone() * c(q(2, 1));
    let common = two_f.clone() * c(&n - 1) + c(-(&n * 2) + 1 + n.square());
    let rn = r * &n * 2 - r * 2;
    let out = [
        common.clone() + c(&rn - &xja * 2),
        two_f.clone() * c(r.clone()) + c(xja.clone()),
        c(&n - 1 + r * 2),
        (two_f.clone() + c(r * 2 - &x + &ja * 2)) * (two_f + c(r * 2 + &x - &ja * 2)),
        c((&n - 1 + &ja * 2) * (&n - 1 - &ja * 2)),
        common + c(-rn + xja * 2),
    ];
    let mut i = 0u8;
    out.map(|ci| {
        i += 1;
        ci + c(model.bump(Mutation::BlockCoefficient(i)))
    })
}

/// Rational coefficient matrix of the block, with the shared factor
/// divided out.
pub fn block_coefficients_at<T: Field>(model: &Model, k: &KType, f: &T) -> Result<Mat2<T>, SpectraError> {
    if k.q != 0 {
        return Err(SpectraError::WrongMultiplicity { ktype: k.clone() });
    }
    let [c1, c2, c3, c4, c5, c6] = interface_coefficients_at(model, k, f);
    let inv = |v: &T, which: u8| {
        T::from(Rational::one())
            .try_div(v)
            .map_err(|_| SpectraError::SingularCoefficient { which, ktype: k.clone() })
    };
    let inv1 = inv(&c1, 1)?;
    let inv3 = inv(&c3, 3)?;
    let inv4 = inv(&c4, 4)?;
    let c = |v: Rational| T::from(v);
    let n = model.n();
    let n1 = &n - 1;
    let n1_inv = n1.recip().expect("n > 1");
    let x = k.xi.rational();
    let c34 = inv3 * inv4;
    let kappa = match model.fidelity {
        Fidelity::Corrected => &n * (&n - 2),
        Fidelity::StrictPaper => Rational::one(),
    };
    let c5c2 = c5 * c2.clone();
    Ok([
        [
            c1 * c2.clone() * c34.clone() * c(&n1_inv * 4) - c(Rational::one()),
            c5c2.clone() * c34.clone() * c((&n - 2) * &x * (-2) * n1_inv.square()),
        ],
        [
            c2 * c34.clone() * c(&n * &x * 8),
            c5c2 * c34 * inv1.clone() * c(kappa * (-4) * &n1_inv) + c6 * inv1,
        ],
    ])
}

/// Multiplicity-2 block: rational coefficients times a shared `B₃₃` factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block2 {
    pub center: KType,
    pub coefficients: Mat2,
    pub factor: GammaQuotient,
    pub c: [Rational; 6],
}

impl Block2 {
    pub fn det_coefficient(&self) -> Rational {
        let m = &self.coefficients;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }
}

/// Spectral data of the intertwinor on one K-type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Block {
    /// `B₃₃ = −4√−1 · Z`.
    Mult1 { center: KType, scalar: GammaQuotient },
    Mult2(Block2),
}

/// Shared factor of the multiplicity-2 block under the chosen reading.
pub fn shared_factor(model: &Model, k: &KType) -> GammaQuotient {
    let f = match model.reading {
        FactorReading::ShiftedF => &k.f + 1,
        FactorReading::SameF => k.f.clone(),
    };
    b33_from_z(&z_value(&model.params, &f, &model.j_unsigned(k), k.xi_eps()))
}

/// Slope-aware shared factor, with `f` shifted to `f + t`.
pub fn shared_factor_sloped(model: &Model, k: &KType) -> SlopedQuotient {
    let df = match model.reading {
        FactorReading::ShiftedF => 1,
        FactorReading::SameF => 0,
    };
    b33_sloped(model, k, df)
}

pub fn block2x2(model: &Model, center: &KType) -> Result<Block2, SpectraError> {
    let coefficients = block_coefficients_at(model, center, &center.f)?;
    Ok(Block2 {
        center: center.clone(),
        coefficients,
        factor: shared_factor(model, center),
        c: interface_coefficients(model, center),
    })
}

/// Block entries as the limit `t → 0` of the block at `f + t`.
///
/// Agrees with [`block2x2`] wherever that is defined, and also resolves the
/// removable `0 · ∞` where a coefficient pole meets a zero of the shared
/// factor. Needs the factor to reduce to a rational function of `t`, as it
/// does at `r = 1/2`.
pub fn block_limit(model: &Model, center: &KType) -> Result<[[Phased; 2]; 2], SpectraError> {
    let t = Series::variable();
    let f = Series::from(center.f.clone()) + t;
    let coefficients = block_coefficients_at(model, center, &f)?;
    let (factor, phase) = shared_factor_sloped(model, center)
        .expand()
        .map_err(|e| SpectraError::Exact { source: e, ktype: center.clone() })?;
    let entry = |i: usize, j: usize| -> Result<Phased, SpectraError> {
        match (coefficients[i][j].clone() * factor.clone()).limit() {
            Limit::Finite(v) => Ok(Phased::new(v, phase)),
            _ => Err(SpectraError::NoLimit { ktype: center.clone() }),
        }
    };
    Ok([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
}

pub fn block(model: &Model, k: &KType) -> Result<Block, SpectraError> {
    match k.q {
        0 => block2x2(model, k).map(Block::Mult2),
        _ => Ok(Block::Mult1 { center: k.clone(), scalar: b33_of(model, k) }),
    }
}

/// The 2×2 block of the exchanged Rarita–Schwinger operator (the r = 1/2
/// case), in closed form.
pub fn rarita_schwinger_block(model: &Model, k: &KType) -> [[Phased; 2]; 2] {
    let n = model.n();
    let n1 = &n - 1;
    let f = &k.f;
    let x = k.xi.rational();
    let big_j = model.j_unsigned(k);
    let sj = k.xi_eps().rational() * &big_j;
    let inv = |v: &Rational| v.recip().expect("n ≥ 4");
    let sign = match model.fidelity {
        Fidelity::Corrected => q(-1, 1),
        Fidelity::StrictPaper => q(1, 1),
    };
    let e11 = -((&n - 2) * inv(&n)) * (f + sign * (&n + 1) * inv(&n1) * &sj);
    let e12 = x.clone() * (-2) * inv(&(&n * &n1))
        * (&n1 * (&n - 2) * q(1, 4) - (&n - 2) * inv(&n1) * big_j.square());
    let e21 = x * 2;
    let e22 = f - (&n - 3) * inv(&n1) * &sj;
    [
        [Phased::imaginary(e11), Phased::imaginary(e12)],
        [Phased::imaginary(e21), Phased::imaginary(e22)],
    ]
}

/// Sign helper shared by tests and the CLI.
pub fn xi_eps_label(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "+1",
        Sign::Minus => "-1",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Phase;
    use crate::ktypes::{Lattice, Params};

    fn model(n: u32, r: Rational) -> Model {
        Model::new(Params::new(n, r, Lattice::Half).unwrap())
    }

    fn entries(b: &Block2) -> [[Phased; 2]; 2] {
        let factor = b.factor.value().unwrap();
        let e = |i: usize, j: usize| &Phased::real(b.coefficients[i][j].clone()) * &factor;
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    #[test]
    fn remark_example_at_the_bottom_type() {
        let m = model(4, q(1, 2));
        let k = m.params.ktype(Sign::Plus, q(1, 2), q(1, 2), 0, Sign::Plus).unwrap();
        // C₄ and the shared factor √−1 (f + 1 − ΞεJ) both vanish here
        assert!(matches!(block2x2(&m, &k), Err(SpectraError::SingularCoefficient { which: 4, .. })));
        assert_eq!(block_limit(&m, &k).unwrap(), rarita_schwinger_block(&m, &k));
        let k = m.params.ktype(Sign::Minus, q(7, 2), q(3, 2), 0, Sign::Plus).unwrap();
        let b = block2x2(&m, &k).unwrap();
        assert_eq!(entries(&b), rarita_schwinger_block(&m, &k));
        assert_eq!(block_limit(&m, &k).unwrap(), entries(&b));
        assert_eq!(b.factor.value().unwrap().phase, Phase::I);
    }

    #[test]
    fn strict_remark_sign_disagrees() {
        let m = model(6, q(1, 2));
        let k = m.params.ktype(Sign::Plus, q(3, 2), q(5, 2), 0, Sign::Minus).unwrap();
        let strict = m.clone().with_fidelity(Fidelity::StrictPaper);
        assert_ne!(rarita_schwinger_block(&m, &k)[0][0], rarita_schwinger_block(&strict, &k)[0][0]);
        assert_eq!(rarita_schwinger_block(&m, &k)[1][1], rarita_schwinger_block(&strict, &k)[1][1]);
    }

    #[test]
    fn vanishing_c2_kills_the_off_diagonal() {
        // C₂ = 2fr + ΞJ_a = 0 at r = 3/2, f = 3/2, Ξ = −1, J_a = 9/2
        let m = model(4, q(3, 2));
        let k = m.params.ktype(Sign::Minus, q(3, 2), q(7, 2), 0, Sign::Plus).unwrap();
        let c = interface_coefficients(&m, &k);
        assert!(c[1].is_zero());
        let b = block2x2(&m, &k).unwrap();
        assert_eq!(b.coefficients[0][0], q(-1, 1));
        assert!(b.coefficients[0][1].is_zero());
        assert!(b.coefficients[1][0].is_zero());
        assert_eq!(b.coefficients[1][1], &c[5] * c[0].recip().unwrap());
    }

    #[test]
    fn singular_coefficients_are_named() {
        let m = model(4, q(-3, 2));
        let k = m.params.ktype(Sign::Plus, q(5, 2), q(1, 2), 0, Sign::Plus).unwrap();
        assert!(matches!(block2x2(&m, &k), Err(SpectraError::SingularCoefficient { which: 3, .. })));
        assert!(block_limit(&m, &k).is_err());
        let m = model(4, q(1, 2));
        let k = m.params.ktype(Sign::Plus, q(-1, 2), q(1, 2), 0, Sign::Plus).unwrap();
        assert!(!interface_coefficients(&m, &k)[3].is_zero());
        // C₁ = 2f(n−1) + n² − n − 2ΞJ_a at r = 1/2: zero at f = −3/2, Ξ = −1, J_a = −3/2
        let k = m.params.ktype(Sign::Minus, q(-3, 2), q(1, 2), 0, Sign::Minus).unwrap();
        assert!(interface_coefficients(&m, &k)[0].is_zero());
        assert!(matches!(block2x2(&m, &k), Err(SpectraError::SingularCoefficient { which: 1, .. })));
        assert_eq!(block_limit(&m, &k).unwrap(), rarita_schwinger_block(&m, &k));
    }
}
