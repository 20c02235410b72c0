//! Compressed operator data: the 𝒟 block, the compression coefficient
//! `C_ba`, Bochner-Laplacian compressions, and the transition quantities of
//! the three neighbor cases.

use serde::Serialize;
use thiserror::Error;

use crate::exact::{q, Field, Rational};
use crate::ktypes::{neighbors, KType};
use crate::{DEntry, Model, Mutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("{from} and {to} are not neighbors for this case")]
    NotNeighbors { from: KType, to: KType },
    #[error("target {target} has λ(T*T) = 0")]
    DegenerateTarget { target: KType },
    #[error("no Rarita–Schwinger eigenvalue available for {ktype}")]
    MissingL { ktype: KType },
}

/// Supplies the Rarita–Schwinger eigenvalue `L` on S^{n-1} for
/// multiplicity-1 types.
pub trait LProvider {
    fn l_value(&self, ktype: &KType) -> Option<Rational>;
}

/// Provider that knows nothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoL;

impl LProvider for NoL {
    fn l_value(&self, _: &KType) -> Option<Rational> {
        None
    }
}

impl<F: Fn(&KType) -> Option<Rational>> LProvider for F {
    fn l_value(&self, ktype: &KType) -> Option<Rational> {
        self(ktype)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DBlock {
    pub d11: Rational,
    pub d12: Rational,
    pub d21: Rational,
    pub d22: Rational,
    pub d33: Option<Rational>,
}

impl DBlock {
    pub fn d33_known(&self) -> bool {
        self.d33.is_some()
    }
}

pub fn d_block(model: &Model, k: &KType, l: &dyn LProvider) -> DBlock {
    let n = model.n();
    let ja = model.j_signed(k);
    // a constant shift would cancel in the differences Case 2 uses
    let bump = |e| model.bump(Mutation::D(e)) * &ja;
    DBlock {
        d11: (&n + 1) * (&n - 1).recip().expect("n > 1") * q(1, 2) * &ja + bump(DEntry::D11),
        d12: (&n - 2) * q(1, 4)
            - (&n - 2) * ((&n - 1).square()).recip().expect("n > 1") * ja.square()
            + bump(DEntry::D12),
        d21: -n.clone() + bump(DEntry::D21),
        d22: (&n - 3) * (&n - 1).recip().expect("n > 1") * q(1, 2) * &ja + bump(DEntry::D22),
        d33: l.l_value(k).map(|l| l * q(1, 2) + bump(DEntry::D33)),
    }
}

/// Symmetric numerator `½J_b² + ½J_a² − J_aJ_b/(n−1) − n(n−1)/4` of `C_ba`.
pub fn c_ba_numerator(n: &Rational, ja: &Rational, jb: &Rational) -> Rational {
    let inv = (n - 1).recip().expect("n > 1");
    (jb.square() + ja.square()) * q(1, 2) - ja * jb * inv - n * (n - 1) * q(1, 4)
}

pub fn c_ba(model: &Model, a: &KType, b: &KType) -> Result<Rational, OperatorError> {
    let lambda = model.lambda_tt(b);
    let num = c_ba_numerator(&model.n(), &model.j_signed(a), &model.j_signed(b));
    num.checked_div(&lambda)
        .map_err(|_| OperatorError::DegenerateTarget { target: b.clone() })
}

/// True for the Case 1 pairing `(f; j, ½, …) ↔ (f±1; j, 3/2, …)`.
fn case1_pair(a: &KType, b: &KType) -> bool {
    a.xi == b.xi && a.j == b.j && a.eps == b.eps && (&a.f - &b.f).abs() == Rational::one()
}

pub fn are_neighbors(a: &KType, b: &KType) -> bool {
    if a.q == b.q {
        neighbors(a).present.iter().any(|n| &n.ktype == b)
    } else {
        case1_pair(a, b)
    }
}

/// Coefficient of the compressed Bochner-Laplacian commutator mapping
/// `from` into `to`.
///
/// Same multiplicity: `f_to² − f_from² + J_to² − J_from²`. Across the
/// multiplicity interface the `J` terms cancel and `∓(n−2)` appears, with
/// the sign flipping under swap.
pub fn bochner_compression(
    model: &Model,
    from: &KType,
    to: &KType,
) -> Result<Rational, OperatorError> {
    if !are_neighbors(from, to) {
        return Err(OperatorError::NotNeighbors { from: from.clone(), to: to.clone() });
    }
    let base = to.f.square() - from.f.square() + model.j_signed(to).square()
        - model.j_signed(from).square();
    let n2 = model.n() - 2;
    Ok(match (from.q, to.q) {
        (1, 0) => base - n2,
        (0, 1) => base + n2,
        _ => base,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case1Data<T = Rational> {
    pub a1: T,
    pub a2: T,
    pub e_minus: T,
    pub e_plus: T,
}

pub fn case1_data(
    model: &Model,
    alpha: &KType,
    beta: &KType,
    l: &dyn LProvider,
) -> Result<Case1Data, OperatorError> {
    case1_at(model, alpha, beta, l, &alpha.f, &beta.f)
}

/// Case 1 quantities with the `f` labels supplied as scalars, so the same
/// formulas serve exact lattice points and shifted series.
pub fn case1_at<T: Field>(
    model: &Model,
    alpha: &KType,
    beta: &KType,
    l: &dyn LProvider,
    fa: &T,
    fb: &T,
) -> Result<Case1Data<T>, OperatorError> {
    if alpha.q != 0 || beta.q != 1 || !case1_pair(alpha, beta) {
        return Err(OperatorError::NotNeighbors { from: alpha.clone(), to: beta.clone() });
    }
    let da = d_block(model, alpha, l);
    let d33b = d_block(model, beta, l)
        .d33
        .ok_or_else(|| OperatorError::MissingL { ktype: beta.clone() })?;
    let k = alpha.xi.rational() * (&alpha.f - &beta.f);
    let base = half_diff_of_squares(fa, fb) - T::from((model.n() - 2) * q(1, 2));
    let x = T::from(&k * (&da.d22 - d33b));
    let r = T::from(model.r().clone());
    Ok(Case1Data {
        a1: T::from(&k * &da.d12),
        a2: T::from(-(&k * &da.d21)),
        e_minus: base.clone() - r.clone() + x.clone(),
        e_plus: base + r - x,
    })
}

/// `(a² − b²)/2`.
fn half_diff_of_squares<T: Field>(a: &T, b: &T) -> T {
    (a.clone() * a.clone() - b.clone() * b.clone()) * T::from(q(1, 2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case2Data<T = Rational> {
    pub f1_minus: T,
    pub f1_plus: T,
    pub f2_minus: T,
    pub f2_plus: T,
    pub g1: T,
    pub g2: T,
    pub c_ba: T,
}

pub type Mat2<T = Rational> = [[T; 2]; 2];

impl<T: Field> Case2Data<T> {
    /// `[[F₁⁻, G₂], [G₁, C_ba F₂⁻]]`
    pub fn m1(&self) -> Mat2<T> {
        [
            [self.f1_minus.clone(), self.g2.clone()],
            [self.g1.clone(), self.c_ba.clone() * self.f2_minus.clone()],
        ]
    }

    /// `[[F₁⁺, −G₂], [−G₁, C_ba F₂⁺]]`
    pub fn m2(&self) -> Mat2<T> {
        [
            [self.f1_plus.clone(), -self.g2.clone()],
            [-self.g1.clone(), self.c_ba.clone() * self.f2_plus.clone()],
        ]
    }
}

pub fn case2_data(model: &Model, alpha: &KType, beta: &KType) -> Result<Case2Data, OperatorError> {
    case2_at(model, alpha, beta, &alpha.f, &beta.f)
}

pub fn case2_at<T: Field>(
    model: &Model,
    alpha: &KType,
    beta: &KType,
    fa: &T,
    fb: &T,
) -> Result<Case2Data<T>, OperatorError> {
    if alpha.q != 0 || beta.q != 0 || !are_neighbors(alpha, beta) {
        return Err(OperatorError::NotNeighbors { from: alpha.clone(), to: beta.clone() });
    }
    let c = c_ba(model, alpha, beta)?;
    let da = d_block(model, alpha, &NoL);
    let db = d_block(model, beta, &NoL);
    let k = alpha.xi.rational() * (&beta.f - &alpha.f);
    let base = half_diff_of_squares(fb, fa)
        + T::from((model.j_signed(beta).square() - model.j_signed(alpha).square()) * q(1, 2));
    let r = T::from(model.r().clone());
    let x1 = T::from(&k * (&db.d11 - &da.d11));
    let x2 = T::from(&k * (&db.d22 - &da.d22));
    Ok(Case2Data {
        f1_minus: base.clone() - r.clone() + x1.clone(),
        f1_plus: base.clone() + r.clone() - x1,
        f2_minus: base.clone() - r.clone() + x2.clone(),
        f2_plus: base + r - x2,
        g1: T::from(&k * (&db.d21 - &c * &da.d21)),
        g2: T::from(&k * (&c * &db.d12 - &da.d12)),
        c_ba: T::from(c),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case3Data<T = Rational> {
    pub p_minus: T,
    pub p_plus: T,
}

/// Quantities of `B₃₃^α P⁻ = P⁺ B₃₃^β`, with `α = (f, …)` and `β = (f′, …)`.
pub fn case3_data(
    model: &Model,
    alpha: &KType,
    beta: &KType,
    l: &dyn LProvider,
) -> Result<Case3Data, OperatorError> {
    case3_at(model, alpha, beta, l, &alpha.f, &beta.f)
}

pub fn case3_at<T: Field>(
    model: &Model,
    alpha: &KType,
    beta: &KType,
    l: &dyn LProvider,
    fa: &T,
    fb: &T,
) -> Result<Case3Data<T>, OperatorError> {
    if alpha.q != 1 || beta.q != 1 || !are_neighbors(alpha, beta) {
        return Err(OperatorError::NotNeighbors { from: alpha.clone(), to: beta.clone() });
    }
    let missing = |k: &KType| OperatorError::MissingL { ktype: k.clone() };
    let da = d_block(model, alpha, l).d33.ok_or_else(|| missing(alpha))?;
    let db = d_block(model, beta, l).d33.ok_or_else(|| missing(beta))?;
    let k = alpha.xi.rational() * (&alpha.f - &beta.f);
    let base = half_diff_of_squares(fa, fb)
        + T::from((model.j_signed(alpha).square() - model.j_signed(beta).square()) * q(1, 2));
    let x = T::from(k * (da - db));
    let r = T::from(model.r().clone());
    Ok(Case3Data { p_minus: base.clone() - r.clone() + x.clone(), p_plus: base + r - x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktypes::{Lattice, Params, Sign};

    fn model(n: u32, r: Rational) -> Model {
        Model::new(Params::new(n, r, Lattice::Half).unwrap())
    }

    fn kt(m: &Model, f: Rational, j: Rational, q: u8, eps: Sign) -> KType {
        m.params.ktype(Sign::Plus, f, j, q, eps).unwrap()
    }

    #[test]
    fn d_block_at_the_bottom_type() {
        let m = model(4, q(1, 2));
        let d = d_block(&m, &kt(&m, q(1, 2), q(1, 2), 0, Sign::Plus), &NoL);
        assert_eq!(d.d11, q(5, 4));
        assert_eq!(d.d12, Rational::zero());
        assert_eq!(d.d21, q(-4, 1));
        assert_eq!(d.d22, q(1, 4));
        assert!(!d.d33_known());
        let m6 = model(6, q(1, 2));
        let d = d_block(&m6, &kt(&m6, q(1, 2), q(1, 2), 0, Sign::Minus), &NoL);
        assert_eq!(d.d21, q(-6, 1));
        assert_eq!(d.d12, Rational::zero());
    }

    #[test]
    fn c_ba_values() {
        let n = q(4, 1);
        assert_eq!(c_ba_numerator(&n, &q(-3, 2), &q(5, 2)), q(5, 2));
        assert_eq!(c_ba_numerator(&n, &q(3, 2), &q(5, 2)), Rational::zero());
        let m = model(4, q(1, 2));
        let a = kt(&m, q(1, 2), q(1, 2), 0, Sign::Minus);
        let b = kt(&m, q(3, 2), q(3, 2), 0, Sign::Plus);
        assert_eq!(c_ba(&m, &a, &b).unwrap(), q(15, 16));
        let bottom = kt(&m, q(3, 2), q(1, 2), 0, Sign::Plus);
        assert!(matches!(c_ba(&m, &b, &bottom), Err(OperatorError::DegenerateTarget { .. })));
    }

    #[test]
    fn bochner_across_the_interface() {
        let m = model(4, q(1, 2));
        let alpha = kt(&m, q(1, 2), q(3, 2), 0, Sign::Plus);
        let beta = kt(&m, q(3, 2), q(3, 2), 1, Sign::Plus);
        assert_eq!(bochner_compression(&m, &beta, &alpha).unwrap(), q(-4, 1));
        assert_eq!(bochner_compression(&m, &alpha, &beta).unwrap(), q(4, 1));
        let far = kt(&m, q(7, 2), q(3, 2), 1, Sign::Plus);
        assert!(bochner_compression(&m, &alpha, &far).is_err());
    }

    #[test]
    fn case1_a2_sign() {
        let m = model(4, q(1, 1));
        let alpha = kt(&m, q(1, 2), q(3, 2), 0, Sign::Plus);
        let beta = kt(&m, q(3, 2), q(3, 2), 1, Sign::Plus);
        let l = |_: &KType| Some(Rational::zero());
        let c = case1_data(&m, &alpha, &beta, &l).unwrap();
        assert_eq!(c.a2, q(-4, 1));
        assert_eq!(&c.e_plus + &c.e_minus, q(1, 4) - q(9, 4) - q(2, 1));
        assert!(matches!(
            case1_data(&m, &alpha, &beta, &NoL),
            Err(OperatorError::MissingL { .. })
        ));
    }

    #[test]
    fn case2_g1_example() {
        // J_a = -3/2 (j = 1/2, ε = -1) to J_b = 5/2 (j = 3/2, ε = +1) is not a
        // lattice edge, so assemble G₁ from its definition directly.
        let m = model(4, q(1, 2));
        let a = kt(&m, q(1, 2), q(1, 2), 0, Sign::Minus);
        let b = kt(&m, q(3, 2), q(3, 2), 0, Sign::Plus);
        let c = c_ba(&m, &a, &b).unwrap();
        let g1 = q(1, 1) * (d_block(&m, &b, &NoL).d21 - &c * d_block(&m, &a, &NoL).d21);
        assert_eq!(g1, q(-1, 4));
    }

    #[test]
    fn case2_sums() {
        let m = model(4, q(3, 2));
        let a = kt(&m, q(1, 2), q(3, 2), 0, Sign::Plus);
        let b = kt(&m, q(3, 2), q(5, 2), 0, Sign::Plus);
        let d = case2_data(&m, &a, &b).unwrap();
        let expect = b.f.square() - a.f.square() + m.j_signed(&b).square() - m.j_signed(&a).square();
        assert_eq!(&d.f1_plus + &d.f1_minus, expect);
        assert_eq!(&d.f2_plus + &d.f2_minus, expect);
    }

    #[test]
    fn case3_middle_row_sum() {
        let m = model(4, q(3, 2));
        let a = kt(&m, q(1, 2), q(5, 2), 1, Sign::Plus);
        let b = kt(&m, q(3, 2), q(5, 2), 1, Sign::Minus);
        let l = |k: &KType| Some(k.f.clone());
        let d = case3_data(&m, &a, &b, &l).unwrap();
        assert_eq!(&d.p_plus + &d.p_minus, q(-2, 1) * &a.f - 1);
    }
}
