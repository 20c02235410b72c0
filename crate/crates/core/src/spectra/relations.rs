//! Residuals of the neighbor relations, written once over [`Field`] and
//! evaluated either exactly at the lattice point or, where a coefficient or
//! factor ratio blows up, as the limit along a common shift `f → f + t`.

use crate::exact::{Field, Limit, Phase, Rational, Reduced, Series, SlopedQuotient};
use crate::ktypes::KType;
use crate::operators::{case1_at, case2_at, case3_at, LProvider, Mat2};
use crate::Model;

use super::block::{block_coefficients_at, shared_factor_sloped};
use super::functions::b33_sloped;
use super::quotients::QuotientEntry;
use super::SpectraError;

pub(crate) struct Evaluated {
    pub residuals: Vec<Limit>,
    pub via_limit: bool,
}

impl Evaluated {
    pub fn all_zero(&self) -> bool {
        self.residuals.iter().all(|r| r.finite().is_some_and(|x| x.is_zero()))
    }
}

pub(crate) fn shifted(f: &Rational) -> Series {
    Series::from(f.clone()) + Series::variable()
}

fn exact_err(k: &KType) -> impl Fn(crate::exact::ExactError) -> SpectraError + '_ {
    move |source| SpectraError::Exact { source, ktype: k.clone() }
}

fn real(phase: Phase, at: &KType) -> Result<(), SpectraError> {
    if phase == Phase::ONE {
        Ok(())
    } else {
        Err(SpectraError::Exact { source: crate::exact::ExactError::MixedPhase, ktype: at.clone() })
    }
}

/// `num / den` at the lattice point, or `None` when it is not finite there.
///
/// Without integer arguments nothing can vanish, and the formal reduction
/// is the limit; otherwise the slope-aware expansion decides.
pub(crate) fn ratio_value(
    num: &SlopedQuotient,
    den: &SlopedQuotient,
    at: &KType,
) -> Result<Option<Rational>, SpectraError> {
    let quotient = num.checked_div(den).map_err(exact_err(at))?;
    real(quotient.phase(), at)?;
    let formal = quotient.at_origin();
    if formal.factors().iter().all(|g| !g.arg.is_integer()) {
        let value = formal.value().map_err(exact_err(at))?;
        return Ok(Some(value.value));
    }
    let (series, _) = quotient.expand().map_err(exact_err(at))?;
    Ok(series.limit().finite().cloned())
}

pub(crate) fn ratio_series(
    num: &SlopedQuotient,
    den: &SlopedQuotient,
    at: &KType,
) -> Result<Series, SpectraError> {
    let quotient = num.checked_div(den).map_err(exact_err(at))?;
    real(quotient.phase(), at)?;
    Ok(quotient.expand().map_err(exact_err(at))?.0)
}

/// Runs the exact evaluation, falling back to the limit when it reports a
/// singular coefficient or a non-finite ratio.
pub(crate) fn evaluate(
    fast: impl FnOnce() -> Result<Option<Vec<Rational>>, SpectraError>,
    slow: impl FnOnce() -> Result<Vec<Series>, SpectraError>,
) -> Result<Evaluated, SpectraError> {
    match fast() {
        Ok(Some(v)) => Ok(Evaluated { residuals: v.into_iter().map(Limit::Finite).collect(), via_limit: false }),
        Ok(None) | Err(SpectraError::SingularCoefficient { .. }) => {
            let v = slow()?;
            Ok(Evaluated { residuals: v.iter().map(Series::limit).collect(), via_limit: true })
        }
        Err(e) => Err(e),
    }
}

pub(crate) fn matmul<T: Field>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let e = |i: usize, k: usize| a[i][0].clone() * b[0][k].clone() + a[i][1].clone() * b[1][k].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub(crate) fn det<T: Field>(m: &Mat2<T>) -> T {
    m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()
}

/// `ρ C^β M₁ − M₂ C^α` with `ρ` the shared-factor ratio, i.e.
/// `(B^β M₁ − M₂ B^α) / factor(α)`.
fn case2_residual_at<T: Field>(model: &Model, a: &KType, b: &KType, fa: &T, fb: &T, rho: T) -> Result<Vec<T>, SpectraError> {
    let ca = block_coefficients_at(model, a, fa)?;
    let cb = block_coefficients_at(model, b, fb)?;
    let d = case2_at(model, a, b, fa, fb)?;
    let lhs = matmul(&cb, &d.m1());
    let rhs = matmul(&d.m2(), &ca);
    let mut out = Vec::with_capacity(4);
    for i in 0..2 {
        for k in 0..2 {
            out.push(rho.clone() * lhs[i][k].clone() - rhs[i][k].clone());
        }
    }
    Ok(out)
}

pub(crate) fn case2_residual(model: &Model, a: &KType, b: &KType) -> Result<Evaluated, SpectraError> {
    let (fa, fb) = (shared_factor_sloped(model, a), shared_factor_sloped(model, b));
    evaluate(
        || match ratio_value(&fb, &fa, a)? {
            Some(rho) => case2_residual_at(model, a, b, &a.f, &b.f, rho).map(Some),
            None => Ok(None),
        },
        || {
            let rho = ratio_series(&fb, &fa, a)?;
            case2_residual_at(model, a, b, &shifted(&a.f), &shifted(&b.f), rho)
        },
    )
}

/// The four Case 1 residuals, in units of `factor(α)`: two for `β → α`
/// then two for `α → β`. `w = B₃₃^β / factor(α)`.
pub(crate) fn case1_residual_at<T: Field>(
    model: &Model,
    alpha: &KType,
    beta: &KType,
    l: &dyn LProvider,
    fa: &T,
    fb: &T,
    w: T,
) -> Result<Vec<T>, SpectraError> {
    let c = block_coefficients_at(model, alpha, fa)?;
    let d = case1_at(model, alpha, beta, l, fa, fb)?;
    let (a1, a2, em, ep) = (d.a1, d.a2, d.e_minus, d.e_plus);
    Ok(vec![
        c[0][0].clone() * a1.clone() + c[0][1].clone() * em.clone() + a1.clone() * w.clone(),
        c[1][0].clone() * a1 + c[1][1].clone() * em.clone() - ep.clone() * w.clone(),
        a2.clone() * c[0][0].clone() - em.clone() * c[1][0].clone() + a2.clone() * w.clone(),
        a2 * c[0][1].clone() - em * c[1][1].clone() + ep * w,
    ])
}

pub(crate) fn case1_residual(
    model: &Model,
    alpha: &KType,
    beta: &KType,
    l: &dyn LProvider,
) -> Result<Evaluated, SpectraError> {
    let fa = shared_factor_sloped(model, alpha);
    let fb = b33_sloped(model, beta, 0);
    evaluate(
        || match ratio_value(&fb, &fa, alpha)? {
            Some(w) => case1_residual_at(model, alpha, beta, l, &alpha.f, &beta.f, w).map(Some),
            None => Ok(None),
        },
        || {
            let w = ratio_series(&fb, &fa, alpha)?;
            case1_residual_at(model, alpha, beta, l, &shifted(&alpha.f), &shifted(&beta.f), w)
        },
    )
}

/// `P⁻ − P⁺ ρ` with `ρ = B₃₃^β / B₃₃^α`.
fn case3_residual_at<T: Field>(
    model: &Model,
    a: &KType,
    b: &KType,
    l: &dyn LProvider,
    fa: &T,
    fb: &T,
    rho: T,
) -> Result<Vec<T>, SpectraError> {
    let d = case3_at(model, a, b, l, fa, fb)?;
    Ok(vec![d.p_minus - d.p_plus * rho])
}

pub(crate) fn case3_residual(model: &Model, a: &KType, b: &KType, l: &dyn LProvider) -> Result<Evaluated, SpectraError> {
    let (za, zb) = (b33_sloped(model, a, 0), b33_sloped(model, b, 0));
    evaluate(
        || match ratio_value(&zb, &za, a)? {
            Some(rho) => case3_residual_at(model, a, b, l, &a.f, &b.f, rho).map(Some),
            None => Ok(None),
        },
        || {
            let rho = ratio_series(&zb, &za, a)?;
            case3_residual_at(model, a, b, l, &shifted(&a.f), &shifted(&b.f), rho)
        },
    )
}

/// `ρ² det C^{α₂} det M₁ − det M₂ det C^{α₁}` along `α₁ → α₂`.
fn det_residual_at<T: Field>(model: &Model, a1: &KType, a2: &KType, f1: &T, f2: &T, rho: T) -> Result<Vec<T>, SpectraError> {
    let c1 = block_coefficients_at(model, a1, f1)?;
    let c2 = block_coefficients_at(model, a2, f2)?;
    let d = case2_at(model, a1, a2, f1, f2)?;
    Ok(vec![rho.clone() * rho * det(&c2) * det(&d.m1()) - det(&d.m2()) * det(&c1)])
}

pub(crate) fn det_residual(model: &Model, a1: &KType, a2: &KType) -> Result<Evaluated, SpectraError> {
    let (g1, g2) = (shared_factor_sloped(model, a1), shared_factor_sloped(model, a2));
    evaluate(
        || match ratio_value(&g2, &g1, a1)? {
            Some(rho) => det_residual_at(model, a1, a2, &a1.f, &a2.f, rho).map(Some),
            None => Ok(None),
        },
        || {
            let rho = ratio_series(&g2, &g1, a1)?;
            det_residual_at(model, a1, a2, &shifted(&a1.f), &shifted(&a2.f), rho)
        },
    )
}

/// `q det M₁ − det M₂` along `α₁ → α₂`, where `q` is the determinant
/// quotient entry for that direction at `α₁`.
pub(crate) fn det_quotient_residual(
    model: &Model,
    a1: &KType,
    a2: &KType,
    entry: &QuotientEntry,
    slope: &Rational,
) -> Result<Evaluated, SpectraError> {
    evaluate(
        || match entry.reduce() {
            Reduced::Finite(v) => {
                let d = case2_at(model, a1, a2, &a1.f, &a2.f)?;
                Ok(Some(vec![v.value * det(&d.m1()) - det(&d.m2())]))
            }
            _ => Ok(None),
        },
        || {
            let q = entry.series(slope).map_err(exact_err(a1))?;
            let d = case2_at(model, a1, a2, &shifted(&a1.f), &shifted(&a2.f))?;
            Ok(vec![q * det(&d.m1()) - det(&d.m2())])
        },
    )
}
