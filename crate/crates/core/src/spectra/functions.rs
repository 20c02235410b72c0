use crate::exact::{q, GammaQuotient, Phase, Phased, Rational, SlopedQuotient};
use crate::ktypes::{KType, Params, Sign};
use crate::Model;

fn half(x: Rational) -> Rational {
    x * q(1, 2)
}

/// Spectral function on multiplicity-1 types:
///
/// `Z = (Ξε/2) Γ(½(f+J+1+r−Ξε/2)) Γ(½(−f+J+1+r+Ξε/2))
///      / [Γ(½(f+J+1−r+Ξε/2)) Γ(½(−f+J+1−r−Ξε/2))]`
pub fn z_value(params: &Params, f: &Rational, big_j: &Rational, xi_eps: Sign) -> GammaQuotient {
    z_sloped(params, f, big_j, xi_eps).at_origin()
}

/// `Z` with `f` replaced by `f + t`; each argument carries its slope in `t`.
pub fn z_sloped(params: &Params, f: &Rational, big_j: &Rational, xi_eps: Sign) -> SlopedQuotient {
    let r = params.r();
    let s = xi_eps.rational();
    let hs = s.clone() * q(1, 2);
    let a = f + big_j + 1;
    let b = -f + big_j + 1;
    let up = q(1, 2);
    let down = q(-1, 2);
    SlopedQuotient::new(
        s * q(1, 2),
        Phase::ONE,
        [
            (half(&a + r - &hs), up.clone(), 1),
            (half(&b + r + &hs), down.clone(), 1),
            (half(&a - r + &hs), up, -1),
            (half(&b - r - &hs), down, -1),
        ],
    )
}

/// The eight-factor normalization product on multiplicity-2 types.
pub fn mult2_gamma_product(
    params: &Params,
    f: &Rational,
    big_j: &Rational,
    xi_eps: Sign,
) -> GammaQuotient {
    mult2_product_sloped(params, f, big_j, xi_eps).at_origin()
}

/// The normalization product with `f` replaced by `f + t`.
pub fn mult2_product_sloped(params: &Params, f: &Rational, big_j: &Rational, xi_eps: Sign) -> SlopedQuotient {
    let r = params.r();
    let hs = xi_eps.rational() * q(1, 2);
    let (up, down) = (q(1, 2), q(-1, 2));
    let mut factors = Vec::with_capacity(8);
    for shift in [0, 2] {
        let a = f + big_j + shift;
        let b = -f + big_j + shift;
        factors.push((half(&a + r - &hs), up.clone(), 1));
        factors.push((half(&b + r + &hs), down.clone(), 1));
        factors.push((half(&a - r + &hs), up.clone(), -1));
        factors.push((half(&b - r - &hs), down.clone(), -1));
    }
    SlopedQuotient::new(q(1, 4), Phase::ONE, factors)
}

/// `√−1 (f − ΞεJ)`.
pub fn exchanged_rs_eigenvalue(f: &Rational, big_j: &Rational, xi_eps: Sign) -> Phased {
    Phased::imaginary(f - xi_eps.rational() * big_j)
}

/// Normalization of the multiplicity-1 entry: `B₃₃ = −4√−1 · Z`.
pub fn b33_from_z(z: &GammaQuotient) -> GammaQuotient {
    z.scale(&q(-4, 1), Phase::I)
}

/// `Z` at a K-type's own labels.
pub fn z_of(model: &Model, k: &KType) -> GammaQuotient {
    z_value(&model.params, &k.f, &model.j_unsigned(k), k.xi_eps())
}

/// `B₃₃` at a K-type's own labels.
pub fn b33_of(model: &Model, k: &KType) -> GammaQuotient {
    b33_from_z(&z_of(model, k))
}

/// `B₃₃` at a K-type's labels with `f` shifted to `f + df + t`.
pub fn b33_sloped(model: &Model, k: &KType, df: i64) -> SlopedQuotient {
    z_sloped(&model.params, &(&k.f + df), &model.j_unsigned(k), k.xi_eps()).scale(&q(-4, 1), Phase::I)
}

/// Gamma product at a K-type's own labels.
pub fn mult2_product_of(model: &Model, k: &KType) -> GammaQuotient {
    mult2_gamma_product(&model.params, &k.f, &model.j_unsigned(k), k.xi_eps())
}

pub(crate) fn mult2_sloped_of(model: &Model, k: &KType) -> SlopedQuotient {
    mult2_product_sloped(&model.params, &k.f, &model.j_unsigned(k), k.xi_eps())
}

pub(crate) fn z_sloped_of(model: &Model, k: &KType) -> SlopedQuotient {
    z_sloped(&model.params, &k.f, &model.j_unsigned(k), k.xi_eps())
}
