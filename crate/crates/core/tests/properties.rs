use proptest::prelude::*;

use twistor_spectra::exact::{
    evaluate_numeric, q, ratio, ratio_reduced, Field, GammaQuotient, Limit, Phase, Phased, Rational, Reduced,
    Series,
};
use twistor_spectra::ktypes::{
    dirac_eigenvalue, neighbors, twistor_tt_eigenvalue, Direction, KType, Lattice, Params, Sign,
};
use twistor_spectra::operators::{c_ba_numerator, case1_data, case2_data, case3_data, d_block, NoL};
use twistor_spectra::spectra::{mult2_entry, z_of};
use twistor_spectra::{Fidelity, Model};

fn rational(max_numer: i64, max_denom: i64) -> impl Strategy<Value = Rational> {
    (-max_numer..=max_numer, 1..=max_denom).prop_map(|(a, b)| q(a, b))
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn dim() -> impl Strategy<Value = u32> {
    prop_oneof![Just(4u32), Just(6), Just(8), Just(10)]
}

fn order() -> impl Strategy<Value = Rational> {
    rational(20, 6).prop_filter("nonzero order", |r| !r.is_zero())
}

/// `(Ξ, f, j, q, ε)` on the half-integer lattice.
fn ktype(q_: u8) -> impl Strategy<Value = KType> {
    (sign(), -12i64..12, 0i64..6, sign()).prop_map(move |(xi, f, j, eps)| KType {
        xi,
        f: q(2 * f + 1, 2),
        j: q(2 * j + 1, 2) + Rational::from_integer(q_.into()),
        q: q_,
        eps,
    })
}

fn model(n: u32, r: Rational) -> Model {
    Model::new(Params::new(n, r, Lattice::Half).unwrap())
}

fn flip_xi(k: &KType) -> KType {
    KType { xi: -k.xi, ..k.clone() }
}

proptest! {
    #[test]
    fn gamma_shift_is_a_pochhammer_product(x in rational(60, 12), m in 0i64..=20) {
        prop_assume!((0..m).all(|k| !(&x + k).is_nonpositive_integer()));
        let top = GammaQuotient::gamma(&x + m);
        let bottom = GammaQuotient::gamma(x.clone());
        let mut product = Rational::one();
        for k in 0..m {
            product = product * (&x + k);
        }
        prop_assert_eq!(ratio(&top, &bottom).unwrap(), Phased::real(product));
    }

    #[test]
    fn ratio_is_multiplicative(
        x in rational(30, 7).prop_filter("off the poles", |x| x.is_positive() && !x.is_integer()),
        y in rational(30, 5).prop_filter("off the poles", |y| y.is_positive() && !y.is_integer()),
        shifts in proptest::collection::vec(0i64..8, 6),
    ) {
        let g = |i: usize| GammaQuotient::new(
            Rational::one(),
            Phase::ONE,
            [(&x + shifts[2 * i], 1), (&y + shifts[2 * i + 1], -1)],
        );
        let (a, b, c) = (g(0), g(1), g(2));
        let lhs = &ratio(&a, &b).unwrap() * &ratio(&b, &c).unwrap();
        prop_assert_eq!(lhs, ratio(&a, &c).unwrap());
    }

    #[test]
    fn numeric_agrees_with_exact(n in dim(), r in order(), center in ktype(1), pick in 0usize..6) {
        let m = model(n, r);
        let hood = neighbors(&center);
        let nb = &hood.present[pick % hood.present.len()].ktype;
        let (za, zb) = (z_of(&m, &center), z_of(&m, nb));
        prop_assume!(![&za, &zb].iter().any(|g| g.has_pole_flag() || g.has_zero_flag()));
        let exact = ratio(&zb, &za).unwrap();
        let (xa, pa) = evaluate_numeric(&za).unwrap().parts();
        let (xb, pb) = evaluate_numeric(&zb).unwrap().parts();
        let want = exact.value.to_f64();
        prop_assert_eq!(pb * pa.inverse(), exact.phase);
        prop_assert!(((xb / xa - want) / want).abs() <= 1e-10, "{} vs {}", xb / xa, want);
    }

    #[test]
    fn neighbors_are_symmetric(center in prop_oneof![ktype(0), ktype(1)]) {
        for nb in neighbors(&center).present {
            let back = neighbors(&nb.ktype);
            prop_assert!(back.present.iter().any(|b| b.ktype == center && b.direction == nb.direction.opposite()));
        }
    }

    #[test]
    fn dirac_steps_by_one(n in dim(), j in 0i64..20, eps in sign()) {
        let p = Params::new(n, Rational::one(), Lattice::Half).unwrap();
        let j = q(2 * j + 1, 2);
        let a = dirac_eigenvalue(&p, &j, eps).abs();
        let b = dirac_eigenvalue(&p, &(&j + 1), eps).abs();
        prop_assert!(a.is_positive());
        prop_assert_eq!(b - a, Rational::one());
    }

    #[test]
    fn twistor_tt_vanishes_only_at_the_bottom(n in dim(), j in 0i64..20) {
        let p = Params::new(n, Rational::one(), Lattice::Half).unwrap();
        let j = q(2 * j + 1, 2);
        prop_assert_eq!(twistor_tt_eigenvalue(&p, &j).is_zero(), j == Rational::half());
    }

    #[test]
    fn c_ba_numerator_is_symmetric(n in dim(), a in rational(40, 2), b in rational(40, 2)) {
        let n = Rational::from(n);
        prop_assert_eq!(c_ba_numerator(&n, &a, &b), c_ba_numerator(&n, &b, &a));
    }

    #[test]
    fn case_data_sums_are_r_free(n in dim(), r in order(), alpha in ktype(0), df in prop_oneof![Just(-1i64), Just(1)], l in rational(30, 2)) {
        let m = model(n, r);
        let beta = KType { f: &alpha.f + df, q: 1, ..alpha.clone() };
        let lp = |_: &KType| Some(l.clone());
        let sq = |k: &KType| k.f.square();
        let d = case1_data(&m, &alpha, &beta, &lp).unwrap();
        prop_assert_eq!(&d.e_plus + &d.e_minus, sq(&alpha) - sq(&beta) - (m.n() - 2));

        let jsq = |k: &KType| m.j_signed(k).square();
        for nb in neighbors(&beta).present {
            let b3 = nb.ktype;
            let d = case3_data(&m, &beta, &b3, &lp).unwrap();
            prop_assert_eq!(&d.p_plus + &d.p_minus, sq(&beta) - sq(&b3) + jsq(&beta) - jsq(&b3));
        }

        for nb in neighbors(&alpha).present {
            let Ok(d) = case2_data(&m, &alpha, &nb.ktype) else { continue };
            let want = sq(&nb.ktype) - sq(&alpha) + jsq(&nb.ktype) - jsq(&alpha);
            prop_assert_eq!(&d.f1_plus + &d.f1_minus, want.clone());
            prop_assert_eq!(&d.f2_plus + &d.f2_minus, want);
        }
    }

    /// The 𝒟 terms carry a factor Ξ, so the swap needs Ξ flipped with r.
    #[test]
    fn case_data_swap_under_r_and_chirality(n in dim(), r in order(), alpha in ktype(0), df in prop_oneof![Just(-1i64), Just(1)], l in rational(30, 2)) {
        let (m, w) = (model(n, r.clone()), model(n, -r));
        let beta = KType { f: &alpha.f + df, q: 1, ..alpha.clone() };
        let lp = |_: &KType| Some(l.clone());
        let a = case1_data(&m, &alpha, &beta, &lp).unwrap();
        let b = case1_data(&w, &flip_xi(&alpha), &flip_xi(&beta), &lp).unwrap();
        prop_assert_eq!((&a.e_minus, &a.e_plus), (&b.e_plus, &b.e_minus));

        for nb in neighbors(&beta).present {
            let a = case3_data(&m, &beta, &nb.ktype, &lp).unwrap();
            let b = case3_data(&w, &flip_xi(&beta), &flip_xi(&nb.ktype), &lp).unwrap();
            prop_assert_eq!((&a.p_minus, &a.p_plus), (&b.p_plus, &b.p_minus));
        }

        for nb in neighbors(&alpha).present {
            let (Ok(a), Ok(b)) = (case2_data(&m, &alpha, &nb.ktype), case2_data(&w, &flip_xi(&alpha), &flip_xi(&nb.ktype))) else { continue };
            prop_assert_eq!((&a.f1_minus, &a.f1_plus), (&b.f1_plus, &b.f1_minus));
            prop_assert_eq!((&a.f2_minus, &a.f2_plus), (&b.f2_plus, &b.f2_minus));
        }
    }

    #[test]
    fn d_block_sees_only_the_dirac_label(n in dim(), r in order(), a in ktype(0), f in -12i64..12, xi in sign()) {
        let m = model(n, r);
        let b = KType { f: q(2 * f + 1, 2), xi, ..a.clone() };
        prop_assert_eq!(d_block(&m, &a, &NoL), d_block(&m, &b, &NoL));
        prop_assert_eq!(d_block(&m, &a, &NoL).d21, -m.n());
    }

    #[test]
    fn det_entries_swap_under_r_and_sign(r in order(), f in rational(20, 2), big_j in rational(20, 2), xi in sign(), s in sign(), d in 0usize..6) {
        let d = Direction::all().nth(d).unwrap();
        let a = mult2_entry(&r, &f, &big_j, xi, s, d, Fidelity::Corrected);
        let b = mult2_entry(&-r.clone(), &f, &big_j, xi, -s, d, Fidelity::Corrected);
        prop_assert_eq!(&a.numerator, &b.denominator);
        prop_assert_eq!(&a.denominator, &b.numerator);
    }

    #[test]
    fn phases_multiply_mod_four(a in -40i64..40, b in -40i64..40) {
        prop_assert_eq!(Phase::new(a) * Phase::new(b), Phase::new(a + b));
        prop_assert_eq!(Phase::new(a) * Phase::new(a).inverse(), Phase::ONE);
        prop_assert_eq!(Phase::new(a).is_real(), a % 2 == 0);
    }

    #[test]
    fn series_division_undoes_multiplication(
        a in proptest::collection::vec(rational(9, 4), 1..5),
        b in proptest::collection::vec(rational(9, 4), 1..5),
    ) {
        prop_assume!(!b[0].is_zero());
        let poly = |c: &[Rational]| c.iter().enumerate().fold(Series::from(Rational::zero()), |acc, (i, x)| {
            let mut term = Series::from(x.clone());
            for _ in 0..i {
                term = term * Series::variable();
            }
            acc + term
        });
        let (pa, pb) = (poly(&a), poly(&b));
        let back = (pa.clone() * pb.clone()).try_div(&pb).unwrap();
        prop_assert_eq!(back.limit(), pa.limit());
        prop_assert_eq!((pa.clone() - pa).limit(), Limit::Finite(Rational::zero()));
    }

    #[test]
    fn rational_field_agrees_with_series(a in rational(50, 9), b in rational(50, 9)) {
        prop_assume!(!b.is_zero());
        let exact = a.try_div(&b).unwrap();
        let series = Series::from(a).try_div(&Series::from(b)).unwrap();
        prop_assert_eq!(series.limit(), Limit::Finite(exact));
    }

    #[test]
    fn reduction_respects_sign_of_shift(x in rational(40, 8)) {
        let g = GammaQuotient::new(Rational::one(), Phase::ONE, [(&x + 1, 1), (x.clone(), -1)]);
        match ratio_reduced(&g, &GammaQuotient::constant(Phased::one())).unwrap() {
            Reduced::Finite(v) => prop_assert_eq!(v, Phased::real(x)),
            other => prop_assert!(x.is_nonpositive_integer(), "{}", other.label()),
        }
    }
}
