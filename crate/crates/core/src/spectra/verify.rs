use std::collections::BTreeMap;

use crate::exact::{evaluate_numeric, q, ratio_reduced, Limit, Phased, Rational, Reduced, SlopedQuotient};
use crate::ktypes::{interface_square, neighbors, Column, Direction, KType, Row};
use crate::operators::{LProvider, OperatorError};
use crate::report::{Check, SuiteReport, TransitionReport, Verdict};
use crate::{FactorReading, Model};

use super::block::{block2x2, block_limit, rarita_schwinger_block};
use super::calibrate::{calibrate_l, Calibration};
use super::functions::{b33_from_z, exchanged_rs_eigenvalue, mult2_product_of, mult2_sloped_of, z_of, z_sloped_of, z_value};
use super::quotients::{mult1_quotient_matrix, mult2_det_quotient_matrix, mult2_entry, QuotientEntry};
use super::relations::{ratio_series, case1_residual, case2_residual, case3_residual, det_quotient_residual, det_residual, Evaluated};
use super::{Region, SpectraError};

fn transition(model: &Model, case: &str, from: &KType, to: Option<&KType>, direction: Option<Direction>) -> TransitionReport {
    TransitionReport {
        case: case.into(),
        r: model.r().to_string(),
        from: from.clone(),
        to: to.cloned(),
        direction: direction.map(|d| d.label()),
        via_limit: false,
        checks: Vec::new(),
    }
}

fn limit_label(l: &Limit) -> String {
    match l {
        Limit::Finite(x) => x.to_string(),
        Limit::Pole => "POLE".into(),
        Limit::Unknown => "UNKNOWN".into(),
    }
}

/// Verdict on a residual vector that must vanish.
fn residual_check(name: &str, result: Result<Evaluated, SpectraError>, t: &mut TransitionReport) -> Check {
    match result {
        Ok(e) => {
            t.via_limit |= e.via_limit;
            if e.all_zero() {
                return Check::new(name, Verdict::Pass, "");
            }
            let detail = e.residuals.iter().map(limit_label).collect::<Vec<_>>().join(" ");
            let nonzero = e.residuals.iter().any(|r| match r {
                Limit::Finite(x) => !x.is_zero(),
                Limit::Pole => true,
                Limit::Unknown => false,
            });
            if nonzero {
                Check::new(name, Verdict::Fail, format!("residual {detail}"))
            } else {
                Check::new(name, Verdict::SkippedSingular, format!("precision exhausted: {detail}"))
            }
        }
        Err(e) => error_check(name, e),
    }
}

fn error_check(name: &str, e: SpectraError) -> Check {
    let v = match &e {
        SpectraError::Operator(OperatorError::DegenerateTarget { .. }) => Verdict::SkippedDegenerate,
        SpectraError::Exact { .. } => Verdict::SkippedPole,
        _ => Verdict::SkippedSingular,
    };
    Check::new(name, v, e.to_string())
}

/// Compares two reduced quotients: equal finite values pass, matching
/// poles or indeterminate forms pass flagged.
fn compare_reduced(name: &str, lhs: &Reduced, rhs: &Reduced) -> Check {
    match (lhs, rhs) {
        (Reduced::Finite(a), Reduced::Finite(b)) if a == b => Check::new(name, Verdict::Pass, a.to_string()),
        (Reduced::Pole, Reduced::Pole) | (Reduced::Indeterminate, Reduced::Indeterminate) => {
            Check::new(name, Verdict::PassFlagged, lhs.label())
        }
        _ => Check::new(name, Verdict::Fail, format!("{} vs {}", lhs.label(), rhs.label())),
    }
}

/// `Z(1/2; f, J, Ξε) = −¼(f − ΞεJ)` and `B₃₃ = √−1 (f − ΞεJ)` on every
/// label in the region.
pub fn closed_form_suite(model: &Model, region: &Region) -> SuiteReport {
    let m = Model { params: model.params.with_r(q(1, 2)), ..model.clone() };
    let mut suite = SuiteReport::new("closed-form");
    let labels = region.centers(&m.params, 0).into_iter().chain(region.centers(&m.params, 1));
    for k in labels {
        let mut t = transition(&m, "z at r=1/2", &k, None, None);
        let big_j = m.j_unsigned(&k);
        let z = z_value(&m.params, &k.f, &big_j, k.xi_eps());
        let want = Phased::real((&k.f - k.xi_eps().rational() * &big_j) * q(-1, 4));
        t.checks.push(match z.reduce() {
            Ok(Reduced::Finite(v)) if v == want => Check::new("z", Verdict::Pass, v.to_string()),
            Ok(other) => Check::new("z", Verdict::Fail, format!("{} vs {want}", other.label())),
            Err(e) => Check::new("z", Verdict::Fail, e.to_string()),
        });
        let expect = exchanged_rs_eigenvalue(&k.f, &big_j, k.xi_eps());
        t.checks.push(match b33_from_z(&z).reduce() {
            Ok(Reduced::Finite(v)) if v == expect => Check::new("b33", Verdict::Pass, v.to_string()),
            Ok(other) => Check::new("b33", Verdict::Fail, format!("{} vs {expect}", other.label())),
            Err(e) => Check::new("b33", Verdict::Fail, e.to_string()),
        });
        suite.push(t);
    }
    suite
}

/// `num / den` against a quotient entry. Where either side meets a zero or
/// a pole, both are compared as limits along `f`, since the formal
/// cancellations on the two sides need not agree.
fn coherence_check(
    num: &SlopedQuotient,
    den: &SlopedQuotient,
    entry: &QuotientEntry,
    column: Column,
    at: &KType,
    t: &mut TransitionReport,
) -> Check {
    let (gn, gd) = (num.at_origin(), den.at_origin());
    let touches = |g: &crate::exact::GammaQuotient| g.factors().iter().any(|x| x.arg.is_integer() && x.arg <= Rational::zero());
    let singular = touches(&gn) || touches(&gd) || entry.numerator.iter().chain(&entry.denominator).any(Rational::is_zero);
    if !singular {
        return match ratio_reduced(&gn, &gd) {
            Ok(lhs) => compare_reduced("ratio", &lhs, &entry.reduce()),
            Err(e) => Check::new("ratio", Verdict::Fail, e.to_string()),
        };
    }
    t.via_limit = true;
    let slope = match column {
        Column::Left => -Rational::one(),
        Column::Right => Rational::one(),
    };
    let lhs = match ratio_series(num, den, at) {
        Ok(s) => s.limit(),
        Err(e) => return error_check("ratio", e),
    };
    let rhs = match entry.series(&slope) {
        Ok(s) => s.limit(),
        Err(e) => return error_check("ratio", SpectraError::Exact { source: e, ktype: at.clone() }),
    };
    match (&lhs, &rhs) {
        (Limit::Finite(a), Limit::Finite(b)) if a == b => Check::new("ratio", Verdict::Pass, a.to_string()),
        (Limit::Pole, Limit::Pole) => Check::new("ratio", Verdict::PassFlagged, "POLE"),
        (Limit::Unknown, _) | (_, Limit::Unknown) => {
            Check::new("ratio", Verdict::SkippedSingular, format!("{} vs {}", limit_label(&lhs), limit_label(&rhs)))
        }
        _ => Check::new("ratio", Verdict::Fail, format!("{} vs {}", limit_label(&lhs), limit_label(&rhs))),
    }
}

fn cached(cache: &mut BTreeMap<KType, SlopedQuotient>, k: &KType, make: impl Fn(&KType) -> SlopedQuotient) -> SlopedQuotient {
    cache.entry(k.clone()).or_insert_with(|| make(k)).clone()
}

/// `Z(target)/Z(center)` against the multiplicity-1 quotient matrix.
pub fn mult1_coherence_suite(model: &Model, region: &Region) -> SuiteReport {
    let mut suite = SuiteReport::new("mult1-quotients");
    let mut cache = BTreeMap::new();
    let z_sloped_of = |k: &KType| z_sloped_of(model, k);
    for center in region.centers(&model.params, 1) {
        let matrix = mult1_quotient_matrix(model, &center);
        let zc = cached(&mut cache, &center, z_sloped_of);
        for nb in neighbors(&center).present {
            let mut t = transition(model, "case 3", &center, Some(&nb.ktype), Some(nb.direction));
            let entry = matrix.get(nb.direction).expect("same neighborhood");
            let zn = cached(&mut cache, &nb.ktype, z_sloped_of);
            let check = coherence_check(&zn, &zc, entry, nb.direction.column, &center, &mut t);
            t.checks.push(check);
            suite.push(t);
        }
    }
    suite
}

/// Gamma-product ratios against the determinant quotient matrix.
pub fn det_coherence_suite(model: &Model, region: &Region) -> SuiteReport {
    let mut suite = SuiteReport::new("det-quotients");
    let mut cache = BTreeMap::new();
    let mult2_sloped_of = |k: &KType| mult2_sloped_of(model, k);
    for center in region.centers(&model.params, 0) {
        let matrix = mult2_det_quotient_matrix(model, &center);
        let pc = cached(&mut cache, &center, mult2_sloped_of);
        for nb in neighbors(&center).present {
            let mut t = transition(model, "det", &center, Some(&nb.ktype), Some(nb.direction));
            let entry = matrix.get(nb.direction).expect("same neighborhood");
            let pn = cached(&mut cache, &nb.ktype, mult2_sloped_of);
            let check = coherence_check(&pn, &pc, entry, nb.direction.column, &center, &mut t);
            t.checks.push(check);
            suite.push(t);
        }
    }
    suite
}

/// The block at `r = 1/2` against the closed-form Rarita–Schwinger block.
pub fn remark_suite(model: &Model, region: &Region) -> SuiteReport {
    let m = Model { params: model.params.with_r(q(1, 2)), ..model.clone() };
    let mut suite = SuiteReport::new("remark");
    for k in region.centers(&m.params, 0) {
        let mut t = transition(&m, "block at r=1/2", &k, None, None);
        let expect = rarita_schwinger_block(&m, &k);
        let got = match block2x2(&m, &k) {
            Ok(b) => b.factor.value().map(|factor| {
                let e = |i: usize, j: usize| &Phased::real(b.coefficients[i][j].clone()) * &factor;
                [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
            }).map_err(|source| SpectraError::Exact { source, ktype: k.clone() }),
            Err(SpectraError::SingularCoefficient { .. }) => {
                t.via_limit = true;
                block_limit(&m, &k)
            }
            Err(e) => Err(e),
        };
        match got {
            Ok(got) => {
                for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    let name = format!("entry({},{})", i + 1, j + 1);
                    t.checks.push(if got[i][j] == expect[i][j] {
                        Check::new(name, Verdict::Pass, got[i][j].to_string())
                    } else {
                        Check::new(name, Verdict::Fail, format!("{} vs {}", got[i][j], expect[i][j]))
                    });
                }
            }
            Err(e) => t.checks.push(error_check("block", e)),
        }
        suite.push(t);
    }
    suite
}

/// `B^β M₁ = M₂ B^α` on every multiplicity-2 edge.
pub fn case2_suite(model: &Model, region: &Region) -> SuiteReport {
    let mut suite = SuiteReport::new("case2");
    for center in region.centers(&model.params, 0) {
        for nb in neighbors(&center).present {
            let mut t = transition(model, "case 2", &center, Some(&nb.ktype), Some(nb.direction));
            let check = residual_check("B^b M1 = M2 B^a", case2_residual(model, &center, &nb.ktype), &mut t);
            t.checks.push(check);
            suite.push(t);
        }
    }
    suite
}

fn case1_checks(model: &Model, alpha: &KType, beta: &KType, l: &dyn LProvider, t: &mut TransitionReport) {
    match case1_residual(model, alpha, beta, l) {
        Ok(e) => {
            let (first, second) = e.residuals.split_at(2);
            let via = e.via_limit;
            let part = |r: &[Limit]| Ok(Evaluated { residuals: r.to_vec(), via_limit: via });
            let c = residual_check("beta->alpha", part(first), t);
            t.checks.push(c);
            let c = residual_check("alpha->beta", part(second), t);
            t.checks.push(c);
        }
        Err(e) => t.checks.push(error_check("case 1", e)),
    }
}

/// Both Case 1 relations between `(f; j, ½, …)` and `(f±1; j, 3/2, …)`.
pub fn case1_suite(model: &Model, calibration: &Calibration, region: &Region) -> SuiteReport {
    let mut suite = SuiteReport::new("case1");
    for alpha in region.centers(&model.params, 0) {
        if alpha.j == Rational::half() {
            continue;
        }
        for df in [-1, 1] {
            let beta = KType { f: &alpha.f + df, q: 1, ..alpha.clone() };
            let mut t = transition(model, "case 1", &alpha, Some(&beta), None);
            case1_checks(model, &alpha, &beta, calibration, &mut t);
            suite.push(t);
        }
    }
    suite
}

/// `B₃₃^α P⁻ = P⁺ B₃₃^β` on every multiplicity-1 edge, with calibrated `L`.
pub fn case3_suite(model: &Model, calibration: &Calibration, region: &Region) -> SuiteReport {
    let mut suite = SuiteReport::new("case3");
    for center in region.centers(&model.params, 1) {
        for nb in neighbors(&center).present {
            let mut t = transition(model, "case 3", &center, Some(&nb.ktype), Some(nb.direction));
            let check = residual_check("P- = P+ rho", case3_residual(model, &center, &nb.ktype, calibration), &mut t);
            t.checks.push(check);
            suite.push(t);
        }
    }
    suite
}

/// Around each interface square: determinant propagation, the determinant
/// quotient, Case 1 on both vertical edges and Case 3 across the top.
pub fn interface_suite(model: &Model, calibration: &Calibration, region: &Region) -> SuiteReport {
    let mut suite = SuiteReport::new("interface");
    let top_right = Direction::new(Row::Top, Column::Right);
    let other = Model {
        reading: match model.reading {
            FactorReading::ShiftedF => FactorReading::SameF,
            FactorReading::SameF => FactorReading::ShiftedF,
        },
        ..model.clone()
    };
    let mut tally = [[0usize; 2]; 2];
    let mut boundary = 0;
    for center in region.centers(&model.params, 0) {
        let square = match interface_square(&model.params, &center) {
            Ok(s) => s,
            Err(_) => {
                boundary += 1;
                continue;
            }
        };
        let (a1, a2) = (&square.alpha1, &square.alpha2);
        let mut t = transition(model, "interface", a1, Some(a2), Some(top_right));
        let c = residual_check("det propagation", det_residual(model, a1, a2), &mut t);
        t.checks.push(c);
        let big_j = model.j_unsigned(a1);
        let mut entry = mult2_entry(model.r(), &a1.f, &big_j, a1.xi, a1.xi_eps(), top_right, model.fidelity);
        entry.offset = model.bump(crate::Mutation::Mult2Entry(top_right));
        let c = residual_check("det M2/det M1", det_quotient_residual(model, a1, a2, &entry, &Rational::one()), &mut t);
        t.checks.push(c);
        case1_checks(model, a1, &square.beta1, calibration, &mut t);
        case1_checks(model, a2, &square.beta2, calibration, &mut t);
        let c = residual_check("case 3", case3_residual(model, &square.beta1, &square.beta2, calibration), &mut t);
        t.checks.push(c);
        for (slot, m) in [(0, model), (1, &other)] {
            let mut scratch = t.clone();
            let c = residual_check("det", det_residual(m, a1, a2), &mut scratch);
            match c.verdict {
                Verdict::Pass => tally[slot][0] += 1,
                Verdict::Fail => tally[slot][1] += 1,
                _ => {}
            }
        }
        suite.push(t);
    }
    let name = |r: FactorReading| match r {
        FactorReading::ShiftedF => "factor at f+1",
        FactorReading::SameF => "factor at f",
    };
    suite.note(format!(
        "reading {} (selected): det propagation PASS {} FAIL {}",
        name(model.reading),
        tally[0][0],
        tally[0][1]
    ));
    suite.note(format!(
        "reading {}: det propagation PASS {} FAIL {}",
        name(other.reading),
        tally[1][0],
        tally[1][1]
    ));
    if boundary > 0 {
        suite.note(format!("{boundary} centers at j = 1/2 have no interface square"));
    }
    suite
}

/// Floating-point ratios against exact ones on the given edges; both
/// endpoints must share a multiplicity.
pub fn numeric_agreement_suite(model: &Model, edges: &[(KType, KType)], tolerance: f64) -> SuiteReport {
    let mut suite = SuiteReport::new("numeric");
    for (a, b) in edges {
        let mut t = transition(model, "numeric", a, Some(b), None);
        let (ga, gb) = if a.q == 1 {
            (z_of(model, a), z_of(model, b))
        } else {
            (mult2_product_of(model, a), mult2_product_of(model, b))
        };
        // a vanishing endpoint leaves nothing for floating point to compare
        if [&ga, &gb].iter().any(|g| g.has_zero_flag() || g.has_pole_flag()) {
            t.checks.push(Check::new("ratio", Verdict::SkippedPole, "endpoint is a zero or pole"));
            suite.push(t);
            continue;
        }
        let exact = match ratio_reduced(&gb, &ga) {
            Ok(Reduced::Finite(v)) if !v.is_zero() => v,
            Ok(other) => {
                t.checks.push(Check::new("ratio", Verdict::SkippedPole, other.label()));
                suite.push(t);
                continue;
            }
            Err(e) => {
                t.checks.push(Check::new("ratio", Verdict::SkippedPole, e.to_string()));
                suite.push(t);
                continue;
            }
        };
        let check = match (evaluate_numeric(&gb), evaluate_numeric(&ga)) {
            (Ok(nb), Ok(na)) => {
                let ((xb, pb), (xa, pa)) = (nb.parts(), na.parts());
                let numeric = xb / xa;
                let want = exact.value.to_f64();
                let rel = ((numeric - want) / want).abs();
                if pb * pa.inverse() == exact.phase && rel <= tolerance {
                    Check::new("ratio", Verdict::Pass, format!("{rel:e}"))
                } else {
                    Check::new("ratio", Verdict::Fail, format!("numeric {numeric:e} exact {want:e} rel {rel:e}"))
                }
            }
            (Err(e), _) | (_, Err(e)) => Check::new("ratio", Verdict::SkippedPole, e.to_string()),
        };
        t.checks.push(check);
        suite.push(t);
    }
    suite
}

/// Every suite applicable to the model. `L` is calibrated on the region
/// widened by one step so all neighbors are covered.
pub fn run_all(model: &Model, region: &Region) -> Vec<SuiteReport> {
    let mut out = Vec::new();
    let mut cal_suite = SuiteReport::new("calibration");
    let seed = KType { xi: crate::ktypes::Sign::Plus, f: region.f_min.clone(), j: q(3, 2), q: 1, eps: crate::ktypes::Sign::Plus };
    let mut t = transition(model, "calibrate L", &seed, None, None);
    let calibration = match calibrate_l(model, &region.widened()) {
        Ok(c) => {
            let r = &c.report;
            t.checks.push(Check::new(
                "consistent",
                Verdict::Pass,
                format!(
                    "{} unknowns, {} differences, {} anchor equations, {} cycles",
                    r.unknowns, r.difference_edges, r.anchor_equations, r.cycles_checked
                ),
            ));
            cal_suite.note(format!(
                "case 1 pairs: both relations {}, one {}, neither {}",
                r.case1_both, r.case1_one, r.case1_neither
            ));
            let offsets: Vec<String> = r.l_minus_dirac.iter().map(|x| x.to_string()).collect();
            cal_suite.note(format!("L - J_a over anchored entries: {{{}}}", offsets.join(", ")));
            if r.unanchored_components > 0 {
                cal_suite.note(format!("{} components without an anchor", r.unanchored_components));
            }
            Some(c)
        }
        Err(e) => {
            t.checks.push(Check::new("consistent", Verdict::Fail, e.to_string()));
            None
        }
    };
    cal_suite.push(t);
    out.push(cal_suite);
    out.push(mult1_coherence_suite(model, region));
    out.push(det_coherence_suite(model, region));
    out.push(case2_suite(model, region));
    if let Some(c) = &calibration {
        out.push(case1_suite(model, c, region));
        out.push(case3_suite(model, c, region));
        out.push(interface_suite(model, c, region));
    }
    if model.r() == &q(1, 2) {
        out.push(closed_form_suite(model, region));
        out.push(remark_suite(model, region));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktypes::{Lattice, Params};
    use crate::{Fidelity, Mutation};

    fn model(n: u32, r: Rational) -> Model {
        Model::new(Params::new(n, r, Lattice::Half).unwrap())
    }

    fn small() -> Region {
        Region::new(q(-5, 2), q(5, 2), q(5, 2))
    }

    #[test]
    fn every_suite_passes_by_default() {
        let suites = run_all(&model(4, q(1, 2)), &small());
        let names: Vec<&str> = suites.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(
            names,
            ["calibration", "mult1-quotients", "det-quotients", "case2", "case1", "case3", "interface", "closed-form", "remark"]
        );
        for s in &suites {
            assert!(s.passed(), "{}", s.summary());
            assert!(s.counts.total() > 0, "{}", s.name);
        }
    }

    #[test]
    fn strict_paper_fails_the_middle_right_column() {
        let m = model(6, q(3, 2)).with_fidelity(Fidelity::StrictPaper);
        let s = det_coherence_suite(&m, &small());
        let failing: Vec<_> = s.transitions.iter().filter(|t| t.failed()).collect();
        assert!(!failing.is_empty());
        assert!(failing.iter().all(|t| t.direction.as_deref() == Some("middle-right")));
    }

    #[test]
    fn degenerate_targets_are_skipped() {
        let s = case2_suite(&model(6, q(5, 2)), &small());
        assert!(s.counts.skipped_degenerate > 0);
        assert_eq!(s.counts.fail, 0);
    }

    #[test]
    fn a_bumped_entry_is_localized() {
        let d = Direction::new(Row::Top, Column::Left);
        let m = model(4, q(7, 3)).with_mutation(Some(Mutation::Mult1Entry(d)));
        let s = mult1_coherence_suite(&m, &small());
        let f = s.first_failure().expect("mutation is caught");
        assert_eq!(f.direction.as_deref(), Some(d.label().as_str()));
    }

    #[test]
    fn numeric_edges_agree() {
        let m = model(8, q(5, 2));
        let a = m.params.ktype(crate::ktypes::Sign::Plus, q(1, 2), q(3, 2), 1, crate::ktypes::Sign::Minus).unwrap();
        let edges: Vec<_> = neighbors(&a).present.into_iter().map(|n| (a.clone(), n.ktype)).collect();
        let s = numeric_agreement_suite(&m, &edges, 1e-10);
        assert!(s.passed(), "{}", s.summary());
        assert!(s.counts.pass > 0);
    }
}
