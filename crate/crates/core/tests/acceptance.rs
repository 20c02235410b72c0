//! Acceptance criteria 1–8, each reported on one line.
//!
//! Runs as a plain binary so the lines are always printed; exits nonzero if
//! any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twistor_spectra::exact::{q, Rational};
use twistor_spectra::ktypes::{neighbors, Column, Direction, KType, Lattice, Params, Row};
use twistor_spectra::report::{SuiteReport, Verdict};
use twistor_spectra::spectra::{
    calibrate_l, case1_suite, case2_suite, closed_form_suite, det_coherence_suite, interface_suite,
    mult1_coherence_suite, numeric_agreement_suite, remark_suite, run_all, Region,
};
use twistor_spectra::{DEntry, Fidelity, Model, Mutation};

const DIMS: [u32; 3] = [4, 6, 8];

fn orders() -> Vec<Rational> {
    vec![q(1, 2), q(1, 1), q(3, 2), q(5, 2), q(7, 3)]
}

fn grid() -> Region {
    Region::new(q(-19, 2), q(19, 2), q(11, 2))
}

fn model(n: u32, r: Rational) -> Model {
    Model::new(Params::new(n, r, Lattice::Half).expect("valid parameters"))
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn first_failure(suites: &[SuiteReport]) -> Option<String> {
    suites.iter().find_map(|s| s.first_failure().map(|t| t.to_string()))
}

fn within(elapsed: Duration, budget: Duration) -> (bool, String) {
    (elapsed <= budget, format!("{:.2?} (budget {:?})", elapsed, budget))
}

fn tally(suites: &[SuiteReport]) -> (usize, usize, usize) {
    let count = |v| suites.iter().map(|s| s.counts.get(v)).sum::<usize>();
    let edges = suites.iter().map(|s| s.transitions.len()).sum();
    (edges, count(Verdict::Fail), suites.iter().map(|s| s.limit_edges).sum())
}

fn closed_form() -> Outcome {
    let start = Instant::now();
    let suites: Vec<_> = DIMS.iter().map(|&n| closed_form_suite(&model(n, q(1, 2)), &grid())).collect();
    let (time_ok, time) = within(start.elapsed(), Duration::from_secs(1));
    let (labels, fails, _) = tally(&suites);
    Outcome {
        pass: fails == 0 && labels > 0 && time_ok,
        detail: format!("{labels} labels, {fails} failing, {time}"),
    }
}

fn mult1_coherence() -> Outcome {
    let start = Instant::now();
    let mut suites = Vec::new();
    for n in DIMS {
        for r in orders() {
            suites.push(mult1_coherence_suite(&model(n, r), &grid()));
        }
    }
    let (time_ok, time) = within(start.elapsed(), Duration::from_secs(5));
    let (edges, fails, limits) = tally(&suites);
    let flagged: usize = suites.iter().map(|s| s.counts.pass_flagged).sum();
    Outcome {
        pass: fails == 0 && edges >= 2000 && time_ok,
        detail: format!("{edges} edges, {fails} failing, {flagged} pole-flagged, {limits} via limit, {time}"),
    }
}

fn det_coherence() -> Outcome {
    let start = Instant::now();
    let mut suites = Vec::new();
    for n in DIMS {
        for r in orders() {
            suites.push(det_coherence_suite(&model(n, r), &grid()));
        }
    }
    let (time_ok, time) = within(start.elapsed(), Duration::from_secs(5));
    let (edges, fails, _) = tally(&suites);

    let middle_right = Direction::new(Row::Middle, Column::Right).label();
    let mut strict_fails = 0;
    let mut strict_elsewhere = 0;
    for n in DIMS {
        for r in orders() {
            let m = model(n, r).with_fidelity(Fidelity::StrictPaper);
            for t in det_coherence_suite(&m, &grid()).transitions.iter().filter(|t| t.failed()) {
                strict_fails += 1;
                if t.direction.as_deref() != Some(middle_right.as_str()) {
                    strict_elsewhere += 1;
                }
            }
        }
    }
    Outcome {
        pass: fails == 0 && strict_fails > 0 && strict_elsewhere == 0 && time_ok,
        detail: format!(
            "{edges} edges, {fails} failing; strict: {strict_fails} failing, {strict_elsewhere} outside middle-right; {time}"
        ),
    }
}

fn remark() -> Outcome {
    let suites: Vec<_> = DIMS.iter().map(|&n| remark_suite(&model(n, q(1, 2)), &grid())).collect();
    let (blocks, fails, limits) = tally(&suites);
    let skipped: usize = suites.iter().map(|s| s.counts.skipped_singular + s.counts.skipped_pole).sum();
    Outcome {
        pass: fails == 0 && blocks > 0,
        detail: format!("{blocks} blocks, {fails} failing, {limits} via limit, {skipped} entries skipped"),
    }
}

fn case2() -> Outcome {
    let mut suites = Vec::new();
    for n in DIMS {
        for r in orders() {
            suites.push(case2_suite(&model(n, r), &grid()));
        }
    }
    let (edges, fails, limits) = tally(&suites);
    let degenerate: usize = suites.iter().map(|s| s.counts.skipped_degenerate).sum();
    Outcome {
        pass: fails == 0 && edges > 0,
        detail: format!("{edges} edges, {fails} failing, {degenerate} degenerate, {limits} via limit"),
    }
}

fn interface() -> Outcome {
    let mut squares = 0;
    let mut fails = 0;
    let mut cycles = 0;
    let mut case1_fails = 0;
    let mut problems = Vec::new();
    for n in DIMS {
        for r in orders() {
            let m = model(n, r);
            match calibrate_l(&m, &grid().widened()) {
                Ok(cal) => {
                    cycles += cal.report.cycles_checked;
                    if cal.report.cycles_checked == 0 || cal.report.case1_both == 0 {
                        problems.push(format!("n={n} r={}: no cycles or Case 1 anchors", m.r()));
                    }
                    let s = interface_suite(&m, &cal, &grid());
                    squares += s.transitions.len();
                    fails += s.counts.fail;
                    case1_fails += case1_suite(&m, &cal, &grid()).counts.fail;
                }
                Err(e) => problems.push(format!("n={n} r={}: {e}", m.r())),
            }
        }
    }
    Outcome {
        pass: fails == 0 && case1_fails == 0 && squares > 0 && problems.is_empty(),
        detail: format!(
            "{squares} squares, {fails} failing, {cycles} closed cycles, {case1_fails} case 1 failures{}",
            problems.first().map(|p| format!("; {p}")).unwrap_or_default()
        ),
    }
}

fn numeric() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7157);
    let wanted = 500;
    let mut checked = 0;
    let mut fails = 0;
    let mut worst = None;
    let mut attempts = 0;
    let models: Vec<Model> = DIMS.iter().flat_map(|&n| orders().into_iter().map(move |r| model(n, r))).collect();
    let centers: Vec<Vec<KType>> = models
        .iter()
        .map(|m| grid().centers(&m.params, 0).into_iter().chain(grid().centers(&m.params, 1)).collect())
        .collect();
    while checked < wanted && attempts < 20 * wanted {
        attempts += 1;
        let i = rng.gen_range(0..models.len());
        let center = centers[i].choose(&mut rng).expect("nonempty grid");
        let hood = neighbors(center);
        let Some(nb) = hood.present.choose(&mut rng) else { continue };
        let s = numeric_agreement_suite(&models[i], &[(center.clone(), nb.ktype.clone())], 1e-10);
        if s.counts.skipped_pole > 0 {
            continue;
        }
        checked += 1;
        if s.counts.fail > 0 {
            fails += 1;
            worst.get_or_insert_with(|| first_failure(&[s]).unwrap_or_default());
        }
    }
    Outcome {
        pass: checked == wanted && fails == 0,
        detail: format!(
            "{checked} non-pole edges, {fails} beyond 1e-10{}",
            worst.map(|w| format!("; {w}")).unwrap_or_default()
        ),
    }
}

fn mutations() -> Outcome {
    let region = Region::new(q(-5, 2), q(5, 2), q(5, 2));
    let mut all: Vec<Mutation> = (1..=6).map(Mutation::BlockCoefficient).collect();
    all.extend(DEntry::ALL.map(Mutation::D));
    all.extend(Direction::all().map(Mutation::Mult1Entry));
    all.extend(Direction::all().map(Mutation::Mult2Entry));
    let mut missed = Vec::new();
    for m in &all {
        let caught = [(4, q(1, 2)), (6, q(3, 2))].into_iter().any(|(n, r)| {
            run_all(&model(n, r).with_mutation(Some(*m)), &region).iter().any(|s| !s.passed())
        });
        if !caught {
            missed.push(format!("{m:?}"));
        }
    }
    let baseline_clean = [(4, q(1, 2)), (6, q(3, 2))]
        .into_iter()
        .all(|(n, r)| run_all(&model(n, r), &region).iter().all(SuiteReport::passed));
    Outcome {
        pass: missed.is_empty() && baseline_clean,
        detail: format!(
            "{} of {} mutations caught, unmutated baseline {}{}",
            all.len() - missed.len(),
            all.len(),
            if baseline_clean { "clean" } else { "FAILING" },
            if missed.is_empty() { String::new() } else { format!("; missed {}", missed.join(", ")) }
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("closed form at r = 1/2", closed_form),
        ("multiplicity-1 quotient coherence", mult1_coherence),
        ("determinant quotient coherence", det_coherence),
        ("block at r = 1/2 vs Rarita-Schwinger block", remark),
        ("case 2 matrix relation", case2),
        ("interface propagation and L calibration", interface),
        ("numeric agreement", numeric),
        ("mutation sanity", mutations),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {status} {name}: {}", i + 1, outcome.detail);
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
