//! Row construction for each subcommand.

use anyhow::Result;
use serde::{Deserialize, Serialize};

use twistor_spectra::exact::{ratio_reduced, GammaQuotient, Phase, Phased, Reduced};
use twistor_spectra::ktypes::{interface_square, neighbors as neighborhood, Column, Direction, KType, Row};
use twistor_spectra::report::{Counts, SuiteReport, TransitionReport};
use twistor_spectra::spectra::{
    block2x2, block_limit, calibrate_l, interface_coefficients, mult1_quotient_matrix, mult2_det_quotient_matrix,
    run_all, z_of, CalibrationReport, SpectraError,
};

use crate::format::{self, g15, numeric_of, Format};
use crate::RunConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub xi: String,
    pub f: String,
    pub j: String,
    pub q: u8,
    pub eps: String,
    pub multiplicity: u8,
    pub dirac: String,
    pub z_exact: String,
    pub z_relative: String,
    pub relative_to: String,
    pub z_numeric: String,
    pub c11: String,
    pub c12: String,
    pub c21: String,
    pub c22: String,
    pub factor_exact: String,
    pub factor_numeric: String,
    pub note: String,
}

const SPECTRUM_HEADERS: [&str; 18] = [
    "xi", "f", "j", "q", "eps", "multiplicity", "dirac", "z_exact", "z_relative", "relative_to", "z_numeric", "c11",
    "c12", "c21", "c22", "factor_exact", "factor_numeric", "note",
];

fn label(k: &KType) -> String {
    format!("({}; {}, {}, {}, {})", k.f, k.j, k.q, k.xi, k.eps)
}

fn exact_or_blank(g: &GammaQuotient) -> String {
    match g.reduce() {
        Ok(r) => r.label(),
        Err(_) => String::new(),
    }
}

/// K-types of the region in (Ξ, f, j, ε) order, multiplicity 2 first on ties.
fn ktypes(cfg: &RunConfig) -> Vec<KType> {
    let params = cfg.model().params;
    let region = cfg.region();
    let mut all: Vec<KType> = region
        .centers(&params, 0)
        .into_iter()
        .chain(region.centers(&params, 1))
        .filter(|k| cfg.eps.contains(&k.eps))
        .collect();
    all.sort_by(|a, b| (a.xi, &a.f, &a.j, a.eps, a.q).cmp(&(b.xi, &b.f, &b.j, b.eps, b.q)));
    all
}

fn blank_row(cfg: &RunConfig, k: &KType) -> SpectrumRow {
    let model = cfg.model();
    SpectrumRow {
        xi: k.xi.to_string(),
        f: k.f.to_string(),
        j: k.j.to_string(),
        q: k.q,
        eps: k.eps.to_string(),
        multiplicity: if k.q == 0 { 2 } else { 1 },
        dirac: model.j_signed(k).to_string(),
        z_exact: String::new(),
        z_relative: String::new(),
        relative_to: String::new(),
        z_numeric: String::new(),
        c11: String::new(),
        c12: String::new(),
        c21: String::new(),
        c22: String::new(),
        factor_exact: String::new(),
        factor_numeric: String::new(),
        note: String::new(),
    }
}

pub fn spectrum_rows(cfg: &RunConfig) -> Vec<SpectrumRow> {
    let model = cfg.model();
    let all = ktypes(cfg);
    // first multiplicity-1 type with a finite, nonzero Z
    let base = all.iter().filter(|k| k.q == 1).find(|k| {
        let z = z_of(&model, k);
        !z.has_pole_flag() && !z.has_zero_flag()
    });
    let base_z = base.map(|k| z_of(&model, k));
    all.iter()
        .map(|k| {
            let mut row = blank_row(cfg, k);
            if k.q == 1 {
                let z = z_of(&model, k);
                row.z_exact = exact_or_blank(&z);
                row.z_numeric = numeric_of(&z);
                if let (Some(b), Some(bz)) = (base, &base_z) {
                    if let Ok(r) = ratio_reduced(&z, bz) {
                        row.z_relative = r.label();
                        row.relative_to = label(b);
                    }
                }
            } else {
                match block2x2(&model, k) {
                    Ok(b) => {
                        let c = &b.coefficients;
                        row.c11 = c[0][0].to_string();
                        row.c12 = c[0][1].to_string();
                        row.c21 = c[1][0].to_string();
                        row.c22 = c[1][1].to_string();
                        row.factor_exact = exact_or_blank(&b.factor);
                        row.factor_numeric = numeric_of(&b.factor);
                    }
                    Err(e) => {
                        for cell in [&mut row.c11, &mut row.c12, &mut row.c21, &mut row.c22] {
                            *cell = "SINGULAR".into();
                        }
                        row.note = short_error(&e);
                    }
                }
            }
            row
        })
        .collect()
}

fn short_error(e: &SpectraError) -> String {
    match e {
        SpectraError::SingularCoefficient { which, .. } => format!("C{which} = 0"),
        other => other.to_string(),
    }
}

fn spectrum_cells(r: &SpectrumRow) -> Vec<String> {
    vec![
        r.xi.clone(),
        r.f.clone(),
        r.j.clone(),
        r.q.to_string(),
        r.eps.clone(),
        r.multiplicity.to_string(),
        r.dirac.clone(),
        r.z_exact.clone(),
        r.z_relative.clone(),
        r.relative_to.clone(),
        r.z_numeric.clone(),
        r.c11.clone(),
        r.c12.clone(),
        r.c21.clone(),
        r.c22.clone(),
        r.factor_exact.clone(),
        r.factor_numeric.clone(),
        r.note.clone(),
    ]
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    command: &'a str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn document<T: Serialize>(command: &str, cfg: &RunConfig, body: T) -> Result<String> {
    format::json(&Document { command, config: cfg, body })
}

pub fn spectrum(cfg: &RunConfig) -> Result<String> {
    let rows = spectrum_rows(cfg);
    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body {
                rows: Vec<SpectrumRow>,
            }
            document("spectrum", cfg, Body { rows })
        }
        Format::Csv => format::csv(&rows, &SPECTRUM_HEADERS),
        Format::Table => Ok(format::table(&SPECTRUM_HEADERS, &rows.iter().map(spectrum_cells).collect::<Vec<_>>())),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockRow {
    pub entry: String,
    pub coefficient: String,
    pub exact: String,
    pub numeric: String,
}

fn phased_numeric(v: &Phased) -> String {
    let x = v.value.to_f64();
    match v.phase {
        p if p == Phase::ONE => g15(x),
        p if p == Phase::MINUS_ONE => g15(-x),
        p if p == Phase::I => format!("{}*i", g15(x)),
        _ => format!("{}*i", g15(-x)),
    }
}

pub fn block(cfg: &RunConfig, k: &KType) -> Result<String> {
    let model = cfg.model();
    let c = interface_coefficients(&model, k);
    let mut rows = Vec::new();
    let mut factor = String::new();
    let mut factor_numeric = String::new();
    let mut via_limit = false;
    let names = ["1,1", "1,2", "2,1", "2,2"];
    match block2x2(&model, k) {
        Ok(b) => {
            factor = b.factor.to_string();
            factor_numeric = numeric_of(&b.factor);
            let reduced = b.factor.reduce().ok();
            let fnum = twistor_spectra::exact::evaluate_numeric(&b.factor).ok();
            for (name, (i, j)) in names.iter().zip([(0, 0), (0, 1), (1, 0), (1, 1)]) {
                let coef = &b.coefficients[i][j];
                let exact = match &reduced {
                    Some(Reduced::Finite(v)) => (&Phased::real(coef.clone()) * v).to_string(),
                    Some(other) if !coef.is_zero() => other.label(),
                    Some(_) => "INDETERMINATE".into(),
                    None => String::new(),
                };
                let numeric = match fnum {
                    Some(v) => {
                        let (x, p) = v.parts();
                        let y = coef.to_f64() * x;
                        if p == Phase::ONE { g15(y) } else { format!("{}*i", g15(y)) }
                    }
                    None => "POLE".into(),
                };
                rows.push(BlockRow { entry: name.to_string(), coefficient: coef.to_string(), exact, numeric });
            }
        }
        Err(SpectraError::SingularCoefficient { .. }) => {
            via_limit = true;
            let entries = block_limit(&model, k)?;
            for (name, (i, j)) in names.iter().zip([(0, 0), (0, 1), (1, 0), (1, 1)]) {
                let v = &entries[i][j];
                rows.push(BlockRow {
                    entry: name.to_string(),
                    coefficient: "SINGULAR".into(),
                    exact: v.to_string(),
                    numeric: phased_numeric(v),
                });
            }
        }
        Err(e) => return Err(e.into()),
    }
    let headers = ["entry", "coefficient", "exact", "numeric"];
    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body {
                center: String,
                c: Vec<String>,
                factor: String,
                factor_numeric: String,
                via_limit: bool,
                entries: Vec<BlockRow>,
            }
            let body = Body {
                center: label(k),
                c: c.iter().map(|x| x.to_string()).collect(),
                factor,
                factor_numeric,
                via_limit,
                entries: rows,
            };
            document("block", cfg, body)
        }
        Format::Csv => format::csv(&rows, &headers),
        Format::Table => {
            let mut out = format!("center {}\n", label(k));
            for (i, x) in c.iter().enumerate() {
                out += &format!("C{} = {x}\n", i + 1);
            }
            if via_limit {
                out += "a coefficient vanishes; entries are limits along f\n";
            } else {
                out += &format!("factor = {factor} ~ {factor_numeric}\n");
            }
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.entry.clone(), r.coefficient.clone(), r.exact.clone(), r.numeric.clone()])
                .collect();
            Ok(out + "\n" + &format::table(&headers, &cells))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeighborRow {
    pub direction: String,
    pub status: String,
    pub f: String,
    pub j: String,
    pub eps: String,
    pub entry: String,
    pub value: String,
}

pub fn neighbor_rows(cfg: &RunConfig, center: &KType) -> Vec<NeighborRow> {
    let model = cfg.model();
    let matrix = if center.q == 1 {
        mult1_quotient_matrix(&model, center)
    } else {
        mult2_det_quotient_matrix(&model, center)
    };
    let hood = neighborhood(center);
    Direction::all()
        .map(|d| match hood.present.iter().find(|n| n.direction == d) {
            Some(n) => {
                let e = matrix.get(d).expect("same neighborhood");
                NeighborRow {
                    direction: d.label(),
                    status: "present".into(),
                    f: n.ktype.f.to_string(),
                    j: n.ktype.j.to_string(),
                    eps: n.ktype.eps.to_string(),
                    entry: e.to_string(),
                    value: e.reduce().label(),
                }
            }
            None => NeighborRow {
                direction: d.label(),
                status: "absent".into(),
                f: String::new(),
                j: String::new(),
                eps: String::new(),
                entry: String::new(),
                value: String::new(),
            },
        })
        .collect()
}

pub fn neighbors(cfg: &RunConfig, center: &KType) -> Result<String> {
    let rows = neighbor_rows(cfg, center);
    let square = if center.q == 0 { interface_square(&cfg.model().params, center).ok() } else { None };
    let headers = ["direction", "status", "f", "j", "eps", "entry", "value"];
    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body {
                center: String,
                neighbors: Vec<NeighborRow>,
                interface: Option<[String; 4]>,
            }
            let interface = square.map(|s| [label(&s.alpha1), label(&s.alpha2), label(&s.beta1), label(&s.beta2)]);
            document("neighbors", cfg, Body { center: label(center), neighbors: rows, interface })
        }
        Format::Csv => format::csv(&rows, &headers),
        Format::Table => {
            let cell = |row: Row, col: Column| {
                let d = Direction::new(row, col).label();
                let r = rows.iter().find(|r| r.direction == d).expect("all directions");
                if r.status == "absent" {
                    "absent".to_string()
                } else {
                    format!("(f={}, j={}, eps={}) {}", r.f, r.j, r.eps, r.value)
                }
            };
            let grid: Vec<Vec<String>> = Row::ALL
                .iter()
                .map(|&row| {
                    let name = match row {
                        Row::Top => "j+1",
                        Row::Middle => "j, -eps",
                        Row::Bottom => "j-1",
                    };
                    vec![name.to_string(), cell(row, Column::Left), cell(row, Column::Right)]
                })
                .collect();
            let mut out = format!("center {}\n\n", label(center));
            out += &format::table(&["", "f-1", "f+1"], &grid);
            if let Some(s) = square {
                out += &format!(
                    "\ninterface square\n  alpha1 {}\n  alpha2 {}\n  beta1  {}\n  beta2  {}\n",
                    label(&s.alpha1),
                    label(&s.alpha2),
                    label(&s.beta1),
                    label(&s.beta2)
                );
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub suite: String,
    pub checks: usize,
    pub pass: usize,
    pub pass_flagged: usize,
    pub fail: usize,
    pub skipped_degenerate: usize,
    pub skipped_singular: usize,
    pub skipped_pole: usize,
    pub limit_edges: usize,
    pub first_failure: String,
}

fn suite_row(s: &SuiteReport) -> SuiteRow {
    let Counts { pass, pass_flagged, fail, skipped_degenerate, skipped_singular, skipped_pole } = s.counts.clone();
    SuiteRow {
        suite: s.name.clone(),
        checks: s.counts.total(),
        pass,
        pass_flagged,
        fail,
        skipped_degenerate,
        skipped_singular,
        skipped_pole,
        limit_edges: s.limit_edges,
        first_failure: s.first_failure().map(|t| t.to_string()).unwrap_or_default(),
    }
}

/// The report text and the first failing transition, if any.
pub fn verify(cfg: &RunConfig) -> Result<(String, Option<String>)> {
    let suites = run_all(&cfg.model(), &cfg.region());
    let failure = suites.iter().find_map(|s| s.first_failure().map(|t| format!("[{}] {t}", s.name)));
    let rows: Vec<SuiteRow> = suites.iter().map(suite_row).collect();
    let headers = [
        "suite", "checks", "pass", "pass_flagged", "fail", "skipped_degenerate", "skipped_singular", "skipped_pole",
        "limit_edges", "first_failure",
    ];
    let text = match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Suite<'a> {
                #[serde(flatten)]
                row: &'a SuiteRow,
                notes: &'a [String],
                failures: Vec<&'a TransitionReport>,
            }
            #[derive(Serialize)]
            struct Body<'a> {
                passed: bool,
                suites: Vec<Suite<'a>>,
            }
            let body = Body {
                passed: failure.is_none(),
                suites: suites
                    .iter()
                    .zip(&rows)
                    .map(|(s, row)| Suite {
                        row,
                        notes: &s.notes,
                        failures: s.transitions.iter().filter(|t| t.failed()).collect(),
                    })
                    .collect(),
            };
            document("verify", cfg, body)?
        }
        Format::Csv => format::csv(&rows, &headers)?,
        Format::Table => {
            let mut out = String::new();
            for s in &suites {
                out += &format!("{}\n", s.summary());
                for note in &s.notes {
                    out += &format!("  {note}\n");
                }
            }
            out += if failure.is_none() { "all suites pass\n" } else { "FAIL\n" };
            out
        }
    };
    Ok((text, failure))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub xi: String,
    pub f: String,
    pub j: String,
    pub eps: String,
    pub dirac: String,
    pub d33: String,
    pub l: String,
    pub l_minus_dirac: String,
    pub anchored: bool,
}

/// The `L` table and whether the system was consistent.
pub fn calibrate(cfg: &RunConfig) -> Result<(String, bool)> {
    let model = cfg.model();
    let (rows, report, error) = match calibrate_l(&model, &cfg.region()) {
        Ok(cal) => {
            let rows: Vec<CalibrationRow> = cal
                .entries
                .values()
                .filter(|e| cfg.eps.contains(&e.ktype.eps))
                .map(|e| {
                    let dirac = model.j_signed(&e.ktype);
                    CalibrationRow {
                        xi: e.ktype.xi.to_string(),
                        f: e.ktype.f.to_string(),
                        j: e.ktype.j.to_string(),
                        eps: e.ktype.eps.to_string(),
                        d33: e.d33.to_string(),
                        l: e.l.to_string(),
                        l_minus_dirac: (&e.l - &dirac).to_string(),
                        dirac: dirac.to_string(),
                        anchored: e.anchored,
                    }
                })
                .collect();
            (rows, Some(cal.report), None)
        }
        Err(e) => (Vec::new(), None, Some(e.to_string())),
    };
    let headers = ["xi", "f", "j", "eps", "dirac", "d33", "l", "l_minus_dirac", "anchored"];
    let text = match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body {
                consistent: bool,
                error: Option<String>,
                report: Option<CalibrationReport>,
                rows: Vec<CalibrationRow>,
            }
            document("calibrate", cfg, Body { consistent: error.is_none(), error: error.clone(), report, rows })?
        }
        Format::Csv => format::csv(&rows, &headers)?,
        Format::Table => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.xi.clone(),
                        r.f.clone(),
                        r.j.clone(),
                        r.eps.clone(),
                        r.dirac.clone(),
                        r.d33.clone(),
                        r.l.clone(),
                        r.l_minus_dirac.clone(),
                        r.anchored.to_string(),
                    ]
                })
                .collect();
            let mut out = format::table(&headers, &cells);
            match (&report, &error) {
                (Some(r), _) => {
                    out += &format!(
                        "\n{} unknowns, {} differences, {} anchor equations, {} equations checked, {} closed cycles\n",
                        r.unknowns, r.difference_edges, r.anchor_equations, r.equations_checked, r.cycles_checked
                    );
                    out += &format!(
                        "case 1 pairs: both relations {}, one {}, neither {}\n",
                        r.case1_both, r.case1_one, r.case1_neither
                    );
                }
                (None, Some(e)) => out += &format!("\ninconsistent: {e}\n"),
                _ => {}
            }
            out
        }
    };
    Ok((text, error.is_none()))
}
