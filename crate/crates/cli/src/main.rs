//! `twistor`: spectrum tables, single blocks, neighbor diagrams, the
//! verification suites and the `L` calibration.

mod format;
mod rows;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use twistor_spectra::exact::Rational;
use twistor_spectra::ktypes::{KType, Lattice, Params, Sign};
use twistor_spectra::spectra::Region;
use twistor_spectra::{Fidelity, Model};

use format::Format;

#[derive(Parser)]
#[command(name = "twistor", version, about = "Exact spectra of intertwining operators on twistor fields over S^1 x S^(n-1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One row per K-type in the region: Z on multiplicity 1, block coefficients on multiplicity 2.
    Spectrum(Common),
    /// The 2x2 block at one multiplicity-2 type.
    Block {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        point: Point,
    },
    /// The 3x2 neighbor layout with quotient-matrix entries.
    Neighbors {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        point: Point,
        /// 0 for multiplicity 2, 1 for multiplicity 1.
        #[arg(long, default_value_t = 1)]
        q: u8,
    },
    /// Run every verification suite; exit 1 on any FAIL.
    Verify(Common),
    /// Recover L on the multiplicity-1 types of the region.
    Calibrate(Common),
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Dimension of the sphere factor plus one; even and at least 4.
    #[arg(long, default_value_t = 4)]
    n: u32,
    /// Half the operator order, as "p/q" or an integer.
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    r: String,
    #[arg(long, default_value = "-9/2", allow_hyphen_values = true)]
    f_min: String,
    #[arg(long, default_value = "9/2", allow_hyphen_values = true)]
    f_max: String,
    #[arg(long, default_value = "9/2")]
    j_max: String,
    /// Chirality filter: +1, -1 or both.
    #[arg(long, default_value = "both", allow_hyphen_values = true)]
    xi: String,
    /// Sign filter on the last weight entry: +1, -1 or both.
    #[arg(long, default_value = "both", allow_hyphen_values = true)]
    eps: String,
    #[arg(long, value_enum, default_value_t = LatticeArg::Half)]
    lattice: LatticeArg,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the printed forms of the three misprinted formulas.
    #[arg(long)]
    strict_paper: bool,
}

/// A single K-type for `block` and `neighbors`; Ξ and ε come from `--xi`
/// and `--eps`, defaulting to +1.
#[derive(Args, Clone, Debug)]
struct Point {
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long)]
    j: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LatticeArg {
    Int,
    Half,
}

/// Validated run configuration; also echoed into JSON output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub n: u32,
    pub r: Rational,
    pub f_min: Rational,
    pub f_max: Rational,
    pub j_max: Rational,
    pub xi: Vec<Sign>,
    pub eps: Vec<Sign>,
    pub lattice: Lattice,
    pub strict_paper: bool,
    #[serde(skip)]
    pub format: Format,
}

impl RunConfig {
    pub fn model(&self) -> Model {
        let params = Params::new(self.n, self.r.clone(), self.lattice).expect("validated");
        let fidelity = if self.strict_paper { Fidelity::StrictPaper } else { Fidelity::Corrected };
        Model::new(params).with_fidelity(fidelity)
    }

    pub fn region(&self) -> Region {
        Region::new(self.f_min.clone(), self.f_max.clone(), self.j_max.clone()).with_xi(self.xi.clone())
    }
}

/// Marks errors in the invocation itself (exit 2) as opposed to failures
/// found by a run (exit 1).
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn rational(name: &str, s: &str) -> Result<Rational> {
    s.parse().map_err(|_| usage(format!("--{name}: cannot parse {s:?} as a rational")))
}

fn signs(name: &str, s: &str) -> Result<Vec<Sign>> {
    match s.trim() {
        "both" => Ok(Sign::BOTH.to_vec()),
        "+1" | "1" | "+" => Ok(vec![Sign::Plus]),
        "-1" | "-" => Ok(vec![Sign::Minus]),
        other => Err(usage(format!("--{name}: expected +1, -1 or both, got {other:?}"))),
    }
}

fn config(c: &Common) -> Result<RunConfig> {
    let r = rational("r", &c.r)?;
    let lattice = match c.lattice {
        LatticeArg::Int => Lattice::Integer,
        LatticeArg::Half => Lattice::Half,
    };
    Params::new(c.n, r.clone(), lattice).map_err(|e| usage(e.to_string()))?;
    Ok(RunConfig {
        n: c.n,
        r,
        f_min: rational("f-min", &c.f_min)?,
        f_max: rational("f-max", &c.f_max)?,
        j_max: rational("j-max", &c.j_max)?,
        xi: signs("xi", &c.xi)?,
        eps: signs("eps", &c.eps)?,
        lattice,
        strict_paper: c.strict_paper,
        format: c.format,
    })
}

fn point(cfg: &RunConfig, p: &Point, q: u8) -> Result<KType> {
    let pick = |v: &[Sign], name: &str| match v {
        [s] => Ok(*s),
        _ if v.len() == 2 => Ok(Sign::Plus),
        _ => bail!("--{name} is empty"),
    };
    let params = Params::new(cfg.n, cfg.r.clone(), cfg.lattice).expect("validated");
    params
        .ktype(pick(&cfg.xi, "xi")?, rational("f", &p.f)?, rational("j", &p.j)?, q, pick(&cfg.eps, "eps")?)
        .map_err(|e| usage(e.to_string()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Spectrum(c) => {
            let cfg = config(&c)?;
            emit(&c.out, &rows::spectrum(&cfg)?)?;
            Ok(true)
        }
        Command::Block { common, point: p } => {
            let cfg = config(&common)?;
            let k = point(&cfg, &p, 0)?;
            emit(&common.out, &rows::block(&cfg, &k)?)?;
            Ok(true)
        }
        Command::Neighbors { common, point: p, q } => {
            let cfg = config(&common)?;
            if q > 1 {
                return Err(usage("--q must be 0 or 1"));
            }
            let k = point(&cfg, &p, q)?;
            emit(&common.out, &rows::neighbors(&cfg, &k)?)?;
            Ok(true)
        }
        Command::Verify(c) => {
            let cfg = config(&c)?;
            let (text, failure) = rows::verify(&cfg)?;
            emit(&c.out, &text)?;
            if let Some(f) = &failure {
                eprintln!("first failing edge: {f}");
            }
            Ok(failure.is_none())
        }
        Command::Calibrate(c) => {
            let cfg = config(&c)?;
            let (text, ok) = rows::calibrate(&cfg)?;
            emit(&c.out, &text)?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
