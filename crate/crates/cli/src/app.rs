use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use orelab_core::finiteness::{
    directly_finite_brute, one_sided_inverse_demo_with, skew_poly_finiteness_demo,
    stably_finite_upto, FinitenessReport, DEFAULT_BUDGET,
};
use orelab_core::lazy::umat_direct_finiteness_demo;
use orelab_core::modmap::{
    bounded_degree_kernel, brute_injective, brute_surjective, search_epi, search_mono,
    SearchMode,
};
use orelab_core::morphism::resolve_pair;
use orelab_core::ore::{LawCheckConfig, OreRing};
use orelab_core::series::BaseFiniteness;
use orelab_core::suites::{run_suite, SuiteParams, SUITES};
use orelab_core::{builtin_morphisms, make_ring, Check, ModuleMap, Report, Ring, Side};

use crate::ast::Ast;
use crate::eval::{parse_expression, Context};
use crate::{exit, CliError};

#[derive(Parser, Debug)]
#[command(name = "orelab", version, about = "Calculator and verification suites for Ore extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression in a ring.
    Eval {
        /// Ring descriptor, e.g. `Poly(Z,y)` or `M2(Z/2)`.
        #[arg(long)]
        ring: String,
        /// Build the Ore extension of the ring with this endomorphism.
        #[arg(long)]
        sigma: Option<String>,
        /// σ-derivation of the Ore extension.
        #[arg(long, requires = "sigma")]
        delta: Option<String>,
        /// Name of the Ore variable.
        #[arg(long, default_value = "x")]
        var: String,
        /// Truncation used by `theta`.
        #[arg(long, default_value_t = 8)]
        prec: usize,
        expr: String,
    },
    /// Run a named suite, `all`, or `list` the suites.
    Suite {
        name: String,
        #[arg(long, default_value_t = 16)]
        window: usize,
        #[arg(long, default_value_t = 8)]
        prec: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Coefficient ring replacing the suite's defaults.
        #[arg(long)]
        base: Option<String>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Queries about a module map given by a matrix.
    Map {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value = "left")]
        side: Side,
        /// Rows of the matrix, e.g. `[[1, 0], [0, y]]`.
        #[arg(long)]
        matrix: Option<String>,
        #[command(subcommand)]
        action: MapAction,
    },
    /// Exhaustive finiteness checks over enumerable rings.
    Finiteness {
        #[command(subcommand)]
        which: FinitenessCmd,
    },
    /// Worked demonstrations.
    Demo {
        #[command(subcommand)]
        which: DemoCmd,
    },
}

#[derive(Subcommand, Debug)]
enum MapAction {
    /// Injectivity or surjectivity by enumeration.
    Check { property: MapProperty },
    /// Look for a monomorphism or epimorphism R^n -> R^m.
    Search {
        kind: SearchKind,
        n: usize,
        m: usize,
        /// Sample this many random matrices instead of enumerating.
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Kernel vectors with polynomial entries of bounded degree.
    Kernel {
        #[arg(long)]
        degree: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MapProperty {
    Inj,
    Surj,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SearchKind {
    Mono,
    Epi,
}

#[derive(Subcommand, Debug)]
enum FinitenessCmd {
    /// rs = 1 implies sr = 1, over every pair.
    Direct {
        #[arg(long)]
        ring: String,
    },
    /// Direct finiteness of M_k(R) for k up to `--upto`.
    Stable {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        upto: usize,
    },
}

#[derive(Subcommand, Debug)]
enum DemoCmd {
    /// xy = 1 but yx != 1 in Z[y][x; const_term, coeff_shift].
    OneSidedInverse {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pairs used for the σ-derivation law.
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// One-sided inverses in R[[x;σ]] are two-sided when R is directly finite.
    SkewFiniteness {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value = "id")]
        sigma: String,
        #[arg(long, default_value_t = 8)]
        prec: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Take direct finiteness of a non-enumerable base on trust.
        #[arg(long)]
        assume_directly_finite: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// The inverse of I + (superdiagonal ones) in UMat(R), through the series ring.
    UmatFiniteness {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 8)]
        prec: usize,
        #[arg(long)]
        assume_directly_finite: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return exit::USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return exit::PASS;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit::USAGE
        }
    }
}

fn budget() -> Result<u64, CliError> {
    match std::env::var("ORELAB_BUDGET") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("ORELAB_BUDGET must be a non-negative integer, got `{s}`"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn status(passed: bool) -> i32 {
    if passed {
        exit::PASS
    } else {
        exit::CHECK_FAILED
    }
}

fn emit(report: &Report, json: Option<&PathBuf>, out: &mut dyn Write) -> Result<i32, CliError> {
    write!(out, "{report}")?;
    if let Some(path) = json {
        std::fs::write(path, report.to_json() + "\n")?;
    }
    Ok(status(report.passed()))
}

fn base_finiteness(ring: &Ring, assume: bool) -> Result<BaseFiniteness, CliError> {
    if assume {
        Ok(BaseFiniteness::Asserted)
    } else if ring.capabilities().enumerable {
        Ok(BaseFiniteness::BruteForce { budget: budget()? })
    } else {
        Err(CliError::Usage(format!(
            "{} is not enumerable; pass --assume-directly-finite to take its direct finiteness on trust",
            ring.id()
        )))
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Eval {
            ring,
            sigma,
            delta,
            var,
            prec,
            expr,
        } => {
            let mut r = make_ring(&ring)?;
            if let Some(s) = sigma {
                let (s, d) = resolve_pair(&r, &s, delta.as_deref())?;
                r = OreRing::with_config(s, d, &var, LawCheckConfig::default())?;
            }
            let ctx = Context::new(r).with_precision(prec);
            let e = ctx.eval(&parse_expression(&expr, &ctx)?)?;
            writeln!(out, "{e}")?;
            Ok(exit::PASS)
        }
        Command::Suite {
            name,
            window,
            prec,
            seed,
            count,
            base,
            json,
        } => {
            if name == "list" {
                for (n, desc, _) in SUITES {
                    writeln!(out, "{n:<20} {desc}")?;
                }
                return Ok(exit::PASS);
            }
            let params = SuiteParams {
                seed,
                window,
                prec,
                count,
                base,
                budget: budget()?,
            };
            emit(&run_suite(&name, &params)?, json.as_ref(), out)
        }
        Command::Map {
            ring,
            side,
            matrix,
            action,
        } => map(&make_ring(&ring)?, side, matrix.as_deref(), action, out),
        Command::Finiteness { which } => {
            let rep = match which {
                FinitenessCmd::Direct { ring } => directly_finite_brute(&make_ring(&ring)?, budget()?)?,
                FinitenessCmd::Stable { ring, upto } => {
                    stably_finite_upto(&make_ring(&ring)?, upto, budget()?)?
                }
            };
            finiteness(&rep, out)
        }
        Command::Demo { which } => match which {
            DemoCmd::OneSidedInverse { seed, count, json } => {
                emit(&one_sided_inverse_demo_with(seed, count)?, json.as_ref(), out)
            }
            DemoCmd::SkewFiniteness {
                ring,
                sigma,
                prec,
                seed,
                count,
                assume_directly_finite,
                json,
            } => {
                let r = make_ring(&ring)?;
                let s = builtin_morphisms(&sigma, &r)?.into_endo()?;
                let bf = base_finiteness(&r, assume_directly_finite)?;
                emit(&skew_poly_finiteness_demo(&s, prec, seed, count, bf)?, json.as_ref(), out)
            }
            DemoCmd::UmatFiniteness {
                ring,
                prec,
                assume_directly_finite,
                json,
            } => {
                let r = make_ring(&ring)?;
                let bf = base_finiteness(&r, assume_directly_finite)?;
                emit(&umat_direct_finiteness_demo(&r, prec, bf)?, json.as_ref(), out)
            }
        },
    }
}

fn finiteness(rep: &FinitenessReport, out: &mut dyn Write) -> Result<i32, CliError> {
    writeln!(out, "{rep}")?;
    Ok(status(rep.holds()))
}

/// Evaluates a `[[..], ..]` literal entrywise in `ring`.
fn parse_matrix(ring: &Ring, text: &str, side: Side) -> Result<ModuleMap, CliError> {
    let ctx = Context::new(ring.clone());
    let shape_err = || CliError::Usage("--matrix must be a nonempty list of equal-length rows".into());
    let Ast::List(rows) = crate::parser::parse(text)? else {
        return Err(shape_err());
    };
    let mut out = Vec::new();
    for row in &rows {
        let Ast::List(entries) = row else {
            return Err(shape_err());
        };
        out.push(
            entries
                .iter()
                .map(|e| Ok(ctx.eval(e)?.into_value()))
                .collect::<Result<Vec<_>, CliError>>()?,
        );
    }
    Ok(ModuleMap::from_rows(ring, out, side)?)
}

fn map(
    ring: &Ring,
    side: Side,
    matrix: Option<&str>,
    action: MapAction,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let need = || -> Result<ModuleMap, CliError> {
        let text = matrix.ok_or_else(|| CliError::Usage("this action needs --matrix".into()))?;
        parse_matrix(ring, text, side)
    };
    match action {
        MapAction::Check { property } => {
            let f = need()?;
            let mut report = Report::new("map_check", 0)
                .param("ring", ring.id())
                .param("side", side.to_string())
                .param("matrix", f.format_matrix());
            match property {
                MapProperty::Inj => {
                    let r = brute_injective(&f, budget()?)?;
                    let mut c = Check::new("injective", r.injective);
                    if let Some((u, v)) = r.collision {
                        c = c.with_witness(format!(
                            "{} and {} have the same image",
                            f.format_vector(&u),
                            f.format_vector(&v)
                        ));
                    }
                    report.push(c);
                }
                MapProperty::Surj => {
                    let r = brute_surjective(&f, budget()?)?;
                    let mut c = Check::new("surjective", r.surjective);
                    if let Some(t) = r.unreached {
                        c = c.with_witness(format!("{} is not reached", f.format_vector(&t)));
                    }
                    report.push(c);
                }
            }
            emit(&report, None, out)
        }
        MapAction::Search {
            kind,
            n,
            m,
            random,
            seed,
        } => {
            let mode = match random {
                Some(trials) => SearchMode::Randomized { trials, seed },
                None => SearchMode::Exhaustive,
            };
            let outcome = match kind {
                SearchKind::Mono => search_mono(ring, n, m, side, mode, budget()?)?,
                SearchKind::Epi => search_epi(ring, n, m, side, mode, budget()?)?,
            };
            let what = match kind {
                SearchKind::Mono => "monomorphism",
                SearchKind::Epi => "epimorphism",
            };
            write!(out, "{side} {what} R^{n} -> R^{m} over {}: {}", ring.id(), outcome.label())?;
            match outcome.found() {
                Some(f) => writeln!(out, " {}", f.format_matrix())?,
                None => writeln!(out)?,
            }
            Ok(exit::PASS)
        }
        MapAction::Kernel { degree } => {
            let f = need()?;
            let basis = bounded_degree_kernel(&f, degree)?;
            writeln!(out, "kernel vectors of degree <= {degree}: {}", basis.len())?;
            for v in &basis {
                writeln!(out, "  {}", f.format_vector(v))?;
            }
            Ok(exit::PASS)
        }
    }
}
