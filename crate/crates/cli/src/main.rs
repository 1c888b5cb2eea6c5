use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;

use mckay::filtration::{generic_final_slope, reeb_periods, verify_profile, HamiltonianProfile};
use mckay::groups::DEFAULT_CAP;
use mckay::io::{
    emit_report, parse_spec, render_ascii, render_svg, Diagram, Format, InputFile, PageKind,
    BUILTIN_NAMES,
};
use mckay::oracle::oracle_suite;
use mckay::rational::{parse_rational, to_fraction_string};
use mckay::{exit, load_group, predict, spec_label};

/// Age gradings, Reeb orbit indices and McKay predictions for finite
/// subgroups of SL(n, C).
#[derive(Parser)]
#[command(name = "mckay", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Group specification (JSON).
    file: PathBuf,
    /// Slope in turns, e.g. 3 or 5/2.
    #[arg(long, default_value = "3")]
    slope: String,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: classes, orbits, pages, Betti numbers, checks.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Draw one E1 page.
    Diagram {
        #[command(flatten)]
        input: Input,
        /// sc, sc+ or esc+.
        #[arg(long)]
        page: String,
        #[arg(long, conflicts_with = "svg")]
        ascii: bool,
        #[arg(long)]
        svg: bool,
    },
    /// Run every invariant check and oracle; one PASS/FAIL line each.
    Check {
        #[command(flatten)]
        input: Input,
    },
    /// Verify the Hamiltonian profile (from the file's "profile" section or
    /// the standard one) against the group's Reeb periods.
    Profile {
        /// Group specification (JSON).
        file: PathBuf,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// List the built-in group names.
    ListBuiltins,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<mckay::Error> for Failure {
    fn from(e: mckay::Error) -> Self {
        Failure {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

fn parse_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: exit::PARSE,
        message: message.into(),
    }
}

fn read_input(path: &Path) -> Result<InputFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
    parse_spec(&text).map_err(|e| {
        let err = mckay::Error::from(e);
        Failure {
            code: err.exit_code(),
            message: format!("{}: {err}", path.display()),
        }
    })
}

fn parse_slope(s: &str) -> Result<Rational64, Failure> {
    parse_rational(s)
        .filter(|q| *q > Rational64::from_integer(0))
        .ok_or_else(|| parse_failure(format!("invalid slope {s:?}: expected a positive rational")))
}

fn cap() -> Result<usize, Failure> {
    match std::env::var("MCKAY_CAP") {
        Ok(v) => v
            .parse()
            .map_err(|_| parse_failure(format!("MCKAY_CAP={v:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn report(input: &Input) -> Result<mckay::mckay::McKayReport, Failure> {
    let file = read_input(&input.file)?;
    let slope = parse_slope(&input.slope)?;
    Ok(mckay::analyze(&file.spec, slope, cap()?)?)
}

fn write_out(bytes: &[u8]) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)
        .and_then(|_| out.flush())
        .map_err(|e| Failure {
            code: exit::INTERNAL,
            message: e.to_string(),
        })
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Analyze { input, format } => {
            let format: Format = format.parse().map_err(|e: mckay::io::ReportError| parse_failure(e.to_string()))?;
            let r = report(&input)?;
            let bytes = emit_report(&r, format).map_err(|e| parse_failure(e.to_string()))?;
            write_out(&bytes)?;
            Ok(exit::SUCCESS)
        }
        Command::Diagram {
            input,
            page,
            ascii: _,
            svg,
        } => {
            let page: PageKind = page.parse().map_err(parse_failure)?;
            let r = report(&input)?;
            let d = Diagram::from_report(&r, page);
            let text = if svg { render_svg(&d) } else { render_ascii(&d) };
            write_out(text.as_bytes())?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            Ok(exit::SUCCESS)
        }
        Command::Check { input } => {
            let file = read_input(&input.file)?;
            let slope = parse_slope(&input.slope)?;
            let (sg, validation) = load_group(&file.spec, cap()?)?;
            let r = predict(&sg, &validation, slope).map_err(mckay::Error::from)?;
            let mut checks = r.checks.clone();
            checks.extend(oracle_suite(&sg));
            let mut out = format!("{} (order {})\n", spec_label(&file.spec), sg.group.order());
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("{status} {}", c.name));
                if let Some(d) = &c.detail {
                    out.push_str(&format!(": {d}"));
                }
                out.push('\n');
            }
            for w in file.spec.warnings().iter().chain(&r.warnings) {
                out.push_str(&format!("warning: {w}\n"));
            }
            write_out(out.as_bytes())?;
            Ok(if checks.iter().all(|c| c.passed) {
                exit::SUCCESS
            } else {
                exit::INTERNAL
            })
        }
        Command::Profile { file, format } => {
            let input = read_input(&file)?;
            let (sg, _) = load_group(&input.spec, cap()?)?;
            let order = sg.group.order();
            let spec = input.profile.unwrap_or_default();
            let default = generic_final_slope(Rational64::from_integer(3), order);
            let horizon = spec
                .final_slope
                .as_deref()
                .and_then(parse_rational)
                .unwrap_or(default);
            let periods = reeb_periods(&sg, horizon.ceil() + Rational64::from_integer(1));
            let profile = HamiltonianProfile::from_spec(&spec, &periods, default, order)
                .map_err(mckay::Error::from)?;
            let rep = verify_profile(&profile).map_err(mckay::Error::from)?;
            let bytes = match format.as_str() {
                "json" => {
                    let mut v = serde_json::to_vec_pretty(&serde_json::json!({
                        "final_slope": to_fraction_string(&horizon),
                        "r0": profile.r0,
                        "r1": profile.r1,
                        "r_flat": profile.r_flat,
                        "report": rep,
                    }))
                    .expect("serializable");
                    v.push(b'\n');
                    v
                }
                "text" => {
                    let mut s = format!(
                        "R0 = {:.6}  R1 = {:.6}  flat from {:.6}\n",
                        profile.r0, profile.r1, profile.r_flat
                    );
                    for c in &rep.checks {
                        let status = if c.passed { "PASS" } else { "FAIL" };
                        s.push_str(&format!("{status} {}", c.name));
                        if let Some(w) = &c.witness {
                            s.push_str(&format!(": {w}"));
                        }
                        s.push('\n');
                    }
                    for sl in &rep.slices {
                        s.push_str(&format!(
                            "slice period {:.6} rho {:.6} T {:.9}\n",
                            sl.period, sl.rho, sl.t
                        ));
                    }
                    s.into_bytes()
                }
                other => return Err(parse_failure(format!("unsupported format {other:?}"))),
            };
            write_out(&bytes)?;
            Ok(if rep.passed() {
                exit::SUCCESS
            } else {
                exit::VALIDATION
            })
        }
        Command::ListBuiltins => {
            let mut s = String::new();
            for (name, what) in BUILTIN_NAMES {
                s.push_str(&format!("{name:<22} {what}\n"));
            }
            write_out(s.as_bytes())?;
            Ok(exit::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
