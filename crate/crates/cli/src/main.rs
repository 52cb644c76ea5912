//! Command-line front end: exact Euler pairings, discriminants, walls,
//! destabilizer scans, rank-2 lattice arithmetic, and the golden-fixture
//! verifier. All numeric output is exact rational text; `--json` switches
//! any command to machine-readable output with the same numbers as
//! strings.

mod fixtures;
mod svg;

use clap::{Parser, Subcommand};
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use tiltwall::exactnum::{parse_rational, Rational};
use tiltwall::kuznetsov::{expected_dim, from_chern, serre_apply, serre_orbit, to_chern, KuClass};
use tiltwall::lattice::{chi1, chi2, ChernCharacter, TruncatedCharacter};
use tiltwall::tilt::numerical_wall;
use tiltwall::wallfinder::{
    derived_bound_report, scan_region_left, scan_vertical, FilterSet, ScanBounds, ScanError,
    ScanReport,
};

#[derive(Parser)]
#[command(name = "tiltwall", version, about = "Exact tilt-stability wall calculus on a cubic threefold")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Euler characteristic of a character, or the pairing against a second one.
    Chi {
        /// Character "r,c1,c2,c3" with rational components.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// Optional second character for the pairing.
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
    },
    /// H-discriminant of a truncated character "r,c1,c2".
    Delta {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Numerical wall of two truncated characters.
    Wall {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// Dump a decorative SVG of the wall.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Exhaustive candidate-destabilizer scans.
    Scan {
        #[command(subcommand)]
        which: ScanCommand,
    },
    /// Rank-2 lattice of the Kuznetsov component.
    Ku {
        #[command(subcommand)]
        which: KuCommand,
    },
    /// Discriminant-window bound report for a target.
    Bound {
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
    /// Run the golden fixture corpus and report each verdict.
    Verify {
        /// Directory of fixture files (each a JSON array of fixtures).
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
    },
}

#[derive(Subcommand)]
enum ScanCommand {
    /// Decompositions crossing the vertical line β = β₀.
    Vertical {
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long = "rank-max", default_value_t = 6)]
        rank_max: i64,
        /// Disable the admissible-region filters on both pieces.
        #[arg(long = "no-li")]
        no_li: bool,
    },
    /// Semicircular walls strictly left of the vertical wall.
    Left {
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long = "rank-max", default_value_t = 6)]
        rank_max: i64,
        #[arg(long = "no-li")]
        no_li: bool,
    },
}

#[derive(Subcommand)]
enum KuCommand {
    /// Express a character in the basis `([I], [S(I)])`.
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Character of a class "a,b".
    Compose {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Apply the numerical Serre action to a class "a,b".
    Serre {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// Compose with a shift (acts as -1).
        #[arg(long)]
        shift: bool,
    },
    /// Three-node orbit of a class under the Serre action.
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Expected moduli dimension 1 - χ(v, v) of a character.
    Dim {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
}

/// Failures carry their exit code: 1 verification, 2 parse, 3 domain.
#[derive(Debug)]
pub enum CliError {
    Verify(String),
    Parse(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Verify(m) | CliError::Parse(m) | CliError::Domain(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn parse_full(s: &str) -> Result<ChernCharacter, CliError> {
    s.parse().map_err(|e| CliError::Parse(format!("{e}")))
}

fn parse_trunc(s: &str) -> Result<TruncatedCharacter, CliError> {
    s.parse().map_err(|e| CliError::Parse(format!("{e}")))
}

fn parse_rat(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Parse(format!("{e}")))
}

fn parse_ku(s: &str) -> Result<KuClass, CliError> {
    s.parse().map_err(|e| CliError::Parse(format!("{e}")))
}

fn scan_error(e: ScanError) -> CliError {
    match e {
        ScanError::InvalidTarget { .. } | ScanError::UnusableTarget { .. } => {
            CliError::Domain(format!("InvalidTarget: {e}"))
        }
        ScanError::Domain(_) => CliError::Domain(format!("DomainError: {e}")),
        ScanError::Bounds(_) => CliError::Parse(format!("{e}")),
    }
}

fn emit_rational(json: bool, key: &str, value: &Rational) {
    if json {
        println!(r#"{{"{key}":"{value}"}}"#);
    } else {
        println!("{value}");
    }
}

fn print_scan_report(report: &ScanReport, json: bool) -> Result<(), CliError> {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("report serializes")
        );
        return Ok(());
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("target {}", report.target);
    println!(
        "{} candidate(s) enumerated, {} survivor(s)",
        report.survivors.len() + report.rejected.len(),
        report.survivors.len()
    );
    for c in &report.survivors {
        let alpha = c
            .alpha_sq_at_ref
            .as_ref()
            .map(|a| format!(" alpha_sq {a}"))
            .unwrap_or_default();
        println!("  p {}  q {}  wall {}{alpha}", c.p, c.q, c.wall);
        for (name, verdict) in &c.verdicts {
            if !matches!(verdict, tiltwall::wallfinder::Verdict::Pass) {
                println!("    [{name}] {verdict}");
            }
        }
    }
    if !report.counts.is_empty() {
        let summary: Vec<String> = report
            .counts
            .iter()
            .map(|(k, v)| format!("{k} {v}"))
            .collect();
        println!("counts: {}", summary.join(", "));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Chi { v, w } => {
            let v = parse_full(&v)?;
            let value = match w {
                Some(w) => chi2(&v, &parse_full(&w)?),
                None => chi1(&v),
            };
            emit_rational(cli.json, "chi", &value);
        }
        Command::Delta { v } => {
            let v = parse_trunc(&v)?;
            emit_rational(cli.json, "delta", &v.delta());
        }
        Command::Wall { v, w, svg } => {
            let wall = numerical_wall(&parse_trunc(&v)?, &parse_trunc(&w)?);
            if let Some(path) = svg {
                std::fs::write(&path, svg::render_wall(&wall))
                    .map_err(|e| CliError::Parse(format!("cannot write {}: {e}", path.display())))?;
            }
            if cli.json {
                println!("{}", serde_json::to_string(&wall).expect("wall serializes"));
            } else {
                println!("{wall}");
            }
        }
        Command::Scan { which } => {
            let report = match which {
                ScanCommand::Vertical { target, beta, rank_max, no_li } => {
                    let target = parse_trunc(&target)?;
                    let beta = parse_rat(&beta)?;
                    let bounds = ScanBounds::new(rank_max).map_err(scan_error)?;
                    let filters =
                        if no_li { FilterSet::without_li() } else { FilterSet::default() };
                    scan_vertical(&target, &beta, &bounds, &filters).map_err(scan_error)?
                }
                ScanCommand::Left { target, rank_max, no_li } => {
                    let target = parse_trunc(&target)?;
                    let bounds = ScanBounds::new(rank_max).map_err(scan_error)?;
                    let filters =
                        if no_li { FilterSet::without_li() } else { FilterSet::default() };
                    scan_region_left(&target, &bounds, &filters).map_err(scan_error)?
                }
            };
            print_scan_report(&report, cli.json)?;
        }
        Command::Ku { which } => match which {
            KuCommand::Decompose { v } => {
                let k = from_chern(&parse_full(&v)?)
                    .map_err(|e| CliError::Domain(format!("NotInLattice: {e}")))?;
                if cli.json {
                    println!(r#"{{"class":"{k}"}}"#);
                } else {
                    println!("{k}");
                }
            }
            KuCommand::Compose { v } => {
                let ch = to_chern(&parse_ku(&v)?);
                if cli.json {
                    println!(r#"{{"character":"{ch}"}}"#);
                } else {
                    println!("{ch}");
                }
            }
            KuCommand::Serre { v, shift } => {
                let k = serre_apply(&parse_ku(&v)?, shift);
                if cli.json {
                    println!(r#"{{"class":"{k}"}}"#);
                } else {
                    println!("{k}");
                }
            }
            KuCommand::Orbit { v } => {
                let orbit = serre_orbit(&parse_ku(&v)?);
                if cli.json {
                    let labels: Vec<String> = orbit.iter().map(|k| k.to_string()).collect();
                    println!("{}", serde_json::to_string(&labels).expect("orbit serializes"));
                } else {
                    let labels: Vec<String> = orbit.iter().map(|k| k.label()).collect();
                    println!("{}", labels.join(" -> "));
                }
            }
            KuCommand::Dim { v } => {
                emit_rational(cli.json, "dim", &expected_dim(&parse_full(&v)?));
            }
        },
        Command::Bound { target } => {
            let report = derived_bound_report(&parse_trunc(&target)?);
            if cli.json {
                println!("{}", serde_json::to_string(&report).expect("bound serializes"));
            } else {
                println!("{report}");
            }
        }
        Command::Verify { fixtures } => {
            fixtures::verify(&fixtures, cli.json)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
