//! `dimer`: reports on dimer models as JSON, drawings as SVG.
//!
//! Exit codes: 0 success, 1 invariant violation, 2 invalid input, 3 negative verdict.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use dimer_core::io::read_model;
use dimer_core::render::{render_domains, render_model, render_polygon};
use dimer_core::report::{self, Report, ThetaSource, Verdict};
use dimer_core::{catalog, DimerModel, Error};

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NEGATIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "dimer", version, about = "Dimer models on the torus: quivers, matchings, moduli and toric data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Model JSON file.
    model: Option<PathBuf>,
    /// Use a built-in model instead of a file.
    #[arg(long, value_name = "NAME")]
    example: Option<String>,
}

#[derive(Args)]
struct Seed {
    /// Seed for random draws; falls back to DIMER_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct Reference {
    /// Index of the reference matching (default: the first enumerated).
    #[arg(long = "ref", value_name = "IDX")]
    reference: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Overlay {
    Matching,
    Polygon,
    Domain,
}

#[derive(Subcommand)]
enum Command {
    /// Check the model and report its invariants.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// The dual quiver with its relations.
    Quiver {
        #[command(flatten)]
        source: Source,
    },
    /// Perfect matchings with their height changes.
    Matchings {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        reference: Reference,
        /// Draw this matching instead of printing JSON.
        #[arg(long, value_name = "I")]
        matching: Option<usize>,
        #[arg(long)]
        svg: bool,
    },
    /// Terms of the characteristic polynomial.
    Charpoly {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        reference: Reference,
    },
    /// The Newton polygon.
    Polygon {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        reference: Reference,
        #[arg(long)]
        svg: bool,
    },
    /// Non-degeneracy by three methods.
    Check {
        #[command(flatten)]
        source: Source,
    },
    /// Averaged R-charges.
    Rcharge {
        #[command(flatten)]
        source: Source,
    },
    /// A generic stability parameter for a matching.
    Theta {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_name = "I")]
        matching: Option<usize>,
        #[command(flatten)]
        seed: Seed,
    },
    /// Torus-fixed points, their charts and the fan certificate.
    FixedPoints {
        #[command(flatten)]
        source: Source,
        /// A JSON file of face id to rational, or `auto`.
        #[arg(long, value_name = "FILE|auto", default_value = "auto")]
        theta: String,
        #[command(flatten)]
        reference: Reference,
        #[command(flatten)]
        seed: Seed,
        #[arg(long)]
        svg: bool,
    },
    /// Cone, dual cone and Hilbert basis.
    Toric {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        reference: Reference,
    },
    /// Draw the model with an overlay.
    Render {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "matching")]
        overlay: Overlay,
        #[arg(long, value_name = "I")]
        matching: Option<usize>,
        #[arg(long, value_name = "FILE|auto", default_value = "auto")]
        theta: String,
        #[command(flatten)]
        reference: Reference,
        #[command(flatten)]
        seed: Seed,
    },
}

enum Output {
    Json(Report),
    Svg(String, Vec<String>),
}

fn load(source: &Source) -> Result<DimerModel, Error> {
    match (&source.model, &source.example) {
        (Some(_), Some(_)) => Err(Error::Argument("give a model file or --example, not both".into())),
        (None, None) => Err(Error::Argument("no model given; pass a file or --example <name>".into())),
        (Some(path), None) => read_model(path),
        (None, Some(name)) => catalog::named(name),
    }
}

fn seed(s: &Seed) -> Result<u64, Error> {
    if let Some(n) = s.seed {
        return Ok(n);
    }
    match std::env::var("DIMER_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Argument(format!("DIMER_SEED `{v}` is not a non-negative integer"))),
        Err(_) => Ok(0),
    }
}

fn theta_source(arg: &str) -> Result<ThetaSource, Error> {
    if arg == "auto" {
        return Ok(ThetaSource::Auto);
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| Error::Argument(format!("cannot read theta file `{arg}`: {e}")))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(ThetaSource::Given(v))
}

/// Loads and validates; an invalid model is reported and refused.
fn load_valid(source: &Source) -> Result<DimerModel, Error> {
    let model = load(source)?;
    dimer_core::tiling::ensure_valid(&model)?;
    Ok(model)
}

fn run(command: Command) -> Result<Output, Error> {
    Ok(match command {
        Command::Validate { source } => {
            let r = report::validate(&load(&source)?);
            Output::Json(r)
        }
        Command::Quiver { source } => Output::Json(report::quiver(&load_valid(&source)?)?),
        Command::Matchings {
            source,
            reference,
            matching,
            svg,
        } => {
            let model = load_valid(&source)?;
            if svg {
                let (_, d) = report::matching_at(&model, matching.or(reference.reference))?;
                let drawing = render_model(&model, Some(&d));
                Output::Svg(drawing.svg, drawing.warnings)
            } else {
                Output::Json(report::matchings(&model, reference.reference)?)
            }
        }
        Command::Charpoly { source, reference } => {
            Output::Json(report::charpoly(&load_valid(&source)?, reference.reference)?)
        }
        Command::Polygon {
            source,
            reference,
            svg,
        } => {
            let (r, p) = report::polygon(&load_valid(&source)?, reference.reference)?;
            if svg {
                Output::Svg(render_polygon(&p), Vec::new())
            } else {
                Output::Json(r)
            }
        }
        Command::Check { source } => Output::Json(report::check(&load_valid(&source)?)?),
        Command::Rcharge { source } => Output::Json(report::rcharge(&load_valid(&source)?)?),
        Command::Theta {
            source,
            matching,
            seed: s,
        } => Output::Json(report::theta(&load_valid(&source)?, matching, seed(&s)?)?),
        Command::FixedPoints {
            source,
            theta,
            reference,
            seed: s,
            svg,
        } => {
            let model = load_valid(&source)?;
            let src = theta_source(&theta)?;
            let seed = seed(&s)?;
            if svg {
                let (_, a) = report::fixed_points_analysis(&model, &src, reference.reference, seed)?;
                let drawing = render_domains(&model, &a);
                Output::Svg(drawing.svg, drawing.warnings)
            } else {
                Output::Json(report::fixed_points(&model, &src, reference.reference, seed)?)
            }
        }
        Command::Toric { source, reference } => {
            Output::Json(report::toric(&load_valid(&source)?, reference.reference)?)
        }
        Command::Render {
            source,
            overlay,
            matching,
            theta,
            reference,
            seed: s,
        } => {
            let model = load_valid(&source)?;
            match overlay {
                Overlay::Matching => {
                    let (_, d) = report::matching_at(&model, matching.or(reference.reference))?;
                    let drawing = render_model(&model, Some(&d));
                    Output::Svg(drawing.svg, drawing.warnings)
                }
                Overlay::Polygon => {
                    let (_, p) = report::polygon(&model, reference.reference)?;
                    Output::Svg(render_polygon(&p), Vec::new())
                }
                Overlay::Domain => {
                    let src = theta_source(&theta)?;
                    let (_, a) =
                        report::fixed_points_analysis(&model, &src, reference.reference, seed(&s)?)?;
                    let drawing = render_domains(&model, &a);
                    Output::Svg(drawing.svg, drawing.warnings)
                }
            }
        }
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) => EXIT_VIOLATION,
        Error::Precondition(_) => EXIT_NEGATIVE,
        Error::Parse(_)
        | Error::Structural { .. }
        | Error::InvalidModel(_)
        | Error::Argument(_)
        | Error::Capacity { .. } => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let validating = matches!(cli.command, Command::Validate { .. });
    match run(cli.command) {
        Ok(Output::Json(r)) => {
            println!("{}", serde_json::to_string_pretty(&r.json).expect("reports serialize"));
            match r.verdict {
                Verdict::Ok => ExitCode::SUCCESS,
                Verdict::Negative if validating => ExitCode::from(EXIT_INPUT),
                Verdict::Negative => ExitCode::from(EXIT_NEGATIVE),
                Verdict::Violation => ExitCode::from(EXIT_VIOLATION),
            }
        }
        Ok(Output::Svg(svg, warnings)) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            print!("{svg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
