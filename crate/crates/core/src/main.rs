use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sintegral::decider::DEFAULT_SEARCH_BOUND;
use sintegral::report::{decide_report, enumerate_report, generate_report, Report};
use sintegral::{CurveInput, PrimeSet, Result};

/// Decide whether a genus-zero affine curve over Q has infinitely many
/// S-integral points, and produce them.
#[derive(Parser)]
#[command(name = "sintegral", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the verdict and, when infinite, the witness.
    Decide(CurveArgs),
    /// Like decide, and list verified points when infinite.
    Generate {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
    },
    /// List every S-integral point in the search lattice of the bound.
    Enumerate(CurveArgs),
}

#[derive(Args)]
struct CurveArgs {
    /// Polynomial f in x and y; the curve is f = 0.
    #[arg(long, required_unless_present = "param", conflicts_with = "param")]
    curve: Option<String>,
    /// Comma-separated coordinate functions of t.
    #[arg(long)]
    param: Option<String>,
    /// Finite primes of S, comma-separated.
    #[arg(long, default_value = "")]
    primes: String,
    /// Height bound for the point search.
    #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
    bound: u64,
    #[arg(long)]
    assert_irreducible: bool,
    #[arg(long)]
    assert_proper: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl CurveArgs {
    fn input(&self) -> Result<(CurveInput, PrimeSet)> {
        let input = match (&self.curve, &self.param) {
            (Some(c), _) => CurveInput::parse_implicit(c, self.assert_irreducible)?,
            (None, Some(p)) => CurveInput::parse_param(p, self.assert_proper)?,
            (None, None) => unreachable!("clap requires one of --curve and --param"),
        };
        Ok((input, self.primes.parse()?))
    }

    fn emit(&self, r: &Report) -> ExitCode {
        match self.format {
            Format::Text => print!("{}", r.to_text()),
            Format::Json => println!("{}", r.to_json()),
        }
        ExitCode::from(r.exit_code() as u8)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Decide(args) => {
            let report = match args.input() {
                Ok((input, s)) => decide_report(&input, &s, args.bound),
                Err(e) => Report::error(&e),
            };
            args.emit(&report)
        }
        Command::Generate { curve: args, count } => {
            let report = match args.input() {
                Ok((input, s)) => generate_report(&input, &s, args.bound, count as usize),
                Err(e) => Report::error(&e),
            };
            args.emit(&report)
        }
        Command::Enumerate(args) => {
            let result = args
                .input()
                .and_then(|(input, s)| enumerate_report(&input, &s, args.bound));
            match result {
                Ok(r) => {
                    match args.format {
                        Format::Text => print!("{}", r.to_text()),
                        Format::Json => println!("{}", r.to_json()),
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => args.emit(&Report::error(&e)),
            }
        }
    }
}
