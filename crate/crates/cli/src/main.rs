use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use superschottky::experiment::{sweep, ExperimentSpec, HChoice};
use superschottky::json::{self, ErrorJson};
use superschottky::sample::HeightBox;
use superschottky::Error;

/// Exact checks of super period maps, Berezinians and hyperelliptic Massey products.
#[derive(Parser)]
#[command(name = "superschottky", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// JSON input file; `-` or omitted reads stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file; omitted writes stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum HArg {
    Monomial,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Exact rank of Σ B(H_i) over random zero sets, as CSV.
    SchottkyRank {
        /// Genera, e.g. `5,7,9`, `4..12/2` (inclusive range with step).
        #[arg(long, default_value = "5..13/2")]
        genus: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Numerator bound for sampled zeros.
        #[arg(long, default_value_t = 20)]
        num_bound: i64,
        /// Denominator bound for sampled zeros.
        #[arg(long, default_value_t = 5)]
        den_bound: i64,
        #[arg(long, value_enum, default_value_t = HArg::Monomial)]
        h: HArg,
        /// Also check the rank of the full skew operator.
        #[arg(long)]
        check_operator: bool,
        /// Read the whole experiment spec from JSON instead of flags.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Pfaffian and Pfaffian adjugate of a skew matrix.
    Pfaffian(Io),
    /// Berezinian of an even supermatrix.
    Berezinian(Io),
    /// Massey product m3 on a hyperelliptic configuration.
    Massey(Io),
    /// A_ξ blocks, skew parts and their ranks.
    Skew(Io),
    /// Compose two coordinate maps and test superconformality.
    Compose(Io),
    /// Write a superconformal map as S_f ∘ T_φ.
    Factorize(Io),
    /// Tangent map and second variation of a family of subspaces.
    SecondVariation(Io),
}

enum Failure {
    Usage(String),
    Compute(Error),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

fn parse_genera(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Usage(format!("cannot parse genus list `{text}`"));
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (range, step) = match item.split_once('/') {
            Some((r, s)) => (r, s.parse::<usize>().map_err(|_| bad())?),
            None => (item, 1),
        };
        if step == 0 {
            return Err(bad());
        }
        match range.split_once("..") {
            Some((a, b)) => {
                let a: usize = a.parse().map_err(|_| bad())?;
                let b: usize = b.trim_start_matches('=').parse().map_err(|_| bad())?;
                out.extend((a..=b).step_by(step));
            }
            None => out.push(range.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
        }
        _ => {
            io::stdin().read_to_string(&mut text).map_err(|e| Failure::Usage(e.to_string()))?;
        }
    }
    Ok(text)
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn json_command<I: DeserializeOwned, O: Serialize>(
    io: &Io,
    run: impl Fn(&I) -> superschottky::Result<O>,
) -> Result<(), Failure> {
    let text = read_input(&io.input)?;
    let input: I = serde_json::from_str(&text).map_err(|e| Failure::Compute(Error::Parse(e.to_string())))?;
    let out = run(&input)?;
    let mut body = serde_json::to_string_pretty(&out).expect("serializable");
    body.push('\n');
    write_output(&io.output, &body)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::SchottkyRank { genus, samples, seed, num_bound, den_bound, h, check_operator, spec, output } => {
            let spec = match spec {
                Some(p) => {
                    let text = read_input(&Some(p))?;
                    serde_json::from_str::<ExperimentSpec>(&text).map_err(|e| Failure::Usage(e.to_string()))?
                }
                None => ExperimentSpec {
                    genera: parse_genera(&genus)?,
                    samples,
                    seed,
                    sampling: HeightBox::new(num_bound, den_bound).map_err(|e| Failure::Usage(e.to_string()))?,
                    h: match h {
                        HArg::Monomial => HChoice::Monomial,
                        HArg::Random => HChoice::Random,
                    },
                    check_operator,
                },
            };
            spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let report = sweep(&spec)?;
            for row in report.rows.iter().filter(|r| r.skipped()) {
                eprintln!("skipped g={} sample={}: {}", row.g, row.seed_index, row.note.as_deref().unwrap_or(""));
            }
            write_output(&output, &report.to_csv())?;
            eprintln!("pass={} fail={} skip={}", report.passes(), report.failures(), report.skips());
            if report.failures() > 0 {
                return Err(Failure::Mismatch);
            }
            Ok(())
        }
        Command::Pfaffian(io) => json_command(&io, json::run_pfaffian),
        Command::Berezinian(io) => json_command(&io, json::run_berezinian),
        Command::Massey(io) => json_command(&io, json::run_massey),
        Command::Skew(io) => json_command(&io, json::run_skew),
        Command::Compose(io) => json_command(&io, json::run_compose),
        Command::Factorize(io) => json_command(&io, json::run_factorize),
        Command::SecondVariation(io) => json_command(&io, json::run_second_variation),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("{}", serde_json::to_string(&ErrorJson::of(&e)).expect("serializable"));
            ExitCode::from(1)
        }
        Err(Failure::Mismatch) => ExitCode::from(2),
    }
}
