use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use karp_core::genlab::{generate, GeneratorSpec};
use karp_core::growth::audit;
use karp_core::instances::verify_certificate;
use karp_core::io::{
    parse_dimacs, parse_edge_list, problem_from_edge_list, problem_to_edge_list, read_json, read_problem, read_text,
    to_json, write_dimacs, write_text,
};
use karp_core::oracles::{solve, DEFAULT_BUDGET};
use karp_core::reductions::{by_id, route_to_kernel, Chain};
use karp_core::{measure, Certificate, Error, Problem, ProblemKind, Result};

const YES: u8 = 0;
const NO: u8 = 1;
const USAGE: u8 = 2;
const REFUSED: u8 = 3;

#[derive(Parser)]
#[command(name = "karp", version, about = "Reduce, solve, verify and audit instances of Karp's 21 problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply one reduction.
    Reduce {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        via: String,
        #[command(flatten)]
        output: Output,
        /// Also write the one-link chain manifest here.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Route an instance into the kernel.
    Route {
        #[command(flatten)]
        input: Input,
        #[arg(long, required = true)]
        to_kernel: bool,
        #[command(flatten)]
        output: Output,
        /// Where to write the chain manifest (a JSON list of reduction ids).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Decide an instance exhaustively; writes the certificate on YES.
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Check a certificate against an instance.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Lift a certificate for a chain's output back to the chain's source.
    Lift {
        /// The chain's source instance.
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Audit a reduction's size growth over a generated family.
    Audit {
        #[arg(long)]
        reduction: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, num_args = 1.., required = true)]
        scales: Vec<usize>,
        /// Generator spec for the family; its seed and size are overridden.
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long)]
        density: Option<f64>,
        #[arg(long)]
        json: bool,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Generate an instance from a generator spec.
    Gen {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Print an instance's size.
    Measure {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dimacs,
    Edgelist,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Element,
    Bits,
}

#[derive(Args)]
struct Input {
    /// Instance file, `-` for stdin.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Kind for edge-list input, or `threesat` for DIMACS input.
    #[arg(long)]
    kind: Option<ProblemKind>,
    /// Scalar parameter for edge-list input (k, l, threshold or budget).
    #[arg(long)]
    param: Option<u64>,
    /// Steiner terminals for edge-list input.
    #[arg(long, value_delimiter = ',')]
    terminals: Vec<usize>,
}

#[derive(Args)]
struct Output {
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    emit: Format,
}

impl Input {
    fn read(&self) -> Result<Problem> {
        let problem = match self.format {
            Format::Json => return read_problem(&self.input),
            Format::Dimacs => {
                let f = parse_dimacs(&read_text(&self.input)?)?;
                match self.kind {
                    None | Some(ProblemKind::Sat) => Problem::Sat(f),
                    Some(ProblemKind::ThreeSat) => Problem::ThreeSat(f),
                    Some(other) => return Err(Error::InvalidInstance(format!("DIMACS input cannot be `{other}`"))),
                }
            }
            Format::Edgelist => {
                let kind = self
                    .kind
                    .ok_or_else(|| Error::InvalidInstance("edge-list input needs --kind".into()))?;
                let list = parse_edge_list(&read_text(&self.input)?)?;
                return problem_from_edge_list(kind, list, self.param, &self.terminals);
            }
        };
        problem.validate()?;
        Ok(problem)
    }
}

impl Output {
    fn write(&self, problem: &Problem) -> Result<()> {
        let text = match (self.emit, problem) {
            (Format::Json, _) => to_json(problem)?,
            (Format::Dimacs, Problem::Sat(f) | Problem::ThreeSat(f)) => write_dimacs(f),
            (Format::Edgelist, p) => problem_to_edge_list(p)
                .ok_or_else(|| Error::InvalidInstance(format!("`{}` has no edge-list form", p.kind())))?,
            (Format::Dimacs, p) => return Err(Error::InvalidInstance(format!("`{}` has no DIMACS form", p.kind()))),
        };
        write_text(&self.output, &text)
    }
}

fn write_manifest(path: &Path, chain: &Chain) -> Result<()> {
    write_text(path, &to_json(&chain.ids())?)
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Reduce {
            input,
            via,
            output,
            manifest,
        } => {
            let r = by_id(&via)?;
            let target = r.apply(&input.read()?)?;
            output.write(&target)?;
            if let Some(path) = manifest {
                write_manifest(&path, &Chain::new(vec![r])?)?;
            }
            Ok(YES)
        }
        Command::Route {
            input,
            output,
            manifest,
            ..
        } => {
            let source = input.read()?;
            let chain = route_to_kernel(source.kind());
            let trace = chain.apply(&source)?;
            output.write(trace.output())?;
            eprintln!("chain: {}", to_json(&chain.ids())?.replace('\n', "").replace("  ", ""));
            if let Some(path) = manifest {
                write_manifest(&path, &chain)?;
            }
            Ok(YES)
        }
        Command::Solve { input, budget, output } => {
            let verdict = solve(&input.read()?, budget)?;
            eprintln!("{} ({} candidates explored)", verdict.answer, verdict.explored);
            match verdict.certificate {
                Some(cert) => {
                    write_text(&output, &to_json(&cert)?)?;
                    Ok(YES)
                }
                None => Ok(NO),
            }
        }
        Command::Verify { input, cert } => {
            let cert: Certificate = read_json(&cert)?;
            let ok = verify_certificate(&input.read()?, &cert)?;
            eprintln!("{}", if ok { "valid" } else { "invalid" });
            Ok(if ok { YES } else { NO })
        }
        Command::Lift {
            input,
            chain,
            cert,
            output,
        } => {
            let ids: Vec<String> = read_json(&chain)?;
            let chain = Chain::from_ids(&ids)?;
            let cert: Certificate = read_json(&cert)?;
            let lifted = chain.lift(&input.read()?, &cert)?;
            write_text(&output, &to_json(&lifted)?)?;
            Ok(YES)
        }
        Command::Audit {
            reduction,
            seed,
            scales,
            family,
            density,
            json,
            output,
        } => {
            let r = by_id(&reduction)?;
            let mut spec = match family {
                Some(path) => read_json::<GeneratorSpec>(&path)?,
                None => GeneratorSpec::new(r.source, seed, 0),
            };
            spec.seed = seed;
            if density.is_some() {
                spec.density = density;
            }
            let report = audit(&reduction, &spec, &scales)?;
            let text = if json { to_json(&report)? } else { report.to_table() };
            write_text(&output, &text)?;
            Ok(if report.passed && report.formulas_hold { YES } else { NO })
        }
        Command::Gen { spec, output } => {
            let spec: GeneratorSpec = read_json(&spec)?;
            output.write(&generate(&spec)?)?;
            Ok(YES)
        }
        Command::Measure { input, mode, output } => {
            let size = measure(&input.read()?)?;
            let text = match mode {
                Some(Mode::Element) => format!("{}\n", size.elements),
                Some(Mode::Bits) => format!("{}\n", size.bits),
                None => to_json(&size)?,
            };
            write_text(&output, &text)?;
            Ok(YES)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("karp: {e}");
            ExitCode::from(match e {
                Error::BudgetExceeded { .. } | Error::VarCapExceeded { .. } => REFUSED,
                _ => USAGE,
            })
        }
    }
}
