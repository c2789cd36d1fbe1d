use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use unidissect::{
    check_divisibility, check_growth, check_ratio_bounds, dissect_verdict, make_pi, make_pi_bar,
    DfaSource, GrowthMode, LengthSet, Params, PiSet, RationalBound, Record, UnaryDfa,
};

/// Construct, enumerate, check and certify the geometrically growing unary
/// language Π.
#[derive(Debug, Parser)]
#[command(name = "unidissect", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a prefix of Π (or of Π̄ with --c).
    Gen(GenArgs),
    /// Run one of the property checks; exit 1 if a violation is found.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Certify that Π is not dissected by a unary automaton.
    Dissect(DissectArgs),
    /// Pick (alpha, beta) with 1 < beta/alpha < c.
    Suggest {
        #[arg(long)]
        c: RationalBound,
    },
    /// Unary automaton utilities.
    #[command(subcommand)]
    Dfa(DfaCommand),
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long)]
    alpha: u64,
    #[arg(long)]
    beta: u64,
}

impl ParamArgs {
    fn params(&self) -> Result<Params, Failure> {
        Ok(Params::new(self.alpha, self.beta)?)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
    Plain,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Number of elements to print (default 10).
    #[arg(long, conflicts_with = "n_max")]
    count: Option<usize>,
    /// Print every element with n <= N.
    #[arg(long)]
    n_max: Option<u64>,
    /// Restrict to the c-geometrically growing tail Π̄.
    #[arg(long)]
    c: Option<RationalBound>,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Geometric,
    Constant,
}

#[derive(Debug, Subcommand)]
enum CheckCommand {
    /// Check consecutive lengths against c (geometric or constant growth).
    Growth {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        c: RationalBound,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Geometric)]
        mode: ModeArg,
        /// Check Π̄ for this c instead of all of Π.
        #[arg(long)]
        bar: bool,
    },
    /// Check that ω(n) divides φ(j, n) for every index with n <= N.
    Divisibility {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n_max: u64,
    },
    /// Check successor ratios along the first K steps.
    Ratio {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 500)]
        count: usize,
    },
}

#[derive(Debug, Args)]
struct DissectArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Automaton JSON: normal form or transition table.
    #[arg(long, conflicts_with_all = ["q", "r"], required_unless_present = "r")]
    dfa: Option<PathBuf>,
    /// Use the automaton for { q + i r : i >= 1 }.
    #[arg(long, requires = "r", default_value_t = 0)]
    q: u64,
    #[arg(long)]
    r: Option<u64>,
    /// Also compare the verdict with the first K elements of Π.
    #[arg(long, value_name = "K")]
    cross_check: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum DfaCommand {
    /// Print the tail + cycle normal form.
    Normalize {
        #[arg(long)]
        dfa: PathBuf,
    },
    /// Print the REG(1) components and exceptional lengths.
    Decompose {
        #[arg(long)]
        dfa: PathBuf,
    },
}

/// Why a run stopped early: usage/input problems map to exit 2.
#[derive(Debug)]
enum Failure {
    Input(String),
    Output(io::Error),
}

impl From<unidissect::Error> for Failure {
    fn from(e: unidissect::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Output(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Output(e.into())
    }
}

/// Outcome of a successful run: whether a property violation was found.
enum Outcome {
    Clean,
    Violation,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out).and_then(|o| {
        out.flush()?;
        Ok(o)
    });
    match result {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(Failure::Output(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Output(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Result<Outcome, Failure> {
    match command {
        Command::Gen(args) => gen(args, out),
        Command::Check(check) => run_check(check, out),
        Command::Dissect(args) => dissect(args, out),
        Command::Suggest { c } => {
            emit(out, &Params::suggest(&c)?)?;
            Ok(Outcome::Clean)
        }
        Command::Dfa(DfaCommand::Normalize { dfa }) => {
            emit(out, &read_dfa(&dfa)?)?;
            Ok(Outcome::Clean)
        }
        Command::Dfa(DfaCommand::Decompose { dfa }) => {
            emit(out, &read_dfa(&dfa)?.decompose_reg1())?;
            Ok(Outcome::Clean)
        }
    }
}

fn emit<T: Serialize>(out: &mut impl Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn gen(args: GenArgs, out: &mut impl Write) -> Result<Outcome, Failure> {
    let params = args.params.params()?;
    let set = match &args.c {
        Some(c) => make_pi_bar(params, c)?,
        None => make_pi(params),
    };
    let elements: Box<dyn Iterator<Item = _>> = match (args.count, args.n_max) {
        (_, Some(n_max)) => {
            Box::new(set.take_while(move |e| e.index.is_some_and(|i| i.n <= n_max)))
        }
        (count, None) => Box::new(set.take(count.unwrap_or(10))),
    };
    if let Format::Csv = args.format {
        writeln!(out, "n,j,length")?;
    }
    for e in elements {
        match args.format {
            Format::Jsonl => emit(out, &Record::from(&e))?,
            Format::Csv => {
                let index = e.index.expect("pi elements carry indices");
                writeln!(out, "{},{},{}", index.n, index.j, e.length)?;
            }
            Format::Plain => writeln!(out, "{}", e.length)?,
        }
    }
    Ok(Outcome::Clean)
}

fn run_check(check: CheckCommand, out: &mut impl Write) -> Result<Outcome, Failure> {
    let ok = match check {
        CheckCommand::Growth {
            params,
            c,
            count,
            mode,
            bar,
        } => {
            let params = params.params()?;
            let mut set: PiSet = if bar {
                make_pi_bar(params, &c)?
            } else {
                make_pi(params)
            };
            let mode = match mode {
                ModeArg::Geometric => GrowthMode::Geometric,
                ModeArg::Constant => GrowthMode::Constant,
            };
            let report = check_growth(&mut set, mode, &c, count)?;
            emit(
                out,
                &Labeled {
                    check: "growth",
                    set: set.descriptor(),
                    report: &report,
                },
            )?;
            report.ok
        }
        CheckCommand::Divisibility { params, n_max } => {
            let report = check_divisibility(params.params()?, n_max)?;
            emit(
                out,
                &Labeled {
                    check: "divisibility",
                    set: make_pi(report.params).descriptor(),
                    report: &report,
                },
            )?;
            report.ok
        }
        CheckCommand::Ratio { params, count } => {
            let report = check_ratio_bounds(params.params()?, count)?;
            for gap in &report.gaps {
                eprintln!(
                    "note: successor of {} skips to {}; no index exists for the n in between",
                    gap.from, gap.to
                );
            }
            emit(
                out,
                &Labeled {
                    check: "ratio",
                    set: make_pi(report.params).descriptor(),
                    report: &report,
                },
            )?;
            report.ok
        }
    };
    Ok(if ok {
        Outcome::Clean
    } else {
        Outcome::Violation
    })
}

#[derive(Serialize)]
struct Labeled<'a, T> {
    check: &'static str,
    set: String,
    #[serde(flatten)]
    report: &'a T,
}

fn read_dfa(path: &Path) -> Result<UnaryDfa, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let source: DfaSource = serde_json::from_str(&text).map_err(|e| {
        Failure::Input(format!(
            "{}: not a unary automaton ({{\"tail\",\"cycle\"}} or {{\"transitions\",\"start\",\"accepting\"}}): {e}",
            path.display()
        ))
    })?;
    Ok(source.normalize()?)
}

fn dissect(args: DissectArgs, out: &mut impl Write) -> Result<Outcome, Failure> {
    let params = args.params.params()?;
    let dfa = match (&args.dfa, args.r) {
        (Some(path), _) => read_dfa(path)?,
        (None, Some(r)) => UnaryDfa::progression(args.q, r)?,
        (None, None) => return Err(Failure::Input("one of --dfa or --r is required".into())),
    };
    let mut verdict = dissect_verdict(params, &dfa);
    if let Some(k) = args.cross_check {
        verdict.cross_check = Some(unidissect::analysis::cross_check_verdict(&verdict, k)?);
    }
    emit(out, &verdict)?;
    Ok(match verdict.cross_check {
        Some(false) => Outcome::Violation,
        _ => Outcome::Clean,
    })
}
