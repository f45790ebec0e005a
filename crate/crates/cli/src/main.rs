//! `gsd`: batch commands over diagram documents.
//!
//! Exit codes: 0 on success, 1 when an input is rejected (invalid diagram,
//! incompatible value, failed check), 2 on usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gsd_core::causal::{as_causal_model, conditional_independence};
use gsd_core::dot::dot_export;
use gsd_core::eval::{check_compatibility, evaluate, Functions, Kernel, Stochastic, Substochastic, TargetCategory, DEFAULT_TOLERANCE};
use gsd_core::io::{self, DocumentBundle};
use gsd_core::{
    bloom_circuitry_factorize, canonical_form, complexity, compose, iso_equal, normalize, tensor, Diagram,
    FormatError, Interpretation,
};

#[derive(Parser)]
#[command(name = "gsd", version, about = "String diagrams as acyclic cospans of hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every diagram in a document and print its violations.
    Validate { file: PathBuf },
    /// Sequential composition: A then B.
    Compose(Pair),
    /// Parallel composition: A beside B.
    Tensor(Pair),
    /// Remove boxes whose outputs are never read.
    Normalize(Single),
    /// Split a diagram into a bloom followed by circuitry.
    Factorize(Single),
    /// Print the complexity of a diagram.
    Complexity(Single),
    /// Print whether two diagrams are isomorphic.
    Iso(Pair),
    /// Replace a diagram by its canonical representative.
    Canon(Single),
    /// Evaluate a diagram under an interpretation and print its matrix.
    Eval(EvalArgs),
    /// Decide conditional independence between output positions.
    Ci(CiArgs),
    /// Render a diagram as Graphviz DOT.
    Dot(Single),
}

#[derive(Args)]
struct Single {
    file: PathBuf,
    #[arg(short = 'd', long = "diagram")]
    name: String,
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Pair {
    file: PathBuf,
    #[arg(short = 'a')]
    first: String,
    #[arg(short = 'b')]
    second: String,
    /// Compose in the Markov category (normalize the result).
    #[arg(long)]
    markov: bool,
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Stochastic,
    Substochastic,
    Function,
}

#[derive(Args)]
struct EvalArgs {
    file: PathBuf,
    #[arg(short = 'd', long = "diagram")]
    name: String,
    /// Interpretation file; defaults to the document's own interpretation.
    #[arg(long)]
    interp: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "stochastic")]
    backend: Backend,
    /// Tolerance for `--expect`.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// A JSON matrix to compare the value against.
    #[arg(long)]
    expect: Option<PathBuf>,
}

#[derive(Args)]
struct CiArgs {
    file: PathBuf,
    #[arg(short = 'd', long = "diagram")]
    name: String,
    #[arg(long, value_delimiter = ',', required = true)]
    left: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    right: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    given: Vec<usize>,
}

enum Failure {
    Usage(anyhow::Error),
    Rejected(anyhow::Error),
}

type Outcome = Result<ExitCode, Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn rejected(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Rejected(e.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(usage)
}

fn load(path: &Path) -> Result<DocumentBundle, Failure> {
    io::parse(&read(path)?).map_err(rejected)
}

fn pick<'a>(bundle: &'a DocumentBundle, name: &str) -> Result<&'a Diagram, Failure> {
    bundle.diagram(name).ok_or_else(|| usage(anyhow!("no diagram named `{name}`")))
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(usage)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_diagrams(bundle: &DocumentBundle, diagrams: Vec<(&str, Diagram)>, out: Option<&Path>) -> Outcome {
    let mut result = DocumentBundle {
        signature: bundle.signature.clone(),
        ..Default::default()
    };
    for (name, d) in diagrams {
        result.insert(name, d);
    }
    emit(&io::serialize(&result), out)
}

fn validate(file: &Path) -> Outcome {
    let lenient = match io::parse_lenient(&read(file)?) {
        Ok(b) => b,
        Err(e) => {
            println!("{e}");
            return Ok(ExitCode::from(1));
        }
    };
    let mut bad = 0;
    for (name, result) in &lenient.diagrams {
        match result {
            Ok(_) => println!("{name}: valid"),
            Err(violations) => {
                bad += 1;
                println!("{name}: {} violation(s)", violations.len());
                for v in violations {
                    println!("  {}: {v}", v.class());
                }
            }
        }
    }
    Ok(if bad == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn pair(args: &Pair, op: fn(&Diagram, &Diagram) -> Result<Diagram, gsd_core::DiagramError>) -> Outcome {
    let bundle = load(&args.file)?;
    let (a, b) = (pick(&bundle, &args.first)?, pick(&bundle, &args.second)?);
    let mut d = op(a, b).map_err(rejected)?;
    if args.markov {
        d = normalize(&d);
    }
    emit_diagrams(&bundle, vec![("result", d)], args.out.as_deref())
}

fn interpretation(args: &EvalArgs, bundle: &DocumentBundle, d: &Diagram) -> Result<Interpretation, Failure> {
    match &args.interp {
        Some(path) => io::parse_interpretation(&read(path)?, d.signature()).map_err(rejected),
        None => bundle
            .interpretation
            .clone()
            .ok_or_else(|| usage(anyhow!("no interpretation: pass --interp FILE"))),
    }
}

fn run_eval<T: TargetCategory>(backend: &T, args: &EvalArgs, interp: &Interpretation, d: &Diagram) -> Outcome {
    let value = evaluate(backend, interp, d).map_err(rejected)?;
    let kernel = backend.to_kernel(&value);
    let Some(path) = &args.expect else {
        return emit(&io::to_text(&io::matrix_to_value(&kernel.to_rows())), None);
    };
    let rows: Vec<Vec<f64>> = expected_rows(&read(path)?)?;
    let expected = Kernel::from_rows(interp.shape(d.dom()).map_err(rejected)?, interp.shape(d.cod()).map_err(rejected)?, &rows)
        .map_err(rejected)?;
    if check_compatibility(backend, interp, d, &expected, args.tol).map_err(rejected)? {
        println!("compatible");
        Ok(ExitCode::SUCCESS)
    } else {
        let gap = kernel.max_abs_diff(&expected).unwrap_or(f64::INFINITY);
        println!("incompatible: max-abs difference {gap:e} exceeds {:e}", args.tol);
        Ok(ExitCode::from(1))
    }
}

fn expected_rows(text: &str) -> Result<Vec<Vec<f64>>, Failure> {
    match io::parse_matrix(text) {
        Ok(rows) => Ok(rows),
        Err(FormatError::Syntax { .. }) | Err(FormatError::Schema { .. }) => {
            Err(usage(anyhow!("--expect must be a JSON list of rows")))
        }
        Err(e) => Err(rejected(e)),
    }
}

fn eval(args: &EvalArgs) -> Outcome {
    let bundle = load(&args.file)?;
    let d = pick(&bundle, &args.name)?;
    let interp = interpretation(args, &bundle, d)?;
    match args.backend {
        Backend::Stochastic => run_eval(&Stochastic, args, &interp, d),
        Backend::Substochastic => run_eval(&Substochastic, args, &interp, d),
        Backend::Function => run_eval(&Functions, args, &interp, d),
    }
}

fn ci(args: &CiArgs) -> Outcome {
    let bundle = load(&args.file)?;
    let model = as_causal_model(pick(&bundle, &args.name)?).map_err(rejected)?;
    let holds = conditional_independence(&model, &args.left, &args.right, &args.given).map_err(rejected)?;
    println!("{holds}");
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Compose(args) => pair(&args, compose),
        Command::Tensor(args) => pair(&args, tensor),
        Command::Normalize(args) => {
            let bundle = load(&args.file)?;
            let d = normalize(pick(&bundle, &args.name)?);
            emit_diagrams(&bundle, vec![(args.name.as_str(), d)], args.out.as_deref())
        }
        Command::Factorize(args) => {
            let bundle = load(&args.file)?;
            let f = bloom_circuitry_factorize(pick(&bundle, &args.name)?);
            emit_diagrams(&bundle, vec![("bloom", f.bloom), ("circuitry", f.circuitry)], args.out.as_deref())
        }
        Command::Complexity(args) => {
            let bundle = load(&args.file)?;
            println!("{}", complexity(pick(&bundle, &args.name)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Iso(args) => {
            let bundle = load(&args.file)?;
            let same = iso_equal(pick(&bundle, &args.first)?, pick(&bundle, &args.second)?).map_err(rejected)?;
            println!("{same}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Canon(args) => {
            let bundle = load(&args.file)?;
            let d = canonical_form(pick(&bundle, &args.name)?).diagram;
            emit_diagrams(&bundle, vec![(args.name.as_str(), d)], args.out.as_deref())
        }
        Command::Eval(args) => eval(&args),
        Command::Ci(args) => ci(&args),
        Command::Dot(args) => {
            let bundle = load(&args.file)?;
            emit(&dot_export(pick(&bundle, &args.name)?), args.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Rejected(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn positions_split_on_commas() {
        let cli = Cli::try_parse_from(["gsd", "ci", "f.json", "-d", "m", "--left", "0,1", "--right", "2"]).unwrap();
        let Command::Ci(args) = cli.command else { panic!() };
        assert_eq!(args.left, vec![0, 1]);
        assert!(args.given.is_empty());
    }
}
